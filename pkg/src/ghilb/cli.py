"""Batch front end: ``ghilb <command> --input job.json``.

A job file is a JSON object::

    {"ring": {"vars": ["x", "y"], "char": 32003},
     "ideal": {"gens": ["x^2", "x*y"]},        # or {"minors": {"size": 2, "matrix": [[..], [..]]}}
     "module": {"gens": []},                    # optional: M = R/A
     "command": "series",                       # optional when given on the command line
     "params": {"t_max": 6, "s_max": 4, "seeds": [1, 2], "q": "m", ...}}

Polynomials use identifiers, integers, +, -, *, ^ and parentheses.
Exit codes: 0 success, 1 a check failed, 2 budget or instability, 3 bad input.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field, replace

import click

from . import bigraded as bg
from . import genhilbert as gh
from .algebra import DEFAULT_PRIME, AlgebraError, Polynomial, Ring, is_prime, random_linear_combination
from .groebner import BudgetExceeded
from .ideals import Ideal, InfiniteLength, SaturationError, minors
from .series import RationalSeries

SCHEMA = "1"

COMMANDS = (
    "series", "jcoeffs", "jmult", "spread", "reduction", "residual", "section",
    "singh-check", "bigraded-fit", "verify-prop24", "verify-invariance", "thm34-probe",
)

EXIT_OK, EXIT_CHECK, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class InputError(ValueError):
    """Bad job file; ``pos`` is a character offset into the offending string when known."""

    def __init__(self, message: str, pos: int | None = None, source: str | None = None):
        self.pos, self.source = pos, source
        if pos is not None and source is not None:
            message = f"{message} at position {pos}: {source!r}\n  {' ' * (pos + 1)}^"
        super().__init__(message)


# ---------------------------------------------------------------------------
# polynomial expressions
# ---------------------------------------------------------------------------

def _tokens(text: str):
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield ("int", text[i:j], i)
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            yield ("name", text[i:j], i)
            i = j
        elif c in "+-*^()":
            yield (c, c, i)
            i += 1
        elif c == "−":  # typographic minus
            yield ("-", "-", i)
            i += 1
        else:
            raise InputError(f"unexpected character {c!r}", i, text)
    yield ("end", "", n)


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text, self.ring = text, ring
        self.toks = list(_tokens(text))
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None):
        tok = self.toks[self.k]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            raise InputError(f"expected {want}", tok[2], self.text)
        self.k += 1
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise InputError("empty polynomial", 0, self.text)
        f = self.expr()
        self.take("end")
        return f

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        f = self.term().scale(sign) if sign < 0 else self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while self.peek()[0] == "*":
            self.take()
            f = f * self.factor()
        return f

    def factor(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            base = base ** int(tok[1])
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return self.ring.constant(int(val))
        if kind == "name":
            self.take()
            if val not in self.ring.names:
                raise InputError(f"unknown variable {val!r}", pos, self.text)
            return self.ring.var(val)
        if kind == "(":
            self.take()
            f = self.expr()
            self.take(")")
            return f
        raise InputError("expected a number, variable or '('", pos, self.text)


def parse_polynomial(text: str, ring: Ring, *, homogeneous: bool = True) -> Polynomial:
    if not isinstance(text, str):
        raise InputError(f"polynomial must be a string, got {text!r}")
    f = _Parser(text, ring).parse()
    if homogeneous and not f.homogeneous:
        raise InputError(f"generator {text!r} is not homogeneous")
    return f


# ---------------------------------------------------------------------------
# job specification
# ---------------------------------------------------------------------------

PARAM_DEFAULTS = {
    "t_max": None, "s_max": None, "seeds": (1,), "q": None, "k": (1,),
    "depth": 1, "s_probe": (2, 3), "method": "rees", "probe_t_max": 3,
}


@dataclass(frozen=True)
class JobSpec:
    vars: tuple
    char: int
    gens: tuple | None            # canonical generator strings
    minors: tuple | None          # (size, matrix of canonical entry strings)
    module: tuple = ()
    command: str | None = None
    t_max: int | None = None
    s_max: int | None = None
    seeds: tuple = (1,)
    q: tuple | None = None        # generator strings; None means the ideal of all variables
    k: tuple = (1,)
    depth: int = 1
    s_probe: tuple = (2, 3)
    method: str = "rees"
    probe_t_max: int = 3
    format: str = "text"

    @property
    def ring(self) -> Ring:
        return Ring(list(self.vars), self.char)

    def to_json(self) -> dict:
        out = {"ring": {"vars": list(self.vars), "char": self.char}}
        if self.minors is not None:
            size, matrix = self.minors
            out["ideal"] = {"minors": {"size": size, "matrix": [list(r) for r in matrix]}}
        else:
            out["ideal"] = {"gens": list(self.gens)}
        if self.module:
            out["module"] = {"gens": list(self.module)}
        if self.command is not None:
            out["command"] = self.command
        out["params"] = {
            "t_max": self.t_max, "s_max": self.s_max, "seeds": list(self.seeds),
            "q": "m" if self.q is None else list(self.q), "k": list(self.k), "depth": self.depth,
            "s_probe": list(self.s_probe), "method": self.method, "probe_t_max": self.probe_t_max,
        }
        out["format"] = self.format
        return out


def print_spec(spec: JobSpec) -> str:
    return json.dumps(spec.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _int(value, name: str, *, minimum: int | None = 0, allow_none: bool = False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise InputError(f"{name} must be at least {minimum}, got {value}")
    return value


def _int_list(value, name: str) -> tuple:
    if isinstance(value, int) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, (list, tuple)) or not value:
        raise InputError(f"{name} must be a non-empty list of integers")
    return tuple(_int(v, name) for v in value)


def _canon(texts, ring: Ring, what: str) -> tuple:
    if not isinstance(texts, list):
        raise InputError(f"{what} must be a list of strings")
    return tuple(str(parse_polynomial(t, ring)) for t in texts)


def parse_input(text: str) -> JobSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", exc.pos) from None
    if not isinstance(data, dict):
        raise InputError("job must be a JSON object")
    ring_d = data.get("ring")
    if not isinstance(ring_d, dict) or "vars" not in ring_d:
        raise InputError("missing ring.vars")
    names = ring_d["vars"]
    if not isinstance(names, list) or not names or not all(isinstance(v, str) and v.isidentifier() for v in names):
        raise InputError("ring.vars must be a non-empty list of identifiers")
    if len(set(names)) != len(names):
        raise InputError("ring.vars has duplicates")
    char = _int(ring_d.get("char", DEFAULT_PRIME), "ring.char", minimum=2)
    if not is_prime(char):
        raise InputError(f"characteristic {char} is not prime")
    ring = Ring(names, char)

    ideal_d = data.get("ideal")
    if not isinstance(ideal_d, dict):
        raise InputError("missing ideal")
    gens = mins = None
    if "minors" in ideal_d:
        m = ideal_d["minors"]
        if not isinstance(m, dict):
            raise InputError("ideal.minors must be an object with size and matrix")
        size = _int(m.get("size"), "ideal.minors.size", minimum=1)
        matrix = m.get("matrix")
        if not isinstance(matrix, list) or not matrix or not all(isinstance(r, list) and r for r in matrix):
            raise InputError("malformed matrix: expected a non-empty list of non-empty rows")
        if len({len(r) for r in matrix}) != 1:
            raise InputError("malformed matrix: rows have different lengths")
        if size > min(len(matrix), len(matrix[0])):
            raise InputError(f"malformed matrix: no {size}x{size} minors in a {len(matrix)}x{len(matrix[0])} matrix")
        mins = (size, tuple(_canon(r, ring, "matrix row") for r in matrix))
    elif "gens" in ideal_d:
        gens = _canon(ideal_d["gens"], ring, "ideal.gens")
        if not gens:
            raise InputError("ideal.gens is empty")
    else:
        raise InputError("ideal needs gens or minors")

    module = ()
    if "module" in data:
        mod = data["module"]
        if not isinstance(mod, dict) or "gens" not in mod:
            raise InputError("module must be an object with gens")
        module = _canon(mod["gens"], ring, "module.gens")

    command = data.get("command")
    if command is not None and command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise InputError("params must be an object")
    unknown = set(params) - set(PARAM_DEFAULTS)
    if unknown:
        raise InputError(f"unknown parameter(s) {sorted(unknown)}")
    p = dict(PARAM_DEFAULTS, **params)
    q = p["q"]
    if q is None or q == "m":
        q = None
    else:
        q = _canon(q, ring, "params.q")
    method = p["method"]
    if method not in ("rees", "direct"):
        raise InputError(f"unknown method {method!r}")
    fmt = data.get("format", "text")
    if fmt not in ("text", "json"):
        raise InputError(f"unknown format {fmt!r}")
    return JobSpec(
        vars=tuple(names), char=char, gens=gens, minors=mins, module=module, command=command,
        t_max=_int(p["t_max"], "t_max", allow_none=True), s_max=_int(p["s_max"], "s_max", allow_none=True),
        seeds=_int_list(p["seeds"], "seeds"), q=q, k=_int_list(p["k"], "k"),
        depth=_int(p["depth"], "depth", minimum=1), s_probe=_int_list(p["s_probe"], "s_probe"),
        method=method, probe_t_max=_int(p["probe_t_max"], "probe_t_max"), format=fmt,
    )


def build_module(spec: JobSpec) -> gh.ModuleSpec:
    ring = spec.ring
    if spec.minors is not None:
        size, matrix = spec.minors
        I = minors(size, [[parse_polynomial(e, ring, homogeneous=False) for e in row] for row in matrix])
        if I.is_zero:
            raise InputError("all minors vanish")
        if not I.homogeneous:
            raise InputError("minors are not homogeneous")
    else:
        I = Ideal(ring, [parse_polynomial(g, ring) for g in spec.gens])
        if I.is_zero:
            raise InputError("ideal is zero")
    A = Ideal(ring, [parse_polynomial(g, ring) for g in spec.module])
    return gh.ModuleSpec.make(I, A)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

@dataclass
class Report:
    command: str
    spec: JobSpec
    fields: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)     # text rendering, in order
    checks: list = field(default_factory=list)    # (name, passed)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def check(self, name: str, ok: bool):
        self.checks.append((name, bool(ok)))


def _series_fields(series: RationalSeries, d: int | None) -> dict:
    if series.is_zero:
        return {"numerator": [], "denomExponent": 0, "series": "0", "note": "W = 0"}
    norm = series.normalized()
    out = {"numerator": list(norm.numerator), "denomExponent": norm.denom, "series": str(norm)}
    if d is not None and norm.denom <= d + 1:
        raw = norm.with_denom(d + 1)
        out["raw"] = {"numerator": list(raw.numerator), "denomExponent": raw.denom, "series": str(raw)}
    return out


def _series_lines(prefix: str, f: dict) -> list:
    lines = [f"{prefix}: {f['series']}"]
    if "raw" in f and f["raw"]["series"] != f["series"]:
        lines.append(f"{prefix} (over (1-z)^{f['raw']['denomExponent']}): {f['raw']['series']}")
    if "note" in f:
        lines.append(f["note"])
    return lines


def _tuple(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _q_ideal(spec: JobSpec, ring: Ring) -> Ideal | None:
    if spec.q is None:
        return None
    return Ideal(ring, [parse_polynomial(g, ring) for g in spec.q])


def run_command(spec: JobSpec, command: str | None = None) -> Report:
    command = command or spec.command
    if command is None:
        raise InputError("no command given")
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    mod = build_module(spec)
    ring = mod.ring
    rep = Report(command, spec)
    f, lines = rep.fields, rep.lines
    seed0 = spec.seeds[0]
    start = time.perf_counter()

    if command in ("series", "jcoeffs", "jmult"):
        data = gh.generalized_series(mod, spec.t_max, method=spec.method, seed=seed0)
        if not data.stable:
            raise gh.UnstableData("generalized series did not stabilize; increase t_max")
        f.update(d=mod.d, seed=data.seed, method=data.method)
        if command == "series":
            sf = _series_fields(data.series, mod.d)
            f.update(sf)
            f.update(epsilon=data.epsilon, cumulative=data.cumulative, jCoeffs=list(data.j),
                     stabilizationDegree=data.stabilization)
            lines += _series_lines("series", sf)
            lines.append(f"j: {_tuple(data.j)}")
            lines.append(f"epsilon(0..{len(data.epsilon) - 1}): {' '.join(map(str, data.epsilon))}")
            lines.append(f"H(0..{len(data.cumulative) - 1}): {' '.join(map(str, data.cumulative))}")
        elif command == "jcoeffs":
            f["jCoeffs"] = list(data.j)
            lines.append(f"j: {_tuple(data.j)}")
        else:
            f.update(jmult=data.j[0], jCoeffs=list(data.j))
            lines.append(f"j0: {data.j[0]}")
        for n in data.notes:
            lines.append(f"note: {n}")

    elif command == "spread":
        ell = gh.analytic_spread(mod.I, mod.A)
        f.update(spread=ell, d=mod.d)
        lines.append(f"analytic spread: {ell}")
        lines.append(f"dim M: {mod.d}")

    elif command == "reduction":
        runs = []
        for s in spec.seeds:
            red = gh.minimal_reduction(mod.I, s, A=mod.A)
            entry = {"seed": s, "spread": red.spread, "reductionNumber": red.reduction_number, "lengths": red.lengths}
            runs.append(entry)
            l1 = red.lengths[1] if len(red.lengths) > 1 else 0
            lines.append(f"seed {s}: reduction number {red.reduction_number}, lambda(I^2/JI)={l1}")
        f["reductions"] = runs

    elif command == "residual":
        runs = []
        for s in spec.seeds:
            series = gh.residual_series(mod, s, spec.t_max)
            sf = _series_fields(series, None)
            runs.append(dict(seed=s, **sf))
            lines.append(f"seed {s}: residual series {sf['series']}")
        f["residual"] = runs
        forms = {r["series"] for r in runs}
        rep.check("seed-independent", len(forms) == 1)

    elif command == "section":
        runs = []
        for s in spec.seeds:
            for k in spec.k:
                sec = gh.section(mod, k, s)
                data = gh.generalized_series(sec, spec.t_max, seed=s)
                sf = _series_fields(data.series, sec.d)
                runs.append(dict(seed=s, k=k, d=sec.d, krullDim=sec.krull_dim, jCoeffs=list(data.j), **sf))
                lines.append(f"seed {s}, {k} section(s): {sf['series']}  j={_tuple(data.j)}")
        f["sections"] = runs

    elif command == "singh-check":
        q = _q_ideal(spec, ring)
        s_max = spec.s_max if spec.s_max is not None else 4
        t_max = spec.t_max if spec.t_max is not None else 4
        runs = []
        for s in spec.seeds:
            x = random_linear_combination(mod.I.gens, 1, s).elements[0]
            res = bg.singh_check(q, mod.I, mod.A, x, s_max, t_max)
            runs.append(dict(seed=s, **res.to_json()))
            bad = [c for c in res.cells if not c["pass"]]
            lines.append(f"seed {s}: {len(res.cells)} cells, {len(bad)} failures, t0={res.t0}, beta={res.beta}")
            rep.check(f"singh seed {s}", res.passed)
            if (mod.I + mod.A).dimension() <= 0:
                cl = bg.classical_singh(mod.I, mod.A, x, t_max)
                runs[-1]["classical"] = cl
                lines.append(f"seed {s}: classical formula {'holds' if cl['pass'] else 'FAILS'} for t <= {t_max}")
                rep.check(f"classical seed {s}", cl["pass"])
        f.update(grid=[s_max, t_max], singh=runs)

    elif command == "bigraded-fit":
        q = _q_ideal(spec, ring)
        table = bg.bigraded_table(q, mod.I, mod.A, s_max=spec.s_max, t_max=spec.t_max, d=mod.d)
        bg.fit_bivariate(table)
        cc = bg.ciuperca_coefficients(table)
        f.update(table=table.to_json(), ciuperca=[list(t.values) for t in cc.tuples], a0d=cc.a0d)
        lines.append(f"grid: s <= {table.s_max}, t <= {table.t_max} ({table.mode})")
        for t in cc.tuples:
            lines.append(f"j_{t.i}(q,I,M) = {_tuple(t.values)}")
        lines.append(f"agreement corners: {table.fit_meta['agreementCorners']}")
        rep.check("shift relations", table.fit_meta.get("shiftRelations", False))

    elif command == "verify-prop24":
        q = _q_ideal(spec, ring)
        res = bg.verify_prop24(q, mod.I, mod.A, s_max=spec.s_max, t_max=spec.t_max, seed=seed0)
        f["prop24"] = res.to_json()
        for a in res.attempts:
            status = "pass" if a["passed"] else ("error: " + a["error"] if "error" in a else "fail")
            lines.append(f"q = {a['q']}: {status}")
        lines.append("inconclusive" if res.inconclusive else f"holds with q = {res.q_label}")
        rep.check("prop24", res.passed)

    elif command == "verify-invariance":
        steps = bg.hyperplane_invariance_check(mod, spec.seeds, depth=spec.depth, probe_t_max=spec.probe_t_max)
        f["steps"] = [s.to_json() for s in steps]
        for s in steps:
            lines.append(
                f"seed {s.seed} step {s.step}: j {_tuple(s.j_before)} -> {_tuple(s.j_after)}, "
                f"delta j_{s.d_before - 1} = {s.delta}, probe {'passes' if s.probe else 'fails'}"
                + ("" if s.signed_ok is None else f", (-1)^(d-1)*delta >= 0: {'yes' if s.signed_ok else 'no'}")
            )
            rep.check(f"seed {s.seed} step {s.step}", s.passed)

    elif command == "thm34-probe":
        q = _q_ideal(spec, ring)
        rows = bg.thm34_probe(mod, q, spec.s_probe, spec.seeds)
        f["probe"] = rows
        for r in rows:
            lines.append(f"seed {r['seed']} i={r['i']} s={r['s']}: {'equal' if r['pass'] else 'differ'}")

    rep.timings["total"] = round(time.perf_counter() - start, 3)
    return rep


def _echo(spec: JobSpec) -> dict:
    echo = spec.to_json()
    echo.pop("format", None)
    return echo


def emit_report(rep: Report, fmt: str = "text", *, timings: bool = False) -> bytes:
    if fmt == "json":
        out = {"schema": SCHEMA, "command": rep.command, "input": _echo(rep.spec), "seeds": list(rep.spec.seeds)}
        out.update(rep.fields)
        out["checks"] = [{"name": n, "pass": ok} for n, ok in rep.checks]
        if timings:
            out["timings"] = rep.timings
        return (json.dumps(out, indent=2, sort_keys=True) + "\n").encode("utf-8")
    if fmt != "text":
        raise InputError(f"unknown format {fmt!r}")
    spec = rep.spec
    head = [
        f"command: {rep.command}",
        f"ring: F_{spec.char}[{','.join(spec.vars)}]",
    ]
    if spec.minors is not None:
        size, matrix = spec.minors
        head.append(f"ideal: {size}x{size} minors of [{'; '.join(' '.join(r) for r in matrix)}]")
    else:
        head.append(f"ideal: ({', '.join(spec.gens)})")
    if spec.module:
        head.append(f"module: R/({', '.join(spec.module)})")
    head.append(f"seeds: {' '.join(map(str, spec.seeds))}")
    body = list(rep.lines)
    body += [f"check {n}: {'pass' if ok else 'FAIL'}" for n, ok in rep.checks]
    if timings:
        body += [f"time {k}: {v}s" for k, v in rep.timings.items()]
    return ("\n".join(head + body) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("command", type=click.Choice(COMMANDS))
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False), help="job file (JSON)")
@click.option("--t-max", type=int, default=None)
@click.option("--s-max", type=int, default=None)
@click.option("--seed", type=int, multiple=True, help="repeatable; replaces params.seeds")
@click.option("--q", "q_spec", default=None, help="'m' or comma-separated generators")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default=None)
@click.option("--golden", type=click.Path(dir_okay=False), default=None, help="compare output bytes with this file")
@click.option("--update-golden", is_flag=True, help="write the output to --golden instead of comparing")
@click.option("--timings", is_flag=True, help="include wall-clock timings (output no longer byte-stable)")
def main(command, input_path, t_max, s_max, seed, q_spec, fmt, golden, update_golden, timings):
    """Run COMMAND on the job described in --input."""
    try:
        with open(input_path, encoding="utf-8") as fh:
            spec = parse_input(fh.read())
        ring = spec.ring
        over = {}
        if t_max is not None:
            over["t_max"] = _int(t_max, "--t-max")
        if s_max is not None:
            over["s_max"] = _int(s_max, "--s-max")
        if seed:
            over["seeds"] = tuple(_int(s, "--seed") for s in seed)
        if q_spec is not None:
            over["q"] = None if q_spec.strip() == "m" else tuple(
                str(parse_polynomial(g.strip(), ring)) for g in q_spec.split(","))
        if fmt is not None:
            over["format"] = fmt
        spec = replace(spec, command=command, **over)
        rep = run_command(spec)
        out = emit_report(rep, spec.format, timings=timings)
    except (InputError, OSError, AlgebraError) as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except (BudgetExceeded, gh.UnstableData, gh.NonGenericSeed, SaturationError, InfiniteLength) as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        click.echo("try a larger --t-max/--s-max, another --seed, or raise GHILB_BUDGET", err=True)
        sys.exit(EXIT_BUDGET)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    if golden:
        if update_golden:
            with open(golden, "wb") as fh:
                fh.write(out)
        else:
            with open(golden, "rb") as fh:
                expected = fh.read()
            if expected != out:
                click.echo(f"output differs from golden file {golden}", err=True)
                sys.exit(EXIT_CHECK)
    sys.exit(EXIT_OK if rep.passed else EXIT_CHECK)


if __name__ == "__main__":  # pragma: no cover
    main()
