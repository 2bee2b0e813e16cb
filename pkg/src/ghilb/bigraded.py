"""Bigraded lengths of I-adic layers cut by powers of a second ideal q.

For M = R/A write P_t = I^t + A and Q(s,t) = q^{s+1} I^t + I^{t+1} + A.
The three layers are

    h10(s,t) = lambda(P_t / Q(s,t))
    h00(s,t) = lambda((q^s I^t + P_{t+1}) / Q(s,t))
    h11(s,t) = h10(s,0) + ... + h10(s,t)

When q is the irrelevant ideal and I is generated in a single degree e,
nothing has to be multiplied out: q^{s+1} I^t is I^t cut down to degrees
>= et+s+1, so R/Q(s,t) agrees with R/P_{t+1} below that degree and with
R/P_t from it on.  For x in I of degree e the colon Q(s,t) : x splices the
same way, (P_{t+1} : x) below degree e(t-1)+s+1 and (P_t : x) from there.
Any other q goes through explicit products and colons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .algebra import AlgebraError, Polynomial, random_linear_combination
from .genhilbert import ModuleSpec, NonGenericSeed, UnstableData, analytic_spread, generalized_series, section
from .ideals import Ideal, InfiniteLength, intersection_series, length_between, series_length
from .series import RationalSeries, splice


# ---------------------------------------------------------------------------
# the lengths themselves
# ---------------------------------------------------------------------------

def _head_length(diff: RationalSeries, bound: int) -> int:
    """Sum of the coefficients of z^0 .. z^{bound-1}."""
    return sum(diff.expand(max(bound, 0)))


class BigradedModel:
    """Lengths attached to (q, I, M = R/A), with per-t ideals cached."""

    def __init__(self, q: Ideal, I: Ideal, A: Ideal | None = None, *, mode: str = "auto"):
        ring = I.ring
        A = A if A is not None else Ideal.zero(ring)
        if q.ring != ring or A.ring != ring:
            raise AlgebraError("q, I and A must live in one ring")
        if not (q.homogeneous and I.homogeneous and A.homogeneous):
            raise AlgebraError("q, I and A must be homogeneous")
        if q.is_zero or I.is_zero:
            raise AlgebraError("q and I must be nonzero")
        if (q + I + A).dimension() > 0:
            raise InfiniteLength("q + I + A is not m-primary; the bigraded lengths are infinite")
        self.q, self.I, self.A = q, I.minimalized(), A
        degs = {g.degree() for g in self.I.gens}
        self.e = degs.pop() if len(degs) == 1 else None
        fast = self.e is not None and q.is_irrelevant()
        if mode == "auto":
            mode = "truncate" if fast else "explicit"
        if mode == "truncate" and not fast:
            raise AlgebraError("truncation needs q = m and I generated in one degree")
        if mode not in ("truncate", "explicit"):
            raise AlgebraError(f"unknown mode {mode!r}")
        self.mode = mode
        self._P: dict = {}
        self._Q: dict = {}
        self._qpow: dict = {}
        self._colon: dict = {}
        self._checked: set = set()

    @property
    def ring(self):
        return self.I.ring

    def P(self, t: int) -> Ideal:
        if t not in self._P:
            self._P[t] = self.I.power(t) + self.A if t > 0 else Ideal.unit(self.ring)
        return self._P[t]

    def threshold(self, s: int, t: int) -> int:
        return self.e * t + s + 1

    def Q(self, s: int, t: int) -> Ideal:
        """q^{s+1} I^t + I^{t+1} + A as an ideal (explicit products)."""
        key = (s, t)
        if key not in self._Q:
            if s + 1 not in self._qpow:
                self._qpow[s + 1] = self.q.power(s + 1)
            qs = self._qpow[s + 1]
            prod = qs * self.I.power(t) if t > 0 else qs
            self._Q[key] = prod + self.P(t + 1)
        return self._Q[key]

    def Q_series(self, s: int, t: int) -> RationalSeries:
        if self.mode == "truncate":
            return splice(self.P(t + 1).hilbert_series(), self.P(t).hilbert_series(), self.threshold(s, t))
        return self.Q(s, t).hilbert_series()

    @staticmethod
    def _check_index(s: int, t: int):
        if s < 0 or t < 0:
            raise AlgebraError(f"indices must be non-negative, got s={s}, t={t}")

    def h10(self, s: int, t: int) -> int:
        self._check_index(s, t)
        return series_length(self.Q_series(s, t) - self.P(t).hilbert_series())

    def h00(self, s: int, t: int) -> int:
        self._check_index(s, t)
        if s == 0:
            # q^0 I^t + P_{t+1} is P_t
            return self.h10(0, t)
        return series_length(self.Q_series(s, t) - self.Q_series(s - 1, t))

    def h11(self, s: int, t: int) -> int:
        self._check_index(s, t)
        return sum(self.h10(s, nu) for nu in range(t + 1))

    # --- colon pieces for the Singh formula -------------------------------
    def C(self, x: Polynomial, t: int) -> Ideal:
        """P_t : x."""
        key = (x, t)
        if key not in self._colon:
            self._colon[key] = self.P(t).colon(x) if t > 0 else Ideal.unit(self.ring)
        return self._colon[key]

    def _require(self, big: Ideal, small: Ideal, what: str):
        key = (id(big), id(small))
        if key in self._checked:
            return
        if not big.contains_ideal(small):
            raise NonGenericSeed(f"containment failed: {what}")
        self._checked.add(key)

    def singh_term1(self, x: Polynomial, s: int, nu: int) -> int:
        """lambda((P_nu : x) / ((Q(s,nu) : x) + P_{nu-1}))."""
        num = self.C(x, nu)
        if self.mode == "truncate":
            low = self.C(x, nu + 1) + self.P(nu - 1)
            self._require(num, low, f"(P_{nu+1}:x)+P_{nu-1} inside P_{nu}:x")
            bound = self.threshold(s, nu) - self.e
            return _head_length(low.hilbert_series() - num.hilbert_series(), bound)
        den = self.Q(s, nu).colon(x) + self.P(nu - 1)
        self._require(num, den, f"(Q({s},{nu}):x)+P_{nu-1} inside P_{nu}:x")
        return length_between(den, num)

    def singh_term2(self, x: Polynomial, s: int, nu: int) -> int:
        """lambda(((Q(s,nu) : x) cap P_{nu-1}) / Q(s,nu-1))."""
        prev = self.P(nu - 1)
        if self.mode == "truncate":
            C1 = self.C(x, nu + 1)
            self._require(C1, self.P(nu), f"P_{nu} inside P_{nu+1}:x")
            bound = self.threshold(s, nu) - self.e
            diff = self.P(nu).hilbert_series() - intersection_series(C1, prev)
            return _head_length(diff, bound)
        K = self.Q(s, nu).colon(x)
        base = self.Q(s, nu - 1)
        self._require(K, base, f"Q({s},{nu - 1}) inside Q({s},{nu}):x")
        self._require(prev, base, f"Q({s},{nu - 1}) inside P_{nu - 1}")
        return series_length(base.hilbert_series() - intersection_series(K, prev))


def bigraded_h(q: Ideal, I: Ideal, A: Ideal | None, s: int, t: int) -> tuple:
    """(h00, h10, h11) at (s, t); h00 is checked against the h10 difference."""
    model = BigradedModel(q, I, A)
    h10 = model.h10(s, t)
    h00 = model.h00(s, t)
    expected = h10 - (model.h10(s - 1, t) if s > 0 else 0)
    if h00 != expected:
        raise AssertionError(f"h00({s},{t}) = {h00} but h10 difference is {expected}")
    return h00, h10, model.h11(s, t)


# ---------------------------------------------------------------------------
# grids and fitting
# ---------------------------------------------------------------------------

def _basis(s: int, t: int, i: int, j: int) -> int:
    return comb(s + i, i) * comb(t + j, j)


def _solve(points, values, monos) -> dict:
    from sympy import Matrix

    M = Matrix([[_basis(s, t, i, j) for (i, j) in monos] for (s, t) in points])
    sol = M.LUsolve(Matrix(list(values)))
    return {m: Fraction(int(v.p), int(v.q)) for m, v in zip(monos, sol)}


@dataclass(frozen=True)
class BivariateFit:
    coeffs: dict            # (i, j) -> a(i, j)
    degree: int
    anchor: tuple           # lower-left corner of the interpolation triangle
    held_out: int           # grid points checked beyond the triangle
    corners: tuple          # minimal (s, t) from which the grid agrees everywhere above-right

    def value(self, s: int, t: int) -> int:
        return int(sum(c * _basis(s, t, i, j) for (i, j), c in self.coeffs.items()))

    def a(self, i: int, j: int) -> int:
        return int(self.coeffs.get((i, j), 0))


def _corners(grid, agree) -> tuple:
    S, T = len(grid) - 1, len(grid[0]) - 1
    out, best_t = [], T + 1
    for s0 in range(S, -1, -1):
        t0 = T + 1
        for t in range(T, -1, -1):
            if all(agree(s, tt) for s in range(s0, S + 1) for tt in range(t, T + 1)):
                t0 = t
            else:
                break
        if t0 > T:
            break
        if t0 == best_t:
            out[-1] = (s0, t0)
        elif t0 < best_t:
            out.append((s0, t0))
            best_t = t0
    return tuple(sorted(out))


def fit_grid(grid: Sequence[Sequence[int]], degree: int, margin: int = 1) -> BivariateFit:
    """Polynomial of total degree <= ``degree`` in the basis C(s+i,i)C(t+j,j).

    It interpolates the triangle at the top-right of the grid and must match
    every other point of the square of side degree+1+margin it sits in.
    """
    S, T = len(grid) - 1, len(grid[0]) - 1
    if degree < 0:
        s0, t0 = S - margin, T - margin
        if s0 < 0 or t0 < 0:
            raise UnstableData("grid too small for a held-out margin")
        if any(grid[s][t] for s in range(s0, S + 1) for t in range(t0, T + 1)):
            raise UnstableData("expected an eventually zero grid")
        return BivariateFit({}, degree, (s0, t0), (margin + 1) ** 2, _corners(grid, lambda s, t: grid[s][t] == 0))
    s0, t0 = S - degree - margin, T - degree - margin
    if s0 < 0 or t0 < 0:
        raise UnstableData(f"grid {S + 1}x{T + 1} too small to fit degree {degree} with margin {margin}")
    monos = [(i, j) for i in range(degree + 1) for j in range(degree + 1 - i)]
    tri = [(s0 + a, t0 + b) for a in range(degree + 1) for b in range(degree + 1 - a)]
    coeffs = _solve(tri, [grid[s][t] for s, t in tri], monos)
    if any(c.denominator != 1 for c in coeffs.values()):
        raise UnstableData("interpolated coefficients are not integers; no stable region at this grid size")
    coeffs = {m: int(c) for m, c in coeffs.items() if c}
    fit = BivariateFit(coeffs, degree, (s0, t0), 0, ())
    tri_set = set(tri)
    held = [(s, t) for s in range(s0, S + 1) for t in range(t0, T + 1) if (s, t) not in tri_set]
    bad = [(s, t, grid[s][t], fit.value(s, t)) for s, t in held if grid[s][t] != fit.value(s, t)]
    if bad:
        raise UnstableData(f"no stable polynomial region at this grid size; held-out mismatches {bad[:4]}")
    return BivariateFit(coeffs, degree, (s0, t0), len(held), _corners(grid, lambda s, t: grid[s][t] == fit.value(s, t)))


def fit_univariate(values: Sequence[int], degree: int, margin: int = 1) -> tuple:
    """(beta_0..beta_degree, first s of agreement) for values(s) = sum beta_i C(s+i, i)."""
    S = len(values) - 1
    s0 = S - max(degree, 0) - margin
    if s0 < 0:
        raise UnstableData(f"{len(values)} values are too few to fit degree {degree} with margin {margin}")
    if degree < 0:
        beta = ()
    else:
        monos = [(i, 0) for i in range(degree + 1)]
        pts = [(s0 + a, 0) for a in range(degree + 1)]
        coeffs = _solve(pts, [values[s] for s, _ in pts], monos)
        if any(c.denominator != 1 for c in coeffs.values()):
            raise UnstableData("non-integral coefficients; values have not stabilized")
        beta = tuple(int(coeffs[(i, 0)]) for i in range(degree + 1))

    def val(s):
        return sum(b * comb(s + i, i) for i, b in enumerate(beta))

    if any(values[s] != val(s) for s in range(s0, S + 1)):
        raise UnstableData("held-out value disagrees with the fitted polynomial")
    start = S + 1
    for s in range(S, -1, -1):
        if values[s] != val(s):
            break
        start = s
    return beta, start


@dataclass
class BigradedTable:
    q: Ideal | None
    I: Ideal | None
    A: Ideal | None
    d: int
    h11: list               # h11[s][t]
    h10: list
    h00: list
    mode: str = "synthetic"
    coeffs: dict | None = None      # a^{(1,1)}(i, j)
    fit_meta: dict = field(default_factory=dict)

    @property
    def s_max(self) -> int:
        return len(self.h11) - 1

    @property
    def t_max(self) -> int:
        return len(self.h11[0]) - 1

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence[int]], d: int) -> "BigradedTable":
        """A table from given h11 values; the other layers are differences."""
        h11 = [list(row) for row in grid]
        h10 = [[row[t] - (row[t - 1] if t else 0) for t in range(len(row))] for row in h11]
        h00 = [[h10[s][t] - (h10[s - 1][t] if s else 0) for t in range(len(h10[0]))] for s in range(len(h10))]
        return cls(None, None, None, d, h11, h10, h00)

    def invariant_violations(self) -> list:
        out = []
        for s in range(self.s_max + 1):
            for t in range(self.t_max + 1):
                if self.h10[s][t] != self.h11[s][t] - (self.h11[s][t - 1] if t else 0):
                    out.append(("h10", s, t))
                if self.h00[s][t] != self.h10[s][t] - (self.h10[s - 1][t] if s else 0):
                    out.append(("h00", s, t))
                if min(self.h11[s][t], self.h10[s][t], self.h00[s][t]) < 0:
                    out.append(("negative", s, t))
        return out

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "mode": self.mode,
            "h11": self.h11,
            "h10": self.h10,
            "h00": self.h00,
            "coeffs": None if self.coeffs is None else [[i, j, c] for (i, j), c in sorted(self.coeffs.items())],
            "fit": self.fit_meta,
        }


def bigraded_table(
    q: Ideal | None,
    I: Ideal,
    A: Ideal | None = None,
    *,
    s_max: int | None = None,
    t_max: int | None = None,
    d: int | None = None,
    mode: str = "auto",
) -> BigradedTable:
    """Grid of h11, h10 and h00 over 0 <= s <= s_max, 0 <= t <= t_max.

    h10 and h00 are computed directly; h11 is the running sum of h10.
    """
    ring = I.ring
    q = q if q is not None else Ideal.maximal(ring)
    A = A if A is not None else Ideal.zero(ring)
    if d is None:
        d = A.dimension()
    s_max = d + 3 if s_max is None else s_max
    t_max = d + 3 if t_max is None else t_max
    if s_max < 0 or t_max < 0:
        raise AlgebraError("grid bounds must be non-negative")
    model = BigradedModel(q, I, A, mode=mode)
    h10 = [[model.h10(s, t) for t in range(t_max + 1)] for s in range(s_max + 1)]
    h00 = [[model.h00(s, t) for t in range(t_max + 1)] for s in range(s_max + 1)]
    h11 = []
    for row in h10:
        run, acc = 0, []
        for v in row:
            run += v
            acc.append(run)
        h11.append(acc)
    table = BigradedTable(q, model.I, A, d, h11, h10, h00, model.mode)
    bad = table.invariant_violations()
    if bad:
        raise AssertionError(f"bigraded grid identities fail at {bad[:4]}")
    return table


def fit_bivariate(table: BigradedTable, margin: int = 1) -> dict:
    """a^{(1,1)}(i,j) for i+j <= d; also fits the other layers and checks the shifts."""
    d = table.d
    f11 = fit_grid(table.h11, d, margin)
    meta = {"anchor": list(f11.anchor), "heldOut": f11.held_out, "agreementCorners": [list(c) for c in f11.corners]}
    relations = []
    try:
        f10 = fit_grid(table.h10, d - 1, margin)
        f00 = fit_grid(table.h00, d - 2, margin)
    except UnstableData as exc:
        meta["layerFit"] = str(exc)
    else:
        for i in range(d):
            for j in range(d - i):
                relations.append(f10.a(i, j) == f11.a(i, j + 1))
        for i in range(d - 1):
            for j in range(d - 1 - i):
                relations.append(f00.a(i, j) == f10.a(i + 1, j))
        meta["shiftRelations"] = all(relations)
    table.coeffs = dict(f11.coeffs)
    table.fit_meta = meta
    return dict(f11.coeffs)


@dataclass(frozen=True)
class CiupercaTuple:
    i: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.i + 1:
            raise ValueError("tuple j_i must have i+1 entries")


@dataclass(frozen=True)
class CiupercaCoefficients:
    tuples: tuple
    a0d: int  # a^{(1,1)}(0, d)


def ciuperca_coefficients(table: BigradedTable) -> CiupercaCoefficients:
    if table.coeffs is None:
        fit_bivariate(table)
    a = table.coeffs
    d = table.d
    tuples = tuple(
        CiupercaTuple(i, tuple(a.get((l, d - i), 0) for l in range(i, -1, -1))) for i in range(d + 1)
    )
    return CiupercaCoefficients(tuples, a.get((0, d), 0))


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def general_linear_forms_power(ring, count: int, power: int, seed: int) -> Ideal:
    ys = random_linear_combination(ring.gens(), count, seed).elements
    gens = []
    for y in ys:
        f = ring.one()
        for _ in range(power):
            f = f * y
        gens.append(f)
    return Ideal(ring, gens)


@dataclass
class Prop24Report:
    passed: bool
    inconclusive: bool
    q_label: str | None
    q: Ideal | None
    j: tuple
    attempts: list

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "inconclusive": self.inconclusive,
            "q": self.q_label,
            "qGens": None if self.q is None else [str(g) for g in self.q.gens],
            "jCoeffs": list(self.j),
            "attempts": self.attempts,
        }


def verify_prop24(
    q: Ideal | None,
    I: Ideal,
    A: Ideal | None = None,
    *,
    s_max: int | None = None,
    t_max: int | None = None,
    seed: int = 0,
    powers: Sequence[int] = (1, 2, 3),
) -> Prop24Report:
    """Compare a^{(1,1)}(0, d-i) with (-1)^i j_i for every i.

    Without a q, or with q = m, a failure moves on to q generated by powers of
    d general linear forms.  Nothing passing means inconclusive.
    """
    ring = I.ring
    spec = ModuleSpec.make(I, A)
    d = spec.d
    j = generalized_series(spec).j
    expected = [(-1) ** i * j[i] for i in range(d + 1)]
    ladder = []
    if q is None or q.is_irrelevant():
        ladder.append(("m", Ideal.maximal(ring)))
        for n in powers:
            cand = general_linear_forms_power(ring, d, n, seed)
            if n == 1 and cand.is_irrelevant():
                continue
            ladder.append((f"general linear forms^{n} (seed {seed})", cand))
    else:
        ladder.append(("given", q))
    attempts = []
    for label, cand in ladder:
        entry = {"q": label, "qGens": [str(g) for g in cand.gens]}
        try:
            table = bigraded_table(cand, spec.I, spec.A, s_max=s_max, t_max=t_max, d=d)
            fit_bivariate(table)
        except (UnstableData, InfiniteLength) as exc:
            entry.update(passed=False, error=str(exc))
            attempts.append(entry)
            continue
        got = [table.coeffs.get((0, d - i), 0) for i in range(d + 1)]
        ok = got == expected
        entry.update(passed=ok, a0=got, expected=expected, grid=[table.s_max, table.t_max])
        attempts.append(entry)
        if ok:
            return Prop24Report(True, False, label, cand, j, attempts)
    return Prop24Report(False, True, None, None, j, attempts)


@dataclass
class SinghReport:
    passed: bool
    cells: list             # dicts per (s, t)
    x: str
    t0: int | None
    beta: tuple | None
    beta_start: int | None
    notes: list

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "x": self.x,
            "cells": self.cells,
            "t0": self.t0,
            "beta": None if self.beta is None else list(self.beta),
            "betaStart": self.beta_start,
            "notes": self.notes,
        }


def singh_check(
    q: Ideal | None,
    I: Ideal,
    A: Ideal | None,
    x: Polynomial,
    s_max: int,
    t_max: int,
    *,
    mode: str = "auto",
) -> SinghReport:
    """Check the generalized Singh identity at every (s, t) of the grid.

    h10_M(s,t) = h11_{M/xM}(s,t) + sum_{nu=2}^t term1(s,nu) - sum_{nu=1}^t term2(s,nu).
    """
    ring = I.ring
    q = q if q is not None else Ideal.maximal(ring)
    A = A if A is not None else Ideal.zero(ring)
    if not I.contains(x):
        raise AlgebraError("x must lie in I")
    M = BigradedModel(q, I, A, mode=mode)
    Mbar = BigradedModel(q, I, A.plus([x]), mode=M.mode)
    if M.mode == "truncate" and (not x.homogeneous or x.degree() != M.e):
        raise AlgebraError("x must be homogeneous of the generator degree of I")
    cells, corr = [], []
    ok_all = True
    for s in range(s_max + 1):
        row = []
        t1 = t2 = 0
        bar = 0
        for t in range(t_max + 1):
            if t >= 2:
                t1 += M.singh_term1(x, s, t)
            if t >= 1:
                t2 += M.singh_term2(x, s, t)
            bar += Mbar.h10(s, t)
            lhs = M.h10(s, t)
            rhs = bar + t1 - t2
            ok = lhs == rhs
            ok_all &= ok
            cells.append({"s": s, "t": t, "lhs": lhs, "h11Bar": bar, "term1": t1, "term2": t2, "pass": ok})
            row.append(t1 - t2)
        corr.append(row)
    notes = []
    # the correction should stop depending on t from some t0 on
    t0 = None
    for t in range(t_max, 0, -1):
        if all(corr[s][t] == corr[s][t_max] for s in range(s_max + 1)):
            t0 = t
        else:
            break
    beta = beta_start = None
    d = A.dimension()
    if t0 is None or t0 == t_max:
        notes.append("correction not yet constant in t on this grid")
    else:
        try:
            beta, beta_start = fit_univariate([corr[s][t_max] for s in range(s_max + 1)], d - 1)
        except UnstableData as exc:
            notes.append(f"beta fit: {exc}")
    return SinghReport(ok_all, cells, str(x), t0, beta, beta_start, notes)


def classical_singh(I: Ideal, A: Ideal | None, x: Polynomial, t_max: int) -> dict:
    """lambda(P_t/P_{t+1}) = lambda(R/(P_{t+1}+x)) - lambda((P_{t+1}:x)/P_t), I+A m-primary."""
    ring = I.ring
    A = A if A is not None else Ideal.zero(ring)
    model = BigradedModel(Ideal.maximal(ring), I, A)
    if (I + A).dimension() > 0:
        raise AlgebraError("the classical formula needs I + A m-primary")
    rows = []
    for t in range(t_max + 1):
        Pt, Pt1 = model.P(t), model.P(t + 1)
        lhs = length_between(Pt1, Pt)
        quot = series_length(Pt1.plus([x]).hilbert_series())
        tor = length_between(Pt, model.C(x, t + 1))
        rows.append({"t": t, "lhs": lhs, "rhs": quot - tor, "pass": lhs == quot - tor})
    return {"rows": rows, "pass": all(r["pass"] for r in rows)}


@dataclass
class InvarianceStep:
    seed: int
    step: int
    d_before: int
    j_before: tuple
    j_after: tuple
    preserved: bool
    delta: int
    probe: bool
    probe_range: int
    nonneg_ok: bool | None   # None when the probe fails (nothing asserted)
    signed_ok: bool | None = None  # (-1)^(d-1) * delta >= 0, same gating


    @property
    def passed(self) -> bool:
        return self.preserved and self.nonneg_ok is not False

    def to_json(self) -> dict:
        return {
            "seed": self.seed, "step": self.step, "dBefore": self.d_before,
            "jBefore": list(self.j_before), "jAfter": list(self.j_after),
            "preserved": self.preserved, "delta": self.delta,
            "probe": self.probe, "probeRange": self.probe_range,
            "deltaNonNegative": self.nonneg_ok, "signedDeltaNonNegative": self.signed_ok,
            "pass": self.passed,
        }


def initial_form_probe(spec: ModuleSpec, xi: Polynomial, t_max: int) -> bool:
    """(I^{t+1}+A) : xi == I^t + A for t = 0..t_max."""
    for t in range(t_max + 1):
        if not spec.filtration(t + 1).colon(xi).equal(spec.filtration(t)):
            return False
    return True


def hyperplane_invariance_check(
    spec: ModuleSpec,
    seeds: Sequence[int],
    *,
    depth: int = 1,
    probe_t_max: int = 3,
) -> list:
    """j-vectors before and after each of ``depth`` successive general sections.

    Entries 0..d-2 must agree.  The change in entry d-1 must be >= 0 whenever
    the section element passes the initial-form probe.
    """
    if spec.d < 2:
        raise AlgebraError("invariance check needs d >= 2")
    if analytic_spread(spec.I, spec.A) != spec.d:
        raise AlgebraError("invariance check needs analytic spread equal to d")
    if depth < 1 or depth > spec.d - 1:
        raise AlgebraError(f"depth must lie in 1..{spec.d - 1}")
    steps = []
    for seed in seeds:
        chain = [spec] + [section(spec, k, seed) for k in range(1, depth + 1)]
        js = [generalized_series(c, seed=seed).j for c in chain]
        for k in range(1, depth + 1):
            before, after = chain[k - 1], chain[k]
            jb, ja = js[k - 1], js[k]
            db = before.d
            preserved = tuple(jb[: db - 1]) == tuple(ja[: db - 1])
            delta = ja[db - 1] - jb[db - 1]
            xi = after.sections[-1].elements[-1]
            probe = initial_form_probe(before, xi, probe_t_max)
            nonneg = (delta >= 0) if probe else None
            # a regular initial form gives (-1)^(d-1) * delta >= 0; the plain
            # inequality is that statement for odd d only
            signed = ((-1) ** (db - 1) * delta >= 0) if probe else None
            steps.append(InvarianceStep(seed, k, db, tuple(jb), tuple(ja), preserved, delta,
                                        probe, probe_t_max, nonneg, signed))
    return steps


def thm34_probe(spec: ModuleSpec, q: Ideal | None, s_probe: Sequence[int], seeds: Sequence[int]) -> list:
    """Sample J_i I M cap (q^{s+1} I^2 M + I^3 M) = J_i (q^{s+1} I M + I^2 M) at finite s.

    J_i is generated by the first i of d general elements, 1 <= i <= d-1.
    """
    ring = spec.ring
    q = q if q is not None else Ideal.maximal(ring)
    I, A = spec.I, spec.A
    model = BigradedModel(q, I, A)
    out = []
    for seed in seeds:
        els = random_linear_combination(I.gens, spec.d, seed).elements
        for i in range(1, spec.d):
            Ji = Ideal(ring, els[:i])
            U = Ji * I + A
            for s in s_probe:
                if s < 0:
                    raise AlgebraError("s must be non-negative")
                if model.mode == "truncate":
                    # above degree 2e+s+1 both sides are U; compare below it
                    bound = model.threshold(s, 2)
                    lhs = intersection_series(U, model.P(3))
                    rhs = (Ji * I.power(2) + A).hilbert_series()
                    ok = lhs.expand(bound) == rhs.expand(bound)
                else:
                    lhs = intersection_series(U, model.Q(s, 2))
                    rhs = (Ji * (model.q.power(s + 1) * I + I.power(2)) + A).hilbert_series()
                    ok = lhs == rhs
                out.append({"seed": seed, "i": i, "s": s, "pass": ok})
    return out
