"""Generalized Hilbert-Samuel data of a homogeneous ideal I on M = R/A.

Two routes to the same numbers:

* ``gamma_length`` works one degree at a time.  With J = I^{t+1}+A and
  P = I^t+A, the m-torsion of P/J is (J^sat cap P)/J, and its length is
  HS(R/J) - HS(R/J^sat) - HS(R/P) + HS(R/(J^sat+P)) at z = 1.
* ``generalized_series`` (default route) presents the associated graded
  module as S/K with S = k[T_1..T_g, x_1..x_n], saturates K by a generic
  linear form in the x's, and reads the whole torsion series off the
  bigraded Hilbert numerators of K and its saturation.  The numerator
  difference must be divisible by (1-u)^n, where u tracks x-degree; that
  divisibility says every T-slice of the difference has finite length, which
  is exactly what makes the generic saturation the true one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    AlgebraError,
    GeneralElements,
    MonomialOrder,
    Polynomial,
    Ring,
    elim_order,
    random_linear_combination,
)
from .groebner import groebner_basis, hilbert_numerator_multigraded
from .ideals import (
    Ideal,
    InfiniteLength,
    colength,
    generic_last_variable,
    length_between,
    series_length,
)
from .series import (
    RationalSeries,
    agreement_start,
    fit_cumulative,
    j_vector,
)


class NonGenericSeed(RuntimeError):
    """A random choice behaved non-generically (dimension or finiteness check failed)."""


class UnstableData(ValueError):
    """Series data did not stabilize within the computed range."""


def default_t_max(nvars: int) -> int:
    return 8 if nvars <= 4 else 6


# ---------------------------------------------------------------------------
# the module M = R/A together with I
# ---------------------------------------------------------------------------

@dataclass
class ModuleSpec:
    """M = R/A with the ideal I.

    ``d`` is the dimension used to index j-coefficients.  It is dim R/A for
    an unsectioned module and drops by one per general section; the Krull
    dimension of R/A can stay larger once more sections are taken than I
    has height, because components inside V(I) survive.
    """

    I: Ideal
    A: Ideal
    d: int
    sections: tuple = ()  # GeneralElements records of hyperplane sections taken
    krull_dim: int | None = None

    @classmethod
    def make(cls, I: Ideal, A: Ideal | None = None) -> "ModuleSpec":
        ring = I.ring
        if A is None:
            A = Ideal.zero(ring)
        if A.ring != ring:
            raise AlgebraError("I and A live in different rings")
        if not (I.homogeneous and A.homogeneous):
            raise AlgebraError("I and A must be homogeneous")
        if I.is_zero:
            raise AlgebraError("I must be nonzero")
        d = A.dimension()
        return cls(I.minimalized(), A, d, (), d)

    @property
    def ring(self) -> Ring:
        return self.I.ring

    def __post_init__(self):
        self._filtration: dict[int, Ideal] = {}

    def filtration(self, t: int) -> Ideal:
        """I^t + A."""
        P = self._filtration.get(t)
        if P is None:
            P = self.I.power(t) + self.A if t > 0 else Ideal.unit(self.ring)
            self._filtration[t] = P
        return P

    @property
    def equigenerated(self) -> bool:
        return len({g.degree() for g in self.I.gens}) == 1


# ---------------------------------------------------------------------------
# per-degree lengths
# ---------------------------------------------------------------------------

def gamma_length(spec: ModuleSpec, t: int, seed: int = 0) -> int:
    """lambda of the m-torsion of (I^t+A)/(I^{t+1}+A)."""
    if t < 0:
        raise AlgebraError("t must be non-negative")
    P = spec.filtration(t)
    J = spec.filtration(t + 1)
    Jsat = J.saturate(Ideal.maximal(spec.ring), seed=seed)
    diff = J.hilbert_series() - Jsat.hilbert_series() - P.hilbert_series() + (Jsat + P).hilbert_series()
    return series_length(diff)


def graded_piece_length(spec: ModuleSpec, t: int) -> int:
    """lambda((I^t+A)/(I^{t+1}+A)), finite only when I+A is m-primary."""
    return length_between(spec.filtration(t + 1), spec.filtration(t))


# ---------------------------------------------------------------------------
# the associated graded module as a quotient of k[T, x]
# ---------------------------------------------------------------------------

@dataclass
class ReesPresentation:
    ring: Ring          # k[T_1..T_g, x_1..x_n]
    g: int
    tdeg: tuple          # deg f_i, the x-degree carried by T_i
    rees: list           # generators of the Rees ideal of I on R/A
    steps: int


def rees_presentation(spec: ModuleSpec) -> ReesPresentation:
    cached = getattr(spec, "_rees", None)
    if cached is not None:
        return cached
    ring = spec.ring
    f = list(spec.I.gens)
    g, n = len(f), ring.nvars
    tnames = [f"_T{i}" for i in range(g)]
    S1 = Ring(["_u"] + tnames + list(ring.names), ring.p)
    pos = [1 + g + i for i in range(n)]
    u = S1.var(0)
    degs = tuple(fi.degree() for fi in f)
    gens = [S1.var(1 + i) - u * fi.embed(S1, pos) for i, fi in enumerate(f)]
    gens += [a.embed(S1, pos) for a in spec.A.gens]
    weights = (1,) + tuple(e + 1 for e in degs) + (1,) * n
    G = groebner_basis(gens, elim_order(1, weights))
    S = Ring(tnames + list(ring.names), ring.p)
    rees = [Polynomial(S, {m[1:]: c for m, c in h.coeffs.items()}) for h in G.elements if all(m[0] == 0 for m in h.coeffs)]
    pres = ReesPresentation(S, g, degs, rees, G.steps)
    spec._rees = pres
    return pres


def _divide_one_minus_u(poly: dict, n: int) -> dict | None:
    """Divide {(a, b): c} (u^a z^b) by (1-u)^n; None when not exact."""
    by_z: dict[int, dict[int, int]] = {}
    for (a, b), c in poly.items():
        by_z.setdefault(b, {})[a] = c
    out = {}
    for b, coeffs in by_z.items():
        top = max(coeffs)
        vec = [coeffs.get(a, 0) for a in range(top + 1)]
        for _ in range(n):
            if sum(vec) != 0:
                return None
            run, q = 0, []
            for x in vec[:-1]:
                run += x
                q.append(run)
            vec = q
        for a, c in enumerate(vec):
            if c:
                out[(a, b)] = c
    return out


@dataclass
class TorsionSeries:
    epsilon: RationalSeries  # sum_t lambda(Gamma_m(I^tM/I^{t+1}M)) z^t
    seed: int
    steps: int


def torsion_series(spec: ModuleSpec, seed: int = 0, attempts: int = 3) -> TorsionSeries:
    """Exact series of epsilon(t) for all t at once."""
    pres = rees_presentation(spec)
    S, g = pres.ring, pres.g
    n = spec.ring.nvars
    xpos = list(range(g, g + n))
    K = list(pres.rees) + [fi.embed(S, xpos) for fi in spec.I.gens] + [a.embed(S, xpos) for a in spec.A.gens]
    K = [k for k in K if not k.is_zero()]
    degs = [(e, 1) for e in pres.tdeg] + [(1, 0)] * n
    weights = tuple(pres.tdeg) + (1,) * n
    order = MonomialOrder("grevlex", 0, weights)
    for attempt in range(attempts):
        s = seed + attempt
        fwd_x, _, _ = generic_last_variable(spec.ring, s)
        # lift the x-substitution to S, leaving the T's alone
        images = S.gens()[:g] + [h.embed(S, xpos) for h in fwd_x]
        Kphi = [k.substitute(images) for k in K]
        G = groebner_basis(Kphi, order)
        leads = G.lead_monomials
        NK = hilbert_numerator_multigraded(leads, degs)
        sat_leads = [m[:-1] + (0,) for m in leads]
        NS = hilbert_numerator_multigraded(sat_leads, degs)
        diff = {k: NK.get(k, 0) - NS.get(k, 0) for k in set(NK) | set(NS)}
        diff = {k: v for k, v in diff.items() if v}
        Q = _divide_one_minus_u(diff, n)
        if Q is None:
            continue
        at_one: dict[int, int] = {}
        for (a, b), c in Q.items():
            at_one[b] = at_one.get(b, 0) + c
        top = max(at_one) if at_one else -1
        num = tuple(at_one.get(b, 0) for b in range(top + 1))
        # denominator: prod over T_i of (1 - z) once u = 1
        return TorsionSeries(RationalSeries(num, g).normalized(), s, G.steps + pres.steps)
    raise NonGenericSeed(
        f"generic saturation certificate failed for seeds {seed}..{seed + attempts - 1}"
    )


# ---------------------------------------------------------------------------
# the generalized Hilbert-Samuel series
# ---------------------------------------------------------------------------

@dataclass
class GeneralizedHilbertData:
    epsilon: list
    cumulative: list
    series: RationalSeries | None
    r: int | None
    j: tuple | None
    d: int
    stable: bool
    stabilization: int | None
    window: tuple | None
    method: str
    seed: int
    notes: list = field(default_factory=list)

    @property
    def j0(self) -> int | None:
        return None if self.j is None else self.j[0]

    def to_json(self) -> dict:
        return {
            "epsilon": list(self.epsilon),
            "cumulative": list(self.cumulative),
            "series": None if self.series is None else self.series.to_json(),
            "r": self.r,
            "d": self.d,
            "jCoeffs": None if self.j is None else list(self.j),
            "stable": self.stable,
            "stabilizationDegree": self.stabilization,
            "fitWindow": None if self.window is None else list(self.window),
            "method": self.method,
        }


def generalized_series(
    spec: ModuleSpec,
    t_max: int | None = None,
    *,
    method: str = "rees",
    seed: int = 0,
) -> GeneralizedHilbertData:
    """H(t) = sum_{nu <= t} epsilon(nu) and its series h(z)/(1-z)^{r+1}.

    ``rees`` gets the series exactly and lists epsilon up to t_max from it.
    ``direct`` computes epsilon(0..t_max) with :func:`gamma_length` and fits,
    flagging the result unstable when the d-th differences of H are not
    constant on the last three values.
    """
    d = spec.d
    if t_max is None:
        t_max = default_t_max(spec.ring.nvars)
    if t_max < 0:
        raise AlgebraError("t_max must be non-negative")
    notes = []
    if method == "rees":
        ts = torsion_series(spec, seed)
        H = ts.epsilon.cumulative()
        cumulative = H.expand(t_max + 1)
        eps = ts.epsilon.expand(t_max + 1)
        if H.is_zero:
            return GeneralizedHilbertData(eps, cumulative, RationalSeries.zero(), -1, (0,) * (d + 1), d,
                                          True, 0, None, method, ts.seed, ["W = 0"])
        r = H.dimension - 1
        if r > d:
            raise AlgebraError(f"torsion dimension {r} exceeds dim M = {d}")
        j = j_vector(H, d)
        horizon = max(t_max, len(H.numerator) + 1)
        start = agreement_start(H, j, horizon)
        return GeneralizedHilbertData(eps, cumulative, H, r, j, d, True, start, None, method, ts.seed, notes)
    if method == "direct":
        if t_max < d + 3:
            notes.append(f"t_max = {t_max} is below d+3 = {d + 3}; stabilization evidence is thin")
        eps = [gamma_length(spec, t, seed) for t in range(t_max + 1)]
        cumulative = []
        run = 0
        for e in eps:
            run += e
            cumulative.append(run)
        if not any(cumulative):
            return GeneralizedHilbertData(eps, cumulative, RationalSeries.zero(), -1, (0,) * (d + 1), d,
                                          True, 0, None, method, seed, ["W = 0 on the computed range"])
        fit = fit_cumulative(cumulative, d)
        if not fit.stable:
            notes.append("unstable: increase t_max")
            return GeneralizedHilbertData(eps, cumulative, None, None, None, d, False, None, None, method, seed, notes)
        H = fit.series
        return GeneralizedHilbertData(eps, cumulative, H, H.dimension - 1, j_vector(H, d), d, True,
                                      fit.start, fit.window, method, seed, notes)
    raise AlgebraError(f"unknown method {method!r}")


def j_coefficients(data: GeneralizedHilbertData) -> tuple:
    if not data.stable or data.j is None:
        raise UnstableData("generalized Hilbert data did not stabilize; increase t_max")
    return data.j


# ---------------------------------------------------------------------------
# analytic spread and reductions
# ---------------------------------------------------------------------------

def analytic_spread(I: Ideal, A: Ideal | None = None, method: str = "auto") -> int:
    """Krull dimension of the fiber cone of I on R/A.

    ``elimination``: the kernel of k[y] -> R, y_i -> f_i, found by
    eliminating the x's; needs A = 0 and I generated in one degree.
    ``rees``: the Rees ideal reduced modulo the x's.
    """
    ring = I.ring
    I = I.minimalized()
    if len({f.degree() for f in I.gens}) != 1:
        raise AlgebraError("analytic spread is implemented for equigenerated ideals only")
    if method == "auto":
        method = "elimination" if A is None or A.is_zero else "rees"
    if method == "elimination":
        if A is not None and not A.is_zero:
            raise AlgebraError("elimination route needs A = 0")
        g, n = len(I.gens), ring.nvars
        ynames = [f"_y{i}" for i in range(g)]
        S = Ring(list(ring.names) + ynames, ring.p)
        pos = list(range(n))
        gens = [S.var(n + i) - f.embed(S, pos) for i, f in enumerate(I.gens)]
        e = I.gens[0].degree()
        Q = Ideal(S, gens).eliminate(list(range(n)), weights=(1,) * n + (e,) * g)
        _, Qy = Q.restrict(ynames)
        return Qy.dimension()
    if method == "rees":
        spec = ModuleSpec.make(I, A)
        pres = rees_presentation(spec)
        g = pres.g
        T = Ring([f"_T{i}" for i in range(g)], ring.p)
        fiber = []
        for h in pres.rees:
            d = {}
            for m, c in h.coeffs.items():
                if not any(m[g:]):
                    d[m[:g]] = c
            if d:
                fiber.append(Polynomial(T, d))
        return Ideal(T, fiber).dimension()
    raise AlgebraError(f"unknown method {method!r}")


@dataclass
class Reduction:
    J: Ideal
    elements: GeneralElements
    reduction_number: int | None
    lengths: list  # lambda((I^{t+1}+A)/(J I^t+A)), None where infinite
    spread: int


def minimal_reduction(I: Ideal, seed: int, r_max: int = 5, A: Ideal | None = None) -> Reduction:
    """J generated by ell(I) general elements; least r with J I^r = I^{r+1} (mod A)."""
    ring = I.ring
    A = A if A is not None else Ideal.zero(ring)
    I = I.minimalized()
    ell = analytic_spread(I, A)
    els = random_linear_combination(I.gens, ell, seed)
    J = Ideal(ring, els.elements)
    red_number = None
    lengths = []
    for r in range(r_max + 1):
        JIr = (J * I.power(r) if r else J) + A
        top = I.power(r + 1) + A
        try:
            lengths.append(length_between(JIr, top))
        except InfiniteLength:
            lengths.append(None)
        if top.contains_ideal(JIr) and JIr.contains_ideal(top):
            red_number = r
            break
    return Reduction(J, els, red_number, lengths, ell)


# ---------------------------------------------------------------------------
# sections and the residual module
# ---------------------------------------------------------------------------

def section(spec: ModuleSpec, k: int, seed: int) -> ModuleSpec:
    """Add k general elements of I to A; the dimension must drop by k."""
    if k < 0 or k > spec.d:
        raise AlgebraError(f"section count {k} outside 0..{spec.d}")
    if k == 0:
        return spec
    if not spec.equigenerated:
        raise AlgebraError("sections need an equigenerated I")
    els = random_linear_combination(spec.I.gens, k, seed)
    A2 = spec.A.plus(els.elements)
    actual = A2.dimension()
    # away from V(I) general elements cut properly; inside it nothing is cut
    ceiling = max(spec.d - k, (spec.I + spec.A).dimension())
    if not spec.d - k <= actual <= ceiling:
        raise NonGenericSeed(
            f"dimension {actual} after {k} sections is outside [{spec.d - k}, {ceiling}] (seed {seed})"
        )
    return ModuleSpec(spec.I, A2, spec.d - k, spec.sections + (els,), actual)


def residual_ideal(spec: ModuleSpec, seed: int, method: str = "colon") -> tuple[Ideal, GeneralElements]:
    """A-bar = (A + (x_1..x_{d-1})) : I^infinity for general x_i in I."""
    els = random_linear_combination(spec.I.gens, max(spec.d - 1, 0), seed)
    base = spec.A.plus(els.elements)
    return base.saturate(spec.I, method=method, seed=seed), els


def residual_series(spec: ModuleSpec, seed: int, t_max: int | None = None, *, method: str = "colon") -> RationalSeries:
    """Hilbert-Samuel series of I on the one-dimensional residual module."""
    if analytic_spread(spec.I, spec.A) != spec.d:
        return RationalSeries.zero()
    if t_max is None:
        t_max = default_t_max(spec.ring.nvars)
    Abar, _ = residual_ideal(spec, seed, method)
    if Abar.is_unit:
        return RationalSeries.zero()
    vals = []
    for t in range(t_max + 1):
        try:
            vals.append(colength(spec.I.power(t + 1) + Abar))
        except InfiniteLength as exc:
            raise NonGenericSeed(f"residual lengths are infinite for seed {seed}") from exc
    fit = fit_cumulative(vals, 1)
    if not fit.stable:
        raise UnstableData("residual series did not stabilize; increase t_max")
    return fit.series


# ---------------------------------------------------------------------------
# small checks
# ---------------------------------------------------------------------------

def classical_consistency(spec: ModuleSpec, t_max: int) -> dict:
    """For I+A m-primary, the torsion is everything: compare both lengths."""
    if (spec.I + spec.A).dimension() > 0:
        raise AlgebraError("I + A is not m-primary")
    gamma = [gamma_length(spec, t) for t in range(t_max + 1)]
    plain = [graded_piece_length(spec, t) for t in range(t_max + 1)]
    return {"gamma": gamma, "classical": plain, "pass": gamma == plain}


def epsilon0_epsilon1(spec: ModuleSpec, seed: int) -> dict:
    """epsilon_0 = lambda(Gamma_m(IM/I^2M)) and epsilon_1 = h_0 + h_1 - epsilon_0."""
    if analytic_spread(spec.I, spec.A) != spec.d:
        raise AlgebraError("epsilon_0/epsilon_1 need analytic spread equal to dim M")
    eps0 = gamma_length(spec, 1, seed)
    els = random_linear_combination(spec.I.gens, max(spec.d - 1, 0), seed)
    low = spec.filtration(2).plus(els.elements)
    h01 = length_between(low, spec.filtration(1))
    Abar, _ = residual_ideal(spec, seed)
    h0 = colength(spec.I + Abar)
    return {"epsilon0": eps0, "epsilon1": h01 - eps0, "h0": h0, "h0_plus_h1": h01, "h1": h01 - h0, "seed": seed}
