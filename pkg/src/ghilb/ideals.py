"""Ideals of a polynomial ring over F_p and the verbs used on them.

Every length is read off Hilbert series: lambda(U/J) is the value at 1 of
HS(R/J) - HS(R/U), and that difference being a polynomial is the check that
the length is finite.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

from .algebra import (
    GREVLEX,
    AlgebraError,
    MonomialOrder,
    Polynomial,
    Ring,
    elim_order,
)
from .groebner import (
    GroebnerBasis,
    groebner_basis,
    hilbert_numerator_monomial,
    minimal_generators,
)
from .series import RationalSeries

SATURATION_CAP = 50


class InfiniteLength(ArithmeticError):
    """A quotient that was expected to have finite length does not."""


class SaturationError(RuntimeError):
    """Saturation did not stabilize within the iteration cap."""


class Ideal:
    """Ideal of ``ring`` given by generators, with Groebner bases cached per order."""

    def __init__(self, ring: Ring, gens: Iterable[Polynomial] = (), *, meta: dict | None = None):
        seen = set()
        kept = []
        for g in gens:
            if g.ring != ring:
                raise AlgebraError("generator lives in a different ring")
            if g.is_zero() or g in seen:
                continue
            seen.add(g)
            kept.append(g)
        self.ring = ring
        self.gens: tuple = tuple(kept)
        self.homogeneous = all(g.homogeneous for g in kept)
        self.meta = dict(meta or {})
        self._gbs: dict = {}
        self._powers: dict[int, Ideal] = {1: self}
        self._hs: RationalSeries | None = None

    # --- constructors ------------------------------------------------------
    @classmethod
    def unit(cls, ring: Ring) -> "Ideal":
        return cls(ring, [ring.one()])

    @classmethod
    def zero(cls, ring: Ring) -> "Ideal":
        return cls(ring, [])

    @classmethod
    def maximal(cls, ring: Ring) -> "Ideal":
        """The irrelevant ideal of all variables."""
        return cls(ring, ring.gens())

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens)) or '0'})"

    def __len__(self):
        return len(self.gens)

    # --- Groebner data -----------------------------------------------------
    def gb(self, order: MonomialOrder = GREVLEX, budget: int | None = None) -> GroebnerBasis:
        G = self._gbs.get(order)
        if G is None:
            if not self.gens:
                G = GroebnerBasis(self.ring, order, [], source=self)
            else:
                G = groebner_basis(self.gens, order, budget=budget, source=self)
            self._gbs[order] = G
        return G

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        if any(g.is_constant() for g in self.gens):
            return True
        if self.homogeneous:
            return False
        return self.gb().is_unit

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        if self.is_zero:
            return False
        return self.gb().contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        _same_ring(self, other)
        return all(self.contains(g) for g in other.gens)

    def equal(self, other: "Ideal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def is_irrelevant(self) -> bool:
        """True for the ideal of all variables (as a set, whatever its generators)."""
        return self.homogeneous and not self.is_unit and all(self.contains(x) for x in self.ring.gens())

    # --- arithmetic --------------------------------------------------------
    def __add__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        prods = [f * g for f in self.gens for g in other.gens]
        return Ideal(self.ring, _minimize(prods))

    def plus(self, polys: Iterable[Polynomial]) -> "Ideal":
        return Ideal(self.ring, self.gens + tuple(polys))

    def power(self, t: int) -> "Ideal":
        """I^t with minimal generators; lower powers are cached and reused."""
        if t < 0:
            raise AlgebraError("negative power")
        if t == 0:
            return Ideal.unit(self.ring)
        if t in self._powers:
            return self._powers[t]
        prev = self.power(t - 1)
        prods = [f * g for f in self.gens for g in prev.gens]
        P = Ideal(self.ring, _minimize(prods))
        self._powers[t] = P
        return P

    def minimalized(self) -> "Ideal":
        return Ideal(self.ring, _minimize(self.gens))

    # --- colon, saturation, intersection ------------------------------------
    def colon(self, other: "Polynomial | Ideal", method: str = "auto") -> "Ideal":
        if isinstance(other, Ideal):
            _same_ring(self, other)
            if other.is_zero:
                raise AlgebraError("colon by the zero ideal")
            out = None
            for g in other.gens:
                part = self.colon(g, method)
                out = part if out is None else out.intersect(part)
            return out
        f = other
        if f.is_zero():
            raise AlgebraError("colon by the zero polynomial")
        if f.ring != self.ring:
            raise AlgebraError("colon across rings")
        if f.is_constant() or self.is_zero:
            return self
        if method == "auto":
            method = "bayer" if self.homogeneous and f.homogeneous else "intersect"
        if method == "intersect":
            inter = self.intersect(Ideal(self.ring, [f]))
            return Ideal(self.ring, [_exact_divide(g, f) for g in inter.gens])
        if method == "bayer":
            return _colon_by_element(self, f, infinite=False)
        raise AlgebraError(f"unknown colon method {method!r}")

    def saturate(self, other: "Ideal", method: str = "auto", *, seed: int = 0, cap: int = SATURATION_CAP) -> "Ideal":
        """self : other^infinity.

        ``colon`` iterates J -> J : K to stability.  ``generic`` (the default
        for the irrelevant ideal) saturates by one random linear form, taken
        as the last variable of a grevlex order in changed coordinates, and
        accepts the answer only after checking that it is a finite-length
        extension of J, which forces equality.  ``element`` saturates by one
        random combination of the generators of ``other``; that is exact only
        for a general choice and carries no certificate.
        """
        _same_ring(self, other)
        if other.is_zero:
            raise AlgebraError("saturation by the zero ideal")
        if other.is_unit:
            return Ideal(self.ring, self.gens, meta={"iterations": 0, "method": "unit"})
        if method == "auto":
            method = "generic" if self.homogeneous and other.is_irrelevant() else "colon"
        if method == "generic":
            for attempt in range(3):
                S = _saturate_generic(self, seed + attempt)
                if S is not None:
                    S.meta.update(method="generic", seed=seed + attempt)
                    return S
            method = "colon"
        if method == "element":
            f = _general_element(other, seed)
            S = _colon_by_element(self, f, infinite=True)
            S.meta.update(method="element", seed=seed)
            return S
        if method == "colon":
            J = self
            for k in range(1, cap + 1):
                nxt = J.colon(other)
                if nxt.contains_ideal(J) and J.contains_ideal(nxt):
                    return Ideal(self.ring, J.gens, meta={"iterations": k - 1, "method": "colon"})
                J = nxt
            raise SaturationError(f"saturation did not stabilize after {cap} colon steps")
        raise AlgebraError(f"unknown saturation method {method!r}")

    def intersect(self, other: "Ideal") -> "Ideal":
        """Eliminate w from w*J + (1-w)*K."""
        _same_ring(self, other)
        if self.is_zero or other.is_zero:
            return Ideal.zero(self.ring)
        if self.is_unit:
            return other
        if other.is_unit:
            return self
        ring = self.ring
        S = ring.extend(["_w"], front=True)
        pos = list(range(1, S.nvars))
        w = S.var(0)
        one_minus_w = S.one() - w
        gens = [w * f.embed(S, pos) for f in self.gens] + [one_minus_w * g.embed(S, pos) for g in other.gens]
        G = groebner_basis(gens, elim_order(1))
        kept = [_drop_front(f, ring, 1) for f in G.elements if all(m[0] == 0 for m in f.coeffs)]
        out = Ideal(ring, kept)
        return out.minimalized() if out.homogeneous else out

    def eliminate(self, block: Sequence[int | str], weights: Sequence[int] | None = None) -> "Ideal":
        """Contraction to the polynomial ring in the variables outside ``block``.

        The result lives in the same ring; its generators avoid the block.
        """
        ring = self.ring
        idx = sorted({ring.names.index(b) if isinstance(b, str) else b for b in block})
        if not idx:
            return self
        if self.is_zero:
            return self
        rest = [i for i in range(ring.nvars) if i not in idx]
        perm_order = idx + rest
        S = Ring([ring.names[i] for i in perm_order], ring.p)
        where = {old: new for new, old in enumerate(perm_order)}
        fwd = [where[i] for i in range(ring.nvars)]
        w = None if weights is None else tuple(weights[i] for i in perm_order)
        G = groebner_basis([f.permute(S, fwd) for f in self.gens], elim_order(len(idx), w))
        back = [perm_order[i] for i in range(S.nvars)]
        kept = [f.permute(ring, back) for f in G.elements if all(not any(m[: len(idx)]) for m in f.coeffs)]
        return Ideal(ring, kept)

    def restrict(self, names: Sequence[str]) -> tuple[Ring, "Ideal"]:
        """Move an ideal whose generators only use ``names`` into k[names]."""
        ring = self.ring
        idx = [ring.names.index(nm) for nm in names]
        sub = Ring(list(names), ring.p)
        out = []
        for f in self.gens:
            d = {}
            for m, c in f.coeffs.items():
                if any(m[i] for i in range(ring.nvars) if i not in idx):
                    raise AlgebraError("generator involves a dropped variable")
                d[tuple(m[i] for i in idx)] = c
            out.append(Polynomial(sub, d))
        return sub, Ideal(sub, out)

    # --- Hilbert series and lengths -----------------------------------------
    def hilbert_series(self) -> RationalSeries:
        """HS(R/J) as numerator/(1-z)^n, not normalized."""
        if self._hs is None:
            if not self.homogeneous:
                raise AlgebraError("Hilbert series needs a homogeneous ideal")
            n = self.ring.nvars
            leads = self.gb().lead_monomials
            self._hs = RationalSeries(tuple(hilbert_numerator_monomial(leads, n)), n)
        return self._hs

    def dimension(self) -> int:
        """Krull dimension of R/J; -1 for the unit ideal."""
        hs = self.hilbert_series()
        return -1 if hs.is_zero else hs.dimension

    def hilbert_function(self, d: int) -> int:
        return self.hilbert_series().coefficient(d)


# ---------------------------------------------------------------------------

def _same_ring(a: Ideal, b: Ideal):
    if a.ring != b.ring:
        raise AlgebraError("ideals live in different rings")


def _minimize(polys: Sequence[Polynomial]) -> list[Polynomial]:
    polys = [f for f in polys if not f.is_zero()]
    if polys and all(f.homogeneous for f in polys):
        return minimal_generators(polys)
    return list(dict.fromkeys(polys))


def _drop_front(f: Polynomial, ring: Ring, k: int) -> Polynomial:
    return Polynomial._raw(ring, {m[k:]: c for m, c in f.coeffs.items()})


def _exact_divide(g: Polynomial, f: Polynomial) -> Polynomial:
    """g / f for f dividing g (multivariate long division in lex)."""
    from .algebra import LEX, mono_divides, mono_quotient

    ring = g.ring
    lm_f, lc_f = f.leading_term(LEX)
    inv = ring.field.inv(lc_f)
    q = ring.zero()
    r = g
    while not r.is_zero():
        lm, lc = r.leading_term(LEX)
        if not mono_divides(lm_f, lm):
            raise AlgebraError("inexact division")
        t = ring.monomial(mono_quotient(lm, lm_f), lc * inv)
        q = q + t
        r = r - t * f
    return q


def _general_element(K: Ideal, seed: int) -> Polynomial:
    from .algebra import random_linear_combination

    gens = list(K.gens)
    degs = {g.degree() for g in gens}
    if len(degs) > 1:
        # bring generators to a common degree so the combination stays homogeneous
        top = max(degs)
        lifted = []
        for g in gens:
            lifted.extend(g * m for m in _monomials_poly(K.ring, top - g.degree()))
        gens = lifted
    return random_linear_combination(gens, 1, seed).elements[0]


def _monomials_poly(ring: Ring, d: int) -> list[Polynomial]:
    return [ring.monomial(m) for m in ring.monomials_of_degree(d)]


def _colon_by_element(J: Ideal, f: Polynomial, *, infinite: bool) -> Ideal:
    """J : f (or J : f^infinity) through a new last variable y standing for f.

    In R[y] with y weighted by deg f, J + (y - f) is homogeneous; in weighted
    grevlex with y last the basis elements divisible by y at their leading
    term are divisible by y outright, so dividing them out gives a basis of
    the colon by y.  Setting y = f maps that back to J : f.
    """
    ring = J.ring
    if J.is_zero:
        return J
    if not (J.homogeneous and f.homogeneous):
        if infinite:
            raise AlgebraError("element saturation needs homogeneous data")
        return J.colon(f, method="intersect")
    S = ring.extend(["_y"])
    n = ring.nvars
    pos = list(range(n))
    y = S.var(n)
    weights = (1,) * n + (f.degree(),)
    gens = [g.embed(S, pos) for g in J.gens] + [y - f.embed(S, pos)]
    G = groebner_basis(gens, MonomialOrder("grevlex", 0, weights))
    images = ring.gens() + [f]
    out = []
    for g in G.elements:
        k = min(m[n] for m in g.coeffs)
        if not infinite:
            k = min(k, 1)
        if k:
            g = g.divide_monomial((0,) * n + (k,))
        out.append(g.substitute(images))
    return Ideal(ring, _minimize(out))


def generic_last_variable(ring: Ring, seed: int) -> tuple[list, list, tuple]:
    """Linear change of coordinates sending a random linear form to x_n.

    Returns (forward, backward, coefficients): ``forward`` substitutes
    x_n -> x_n - sum c_i x_i and ``backward`` undoes it, so forward carries
    the form x_n + sum c_i x_i to x_n.
    """
    rng = random.Random(seed)
    n = ring.nvars
    c = tuple(rng.randrange(1, ring.p) for _ in range(n - 1))
    xs = ring.gens()
    shift = ring.zero()
    for ci, x in zip(c, xs[:-1]):
        shift = shift + x.scale(ci)
    forward = xs[:-1] + [xs[-1] - shift]
    backward = xs[:-1] + [xs[-1] + shift]
    return forward, backward, c


def _saturate_generic(J: Ideal, seed: int) -> Ideal | None:
    ring = J.ring
    if J.is_zero or J.is_unit:
        return Ideal(ring, J.gens)
    n = ring.nvars
    forward, backward, _ = generic_last_variable(ring, seed)
    G = groebner_basis([g.substitute(forward) for g in J.gens], GREVLEX)
    divided = []
    for g in G.elements:
        k = min(m[n - 1] for m in g.coeffs)
        if k:
            g = g.divide_monomial((0,) * (n - 1) + (k,))
        divided.append(g)
    # both bases live in the changed coordinates, where Hilbert series agree
    hs_J = RationalSeries(tuple(hilbert_numerator_monomial(G.lead_monomials, n)), n)
    leads = [g.leading_monomial(GREVLEX) for g in divided]
    hs_S = RationalSeries(tuple(hilbert_numerator_monomial(leads, n)), n)
    # J is inside S; a finite-length difference puts S inside J : m^infinity
    if (hs_J - hs_S).as_polynomial() is None:
        return None
    S = Ideal(ring, [g.substitute(backward) for g in divided])
    S._hs = hs_S
    if J._hs is None:
        J._hs = hs_J
    return S


def length_between(J: Ideal, U: Ideal) -> int:
    """lambda(U/J) for homogeneous J inside U."""
    _same_ring(J, U)
    if not (J.homogeneous and U.homogeneous):
        raise AlgebraError("lengths need homogeneous ideals")
    if not U.contains_ideal(J):
        raise AlgebraError("length_between: J is not contained in U")
    return series_length(J.hilbert_series() - U.hilbert_series())


def colength(J: Ideal) -> int:
    """lambda(R/J)."""
    return series_length(J.hilbert_series())


def series_length(diff: RationalSeries) -> int:
    poly = diff.as_polynomial()
    if poly is None:
        raise InfiniteLength(f"quotient has infinite length (series {diff.normalized()})")
    return sum(poly)


def intersection_series(U: Ideal, V: Ideal) -> RationalSeries:
    """HS(R/(U cap V)) without forming the intersection."""
    return U.hilbert_series() + V.hilbert_series() - (U + V).hilbert_series()


def minors(k: int, matrix: Sequence[Sequence[Polynomial]]) -> Ideal:
    """Ideal of the k x k minors of ``matrix``."""
    rows = len(matrix)
    if rows == 0:
        raise AlgebraError("empty matrix")
    cols = len(matrix[0])
    if any(len(r) != cols for r in matrix):
        raise AlgebraError("ragged matrix")
    if not 1 <= k <= min(rows, cols):
        raise AlgebraError(f"minor size {k} out of range for a {rows}x{cols} matrix")
    ring = matrix[0][0].ring
    dets = []
    for rs in itertools.combinations(range(rows), k):
        for cs in itertools.combinations(range(cols), k):
            dets.append(_det([[matrix[r][c] for c in cs] for r in rs], ring))
    return Ideal(ring, dets)


def _det(M, ring) -> Polynomial:
    if len(M) == 1:
        return M[0][0]
    out = ring.zero()
    for j, a in enumerate(M[0]):
        if a.is_zero():
            continue
        sub = [row[:j] + row[j + 1:] for row in M[1:]]
        term = a * _det(sub, ring)
        out = out + term if j % 2 == 0 else out - term
    return out
