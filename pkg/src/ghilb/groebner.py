"""Buchberger's algorithm with Gebauer-Moeller pair pruning, normal forms and
Hilbert numerators of monomial ideals."""

from __future__ import annotations

import heapq
import itertools
import os
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    GREVLEX,
    AlgebraError,
    Monomial,
    MonomialOrder,
    OrderCodec,
    Polynomial,
    Ring,
    mono_divides,
)

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    """A Groebner computation used more reduction steps than allowed."""


def default_budget() -> int:
    env = os.environ.get("GHILB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


# Divisibility on packed exponent vectors: 16-bit fields under a guard bit.
_FIELD = 17


def _pack(m: Monomial) -> int:
    out = 0
    for i, e in enumerate(m):
        out |= e << (_FIELD * i)
    return out


def _guard(n: int) -> int:
    return sum(1 << (_FIELD * i + 16) for i in range(n))


class _Stats:
    __slots__ = ("steps", "budget")

    def __init__(self, budget):
        self.steps = 0
        self.budget = budget


class _Reducer:
    """Reduction machinery shared by Buchberger and normal forms.

    Polynomials are dicts {order key: coefficient}; basis elements are monic
    term lists sorted by decreasing key.
    """

    def __init__(self, ring: Ring, order: MonomialOrder, budget: int | None = None):
        self.ring = ring
        self.order = order
        self.p = ring.p
        self.n = ring.nvars
        self.codec: OrderCodec = order.codec(self.n)
        self.guard = _guard(self.n)
        self.weights = order.weight_vector(self.n)
        self.stats = _Stats(budget if budget is not None else default_budget())
        self._packs: dict[int, int] = {}
        # basis storage
        self.polys: list[list] = []  # tail terms [(key, coeff)], lead excluded
        self.lead_keys: list[int] = []
        self.lead_exps: list[Monomial] = []
        self.lead_packs: list[int] = []
        self.sugar: list[int] = []
        self.active: list[int] = []  # indices usable as reducers

    # --- conversion -------------------------------------------------------
    def encode(self, f: Polynomial) -> dict:
        enc = self.codec.encode
        return {enc(m): c for m, c in f._d.items()}

    def decode(self, d: dict) -> Polynomial:
        dec = self.codec.decode
        return Polynomial._raw(self.ring, {dec(k): c for k, c in d.items()})

    def wdeg(self, m: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, m))

    def pack_of(self, key: int) -> int:
        pk = self._packs.get(key)
        if pk is None:
            pk = _pack(self.codec.decode(key))
            self._packs[key] = pk
        return pk

    # --- basis ------------------------------------------------------------
    def add_basis(self, d: dict, sugar: int) -> int:
        """Store monic version of non-zero ``d``; return its index."""
        lead = max(d)
        inv = pow(d[lead], self.p - 2, self.p)
        p = self.p
        tail = sorted(((k, c * inv % p) for k, c in d.items() if k != lead), reverse=True)
        exps = self.codec.decode(lead)
        self.polys.append(tail)
        self.lead_keys.append(lead)
        self.lead_exps.append(exps)
        self.lead_packs.append(_pack(exps))
        self.sugar.append(sugar)
        return len(self.polys) - 1

    def find_reducer(self, pk: int) -> int:
        g = self.guard
        packs = self.lead_packs
        for i in self.active:
            if ((pk | g) - packs[i]) & g == g:
                return i
        return -1

    def reduce(self, f: dict, full: bool = True) -> dict:
        """Reduce ``f`` (consumed) against the active basis."""
        p = self.p
        polys, lead_keys = self.polys, self.lead_keys
        stats = self.stats
        rem = {}
        while f:
            K = max(f)
            i = self.find_reducer(self.pack_of(K))
            if i < 0:
                if not full:
                    return f
                rem[K] = f.pop(K)
                continue
            c = f.pop(K)
            mk = K - lead_keys[i]
            get = f.get
            for k, v in polys[i]:
                nk = k + mk
                nv = (get(nk, 0) - c * v) % p
                if nv:
                    f[nk] = nv
                else:
                    del f[nk]
            stats.steps += 1
            if stats.steps > stats.budget:
                raise BudgetExceeded(
                    f"Groebner budget of {stats.budget} reduction steps exceeded "
                    "(set GHILB_BUDGET to raise it)"
                )
        return rem

    def spoly(self, i: int, j: int) -> dict:
        lcm_key = self.codec.encode(tuple(max(a, b) for a, b in zip(self.lead_exps[i], self.lead_exps[j])))
        p = self.p
        out: dict = {}
        mi = lcm_key - self.lead_keys[i]
        for k, v in self.polys[i]:
            out[k + mi] = v
        mj = lcm_key - self.lead_keys[j]
        get = out.get
        for k, v in self.polys[j]:
            nk = k + mj
            nv = (get(nk, 0) - v) % p
            if nv:
                out[nk] = nv
            else:
                out.pop(nk, None)
        return out

    def poly_degree(self, d: dict) -> int:
        dec = self.codec.decode
        return max(self.wdeg(dec(k)) for k in d)


@dataclass
class GroebnerBasis:
    """Reduced, monic Groebner basis of an ideal in a fixed monomial order."""

    ring: Ring
    order: MonomialOrder
    elements: list
    max_degree: int | None = None  # set when the basis is only degree-truncated
    steps: int = 0
    source: object = None
    _reducer: _Reducer | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def lead_monomials(self) -> list[Monomial]:
        return [g.leading_monomial(self.order) for g in self.elements]

    @property
    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.elements)

    def reducer(self) -> _Reducer:
        if self._reducer is None:
            red = _Reducer(self.ring, self.order)
            for g in self.elements:
                red.active.append(red.add_basis(red.encode(g), g.degree()))
            self._reducer = red
        return self._reducer

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Fully reduced remainder of ``f`` modulo ``G``."""
    if f.ring != G.ring:
        raise AlgebraError("normal form across different rings")
    red = G.reducer()
    red.stats.steps = 0
    return red.decode(red.reduce(red.encode(f), full=True))


def _update(red: _Reducer, G: list[int], B: list, h: int, counter):
    """Gebauer-Moeller installation of basis element ``h``."""
    exps = red.lead_exps
    eh = exps[h]

    def lcm(a, b):
        return tuple(max(x, y) for x, y in zip(a, b))

    def disjoint(a, b):
        return all(x == 0 or y == 0 for x, y in zip(a, b))

    C = [(g, lcm(eh, exps[g])) for g in G]
    D = []
    while C:
        g1, l1 = C.pop()
        if disjoint(eh, exps[g1]) or (
            not any(mono_divides(l2, l1) for _, l2 in C)
            and not any(mono_divides(l2, l1) for _, l2 in D)
        ):
            D.append((g1, l1))
    E = [(g, l) for g, l in D if not disjoint(eh, exps[g])]
    Bnew = []
    for item in B:
        _, _, _, i, j, l = item
        if (
            not mono_divides(eh, l)
            or lcm(exps[i], eh) == l
            or lcm(eh, exps[j]) == l
        ):
            Bnew.append(item)
    for g, l in E:
        key = red.codec.encode(l)
        sug = max(red.sugar[g] + red.wdeg(l) - red.wdeg(exps[g]), red.sugar[h] + red.wdeg(l) - red.wdeg(eh))
        Bnew.append((sug, key, next(counter), g, h, l))
    heapq.heapify(Bnew)
    Gnew = [g for g in G if not mono_divides(eh, exps[g])]
    Gnew.append(h)
    return Gnew, Bnew


def groebner_basis(
    gens: Sequence[Polynomial],
    order: MonomialOrder = GREVLEX,
    *,
    max_degree: int | None = None,
    budget: int | None = None,
    source=None,
) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm (normal/sugar strategy).

    With ``max_degree`` only S-pairs of (weighted) degree <= max_degree are
    processed: for homogeneous input the result is a Groebner basis up to
    that degree.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise AlgebraError("groebner_basis needs at least one generator (use the zero ideal explicitly)")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise AlgebraError("generators live in different rings")
    red = _Reducer(ring, order, budget)

    # seed: inter-reduce input in increasing degree so cheap elements go first
    inputs = sorted((red.encode(g) for g in gens), key=lambda d: (red.poly_degree(d), max(d)))
    G: list[int] = []
    B: list = []
    counter = itertools.count()
    for d in inputs:
        sug = red.poly_degree(d)
        if max_degree is not None and sug > max_degree:
            continue
        red.active = G
        r = red.reduce(d, full=True)
        if not r:
            continue
        h = red.add_basis(r, sug)
        if not any(red.lead_exps[h]):
            return _finish_unit(ring, order, red, source)
        G, B = _update(red, G, B, h, counter)

    while B:
        sug, _, _, i, j, l = heapq.heappop(B)
        if max_degree is not None and sug > max_degree:
            continue
        s = red.spoly(i, j)
        if not s:
            continue
        red.active = G
        r = red.reduce(s, full=True)
        if not r:
            continue
        h = red.add_basis(r, sug)
        if not any(red.lead_exps[h]):
            return _finish_unit(ring, order, red, source)
        G, B = _update(red, G, B, h, counter)

    return _interreduce(ring, order, red, G, max_degree, source)


def _finish_unit(ring, order, red, source):
    return GroebnerBasis(ring, order, [ring.one()], None, red.stats.steps, source)


def _interreduce(ring, order, red: _Reducer, G: list[int], max_degree, source) -> GroebnerBasis:
    # G is already minimal (Gebauer-Moeller drops elements whose lead is divisible)
    exps = red.lead_exps
    G = [g for g in G if not any(h != g and mono_divides(exps[h], exps[g]) for h in G)]
    G.sort(key=lambda g: red.lead_keys[g])
    final = []
    for g in G:
        others = [h for h in G if h != g]
        red.active = others
        tail = {}
        for k, v in red.polys[g]:
            tail[k] = v
        tail = red.reduce(tail, full=True)
        d = dict(tail)
        d[red.lead_keys[g]] = 1
        final.append(d)
    elements = sorted((red.decode(d) for d in final), key=lambda f: order.key(f.leading_monomial(order)))
    # the ring's default order may differ; store terms sorted in ``order``
    basis = GroebnerBasis(ring, order, elements, max_degree, red.stats.steps, source)
    return basis


def is_groebner(G: GroebnerBasis) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    red = _Reducer(G.ring, G.order, budget=10**12)
    idx = [red.add_basis(red.encode(g), g.degree()) for g in G.elements]
    red.active = idx
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            s = red.spoly(idx[a], idx[b])
            if s and red.reduce(s, full=False):
                return False
    return True


# ---------------------------------------------------------------------------
# Hilbert numerators of monomial ideals
# ---------------------------------------------------------------------------

def minimalize(gens: Sequence[Monomial]) -> list[Monomial]:
    """Minimal generators of the monomial ideal generated by ``gens``."""
    out: list[Monomial] = []
    for m in sorted(set(map(tuple, gens)), key=sum):
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return out


def _mdeg(m: Monomial, degs: Sequence[tuple]) -> tuple:
    k = len(degs[0])
    return tuple(sum(e * d[j] for e, d in zip(m, degs)) for j in range(k))


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def _padd(a: dict, b: dict, shift: tuple | None = None) -> dict:
    out = dict(a)
    for k, v in b.items():
        if shift is not None:
            k = tuple(x + y for x, y in zip(k, shift))
        out[k] = out.get(k, 0) + v
        if not out[k]:
            del out[k]
    return out


def hilbert_numerator_multigraded(gens: Sequence[Monomial], degs: Sequence[tuple]) -> dict:
    """Numerator N of HS(S/(gens)) = N / prod_i (1 - t^deg(x_i)).

    ``degs[i]`` is the multidegree of variable i; N is returned as
    {multidegree: coefficient}.  Pivot recursion on a variable occurring in
    the most generators, splitting at the median exponent.
    """
    n = len(degs)
    k = len(degs[0])
    zero = (0,) * k
    gens = minimalize(gens)

    def rec(gs: list[Monomial]) -> dict:
        if not gs:
            return {zero: 1}
        if any(not any(g) for g in gs):
            return {}
        counts = [0] * n
        for g in gs:
            for i, e in enumerate(g):
                if e:
                    counts[i] += 1
        if max(counts) <= 1:
            out = {zero: 1}
            for g in gs:
                out = _pmul(out, {zero: 1, _mdeg(g, degs): -1})
            return out
        if len(gs) == 1:
            return {zero: 1, _mdeg(gs[0], degs): -1}
        i = max(range(n), key=lambda v: counts[v])
        exps = sorted(g[i] for g in gs if g[i])
        e = exps[(len(exps) - 1) // 2]
        piv = tuple(e if v == i else 0 for v in range(n))
        # I + (piv)
        left = [g for g in gs if g[i] < e] + [piv]
        # I : piv
        right = minimalize([tuple(max(x - y, 0) for x, y in zip(g, piv)) for g in gs])
        return _padd(rec(left), rec(right), _mdeg(piv, degs))

    return rec(gens)


def hilbert_numerator_monomial(lead: Sequence[Monomial], n: int | None = None) -> list[int]:
    """Standard-graded numerator as a coefficient list (index = power of z)."""
    lead = [tuple(m) for m in lead]
    if n is None:
        if not lead:
            raise AlgebraError("variable count needed for the empty ideal")
        n = len(lead[0])
    if n == 0:
        return [0] if lead else [1]
    N = hilbert_numerator_multigraded(lead, [(1,)] * n)
    if not N:
        return []
    top = max(k[0] for k in N)
    out = [0] * (top + 1)
    for k, v in N.items():
        out[k[0]] = v
    while out and out[-1] == 0:
        out.pop()
    return out


def minimal_generators(gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX, budget: int | None = None) -> list[Polynomial]:
    """A minimal generating subset of homogeneous ``gens``.

    Works degree by degree: a generator is kept when it is not in the ideal
    spanned by what was kept earlier.  Within one degree that only needs the
    truncated basis of the lower-degree part plus the degree's own pivots,
    because new S-pairs there start strictly higher.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    for g in gens:
        if not g.homogeneous:
            raise AlgebraError("minimal generators need homogeneous input")
    ring = gens[0].ring
    by_deg: dict[int, list[Polynomial]] = {}
    for g in gens:
        by_deg.setdefault(g.degree(), []).append(g)
    kept: list[Polynomial] = []
    for d in sorted(by_deg):
        red = _Reducer(ring, order, budget)
        if kept:
            for g in groebner_basis(kept, order, max_degree=d, budget=budget).elements:
                red.active.append(red.add_basis(red.encode(g), g.degree()))
        for f in by_deg[d]:
            r = red.reduce(red.encode(f), full=True)
            if r:
                kept.append(f)
                red.active.append(red.add_basis(r, d))
    return kept
