"""Exact arithmetic over a prime field: monomial orders, sparse polynomials, general elements."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

DEFAULT_PRIME = 32003
MAX_DEGREE = 10_000  # degrees past this are treated as overflow

Monomial = tuple  # exponent vector, one entry per ring variable


class AlgebraError(ValueError):
    """Domain or structural error in exact arithmetic."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


class PrimeField:
    """The field Z/pZ; elements are plain ints in [0, p)."""

    def __init__(self, p: int = DEFAULT_PRIME):
        if not is_prime(p):
            raise AlgebraError(f"characteristic {p} is not prime")
        self.p = p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __call__(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def signed(self, a: int) -> int:
        """Symmetric representative in (-p/2, p/2]."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True iff a | b."""
    return all(x <= y for x, y in zip(a, b))


def mono_quotient(a: Monomial, b: Monomial) -> Monomial:
    """a / b, requiring b | a."""
    q = tuple(x - y for x, y in zip(a, b))
    if any(e < 0 for e in q):
        raise AlgebraError(f"{b} does not divide {a}")
    return q


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(min(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

ROW_BITS = 20


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order given by a non-negative integer weight matrix.

    ``grevlex``: weighted degree, then the weighted partial sums
    w_1e_1+..+w_{n-1}e_{n-1}, ..., w_1e_1, each larger-is-bigger.  With unit
    weights this is exactly degree reverse lexicographic order; for any
    weights a homogeneous polynomial whose leading term is divisible by
    x_n^k is divisible by x_n^k.  ``lex``: plain lexicographic.  ``elim``:
    degree in the first ``block`` variables first, then grevlex.

    Every order is encoded as an integer key that is linear in the exponent
    vector, so ``key(a*b) == key(a) + key(b)`` and integer comparison of keys
    is comparison of monomials.
    """

    kind: str = "grevlex"
    block: int = 0
    weights: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise AlgebraError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elim" and self.block < 0:
            raise AlgebraError("elimination block must be non-negative")
        if self.weights is not None and any(w <= 0 for w in self.weights):
            raise AlgebraError("order weights must be positive")

    def __str__(self):
        s = "GrevLex" if self.kind == "grevlex" else "Lex" if self.kind == "lex" else f"Elim({self.block})"
        if self.weights is not None:
            s += f"[w={list(self.weights)}]"
        return s

    def weight_vector(self, n: int) -> tuple:
        if self.weights is None:
            return (1,) * n
        if len(self.weights) != n:
            raise AlgebraError("weight vector length does not match variable count")
        return tuple(self.weights)

    def rows(self, n: int) -> list[tuple]:
        if self.kind == "lex":
            return [tuple(int(i == j) for j in range(n)) for i in range(n)]
        w = self.weight_vector(n)
        rows = [w]
        rows += [tuple(w[i] if i < j else 0 for i in range(n)) for j in range(n - 1, 0, -1)]
        if self.kind == "elim":
            rows.insert(0, tuple(int(i < self.block) for i in range(n)))
        return rows

    def key(self, m: Monomial) -> tuple:
        """Sort key: larger key = larger monomial."""
        return tuple(sum(r * e for r, e in zip(row, m)) for row in self.rows(len(m)))

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def degree(self, m: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weight_vector(len(m)), m))

    def codec(self, n: int) -> "OrderCodec":
        return OrderCodec(self, n)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def elim_order(block: int, weights: tuple | None = None) -> MonomialOrder:
    return MonomialOrder("elim", block, weights)


class OrderCodec:
    """Packs exponent vectors into order-preserving, additive integers."""

    def __init__(self, order: MonomialOrder, n: int):
        self.order = order
        self.n = n
        rows = order.rows(n)
        self.nrows = len(rows)
        mask = (1 << ROW_BITS) - 1
        self.mask = mask
        # key contribution of x_i: column i of the weight matrix, packed
        self.var_keys = [
            sum(row[i] << (ROW_BITS * (self.nrows - 1 - r)) for r, row in enumerate(rows))
            for i in range(n)
        ]
        self.weights = order.weight_vector(n)
        self._deg_shift = ROW_BITS * (self.nrows - 1 - (1 if order.kind == "elim" else 0))
        self._cache: dict[int, Monomial] = {}

    def encode(self, m: Monomial) -> int:
        if order_degree_exceeds(m):
            raise AlgebraError("monomial degree overflow")
        return sum(e * k for e, k in zip(m, self.var_keys))

    def degree(self, key: int) -> int:
        """Weighted degree of an encoded monomial (lex: plain degree unsupported)."""
        return (key >> self._deg_shift) & self.mask

    def decode(self, key: int) -> Monomial:
        m = self._cache.get(key)
        if m is not None:
            return m
        n, mask = self.n, self.mask
        if self.order.kind == "lex":
            m = tuple((key >> (ROW_BITS * (n - 1 - i))) & mask for i in range(n))
        else:
            # trailing rows hold weighted partial sums S_1, ..., S_{n-1}, then the degree
            w = self.weights
            e = [0] * n
            prev = 0
            for i in range(n):
                s = (key >> (ROW_BITS * i)) & mask
                e[i] = (s - prev) // w[i]
                prev = s
            m = tuple(e)
        if len(self._cache) < 2_000_000:
            self._cache[key] = m
        return m


def order_degree_exceeds(m: Monomial) -> bool:
    return sum(m) >= MAX_DEGREE or any(e < 0 for e in m)


# ---------------------------------------------------------------------------
# rings and polynomials
# ---------------------------------------------------------------------------

class Ring:
    """Polynomial ring F_p[x_1..x_n] with a default monomial order."""

    def __init__(self, names: Sequence[str], p: int = DEFAULT_PRIME, order: MonomialOrder = GREVLEX):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate variable names")
        self.names = names
        self.field = PrimeField(p)
        self.order = order

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __repr__(self):
        return f"Ring({list(self.names)}, p={self.p}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names and self.p == other.p

    def __hash__(self):
        return hash((self.names, self.p))

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def var(self, i: int | str) -> "Polynomial":
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: 1})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def constant(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, m: Monomial, c: int = 1) -> "Polynomial":
        return Polynomial(self, {tuple(m): c})

    def monomials_of_degree(self, d: int) -> list[Monomial]:
        return list(monomials_of_degree(self.nvars, d))

    def extend(self, names: Sequence[str], *, front: bool = False) -> "Ring":
        new = tuple(names) + self.names if front else self.names + tuple(names)
        return Ring(new, self.p, self.order)


def monomials_of_degree(n: int, d: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - a):
            yield (a,) + rest


class Polynomial:
    """Immutable sparse polynomial; terms kept as {exponent tuple: residue}."""

    __slots__ = ("ring", "_d", "_sorted")

    def __init__(self, ring: Ring, terms: dict | None = None):
        p = ring.p
        d = {}
        for m, c in (terms or {}).items():
            c %= p
            if c:
                if len(m) != ring.nvars:
                    raise AlgebraError("monomial length does not match ring")
                d[tuple(m)] = c
        self.ring = ring
        self._d = d
        self._sorted = None

    @classmethod
    def _raw(cls, ring: Ring, d: dict) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._d = d
        obj._sorted = None
        return obj

    # --- access -----------------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return dict(self._d)

    def terms(self, order: MonomialOrder | None = None) -> list[tuple[Monomial, int]]:
        """Terms in strictly decreasing order."""
        order = order or self.ring.order
        if order == self.ring.order and self._sorted is not None:
            return self._sorted
        rows = order.rows(self.ring.nvars)
        key = lambda mc: tuple(sum(r * e for r, e in zip(row, mc[0])) for row in rows)
        out = sorted(self._d.items(), key=key, reverse=True)
        if order == self.ring.order:
            self._sorted = out
        return out

    def leading_term(self, order: MonomialOrder | None = None) -> tuple[Monomial, int]:
        if not self._d:
            raise AlgebraError("zero polynomial has no leading term")
        return self.terms(order)[0]

    def leading_monomial(self, order: MonomialOrder | None = None) -> Monomial:
        return self.leading_term(order)[0]

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self):
        return bool(self._d)

    def __len__(self):
        return len(self._d)

    def degree(self) -> int:
        if not self._d:
            return -1
        return max(sum(m) for m in self._d)

    def degrees(self) -> set:
        return {sum(m) for m in self._d}

    @property
    def homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        if weights is None:
            return self.homogeneous
        return len({sum(w * e for w, e in zip(weights, m)) for m in self._d}) <= 1

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._d)

    # --- arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise AlgebraError(f"cannot combine Polynomial with {type(other).__name__}")
        if other.ring != self.ring:
            raise AlgebraError("operands live in different rings")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, int):
            return self.ring.constant(other)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.p
        d = dict(self._d)
        for m, c in other._d.items():
            v = (d.get(m, 0) + c) % p
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return Polynomial._raw(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial._raw(self.ring, {m: p - c for m, c in self._d.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c: int) -> "Polynomial":
        c %= self.ring.p
        if not c:
            return self.ring.zero()
        p = self.ring.p
        return Polynomial._raw(self.ring, {m: v * c % p for m, v in self._d.items()})

    def mul_term(self, m: Monomial, c: int = 1) -> "Polynomial":
        c %= self.ring.p
        if not c:
            return self.ring.zero()
        p = self.ring.p
        return Polynomial._raw(self.ring, {mono_mul(k, m): v * c % p for k, v in self._d.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.ring.p
        if len(self._d) < len(other._d):
            a, b = self._d, other._d
        else:
            a, b = other._d, self._d
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = (out.get(m, 0) + ca * cb) % p
        if out and max(sum(m) for m in out) >= MAX_DEGREE:
            raise AlgebraError("degree overflow")
        return Polynomial._raw(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise AlgebraError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def monic(self) -> "Polynomial":
        if not self._d:
            return self
        return self.scale(self.ring.field.inv(self.leading_term()[1]))

    def divide_monomial(self, m: Monomial) -> "Polynomial":
        return Polynomial._raw(self.ring, {mono_quotient(k, m): c for k, c in self._d.items()})

    def content_monomial(self) -> Monomial:
        """Largest monomial dividing every term."""
        it = iter(self._d)
        g = next(it)
        for m in it:
            g = mono_gcd(g, m)
        return g

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Image under x_i -> images[i] (images may live in another ring)."""
        target = images[0].ring
        out = target.zero()
        powers: dict = {}
        for m, c in self._d.items():
            t = target.constant(c)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = images[i] ** e
                    t = t * powers[key]
            out = out + t
        return out

    def permute(self, ring: Ring, perm: Sequence[int]) -> "Polynomial":
        """Move variable i to position perm[i] in ``ring``."""
        d = {}
        for m, c in self._d.items():
            e = [0] * ring.nvars
            for i, x in enumerate(m):
                e[perm[i]] = x
            d[tuple(e)] = c
        return Polynomial._raw(ring, d)

    def embed(self, ring: Ring, positions: Sequence[int]) -> "Polynomial":
        """Map into a larger ring, sending variable i to ``positions[i]``."""
        return self.permute(ring, positions)

    # --- comparison and display ------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        return isinstance(other, Polynomial) and other.ring == self.ring and other._d == self._d

    def __hash__(self):
        return hash((self.ring.names, frozenset(self._d.items())))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_poly(self)


def format_poly(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    field = f.ring.field
    parts = []
    for m, c in f.terms():
        c = field.signed(c)
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(f.ring.names, m) if e
        )
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------------------
# general elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralElements:
    """Random linear combinations of generators, with the coefficients used."""

    elements: tuple
    coefficients: tuple  # one row per element, one entry per generator
    seed: int

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def random_linear_combination(gens: Sequence[Polynomial], count: int, seed: int) -> GeneralElements:
    """``count`` combinations sum_j c_ij * gens[j] with c_ij uniform in F_p^*.

    Deterministic in (gens, count, seed).
    """
    gens = list(gens)
    if not gens:
        raise AlgebraError("cannot take general elements of an empty generator list")
    if count < 0:
        raise AlgebraError("count must be non-negative")
    ring = gens[0].ring
    rng = random.Random(seed)
    rows, elems = [], []
    for _ in range(count):
        row = tuple(rng.randrange(1, ring.p) for _ in gens)
        f = ring.zero()
        for c, g in zip(row, gens):
            f = f + g.scale(c)
        rows.append(row)
        elems.append(f)
    return GeneralElements(tuple(elems), tuple(rows), seed)


def random_linear_forms(ring: Ring, count: int, seed: int) -> GeneralElements:
    return random_linear_combination(ring.gens(), count, seed)


def sum_polys(polys: Iterable[Polynomial], ring: Ring) -> Polynomial:
    out = ring.zero()
    for f in polys:
        out = out + f
    return out
