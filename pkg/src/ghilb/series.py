"""Integer series of the shape N(z)/(1-z)^k and the bookkeeping around them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence


# --- integer polynomials as coefficient lists (index = power of z) ---------

def _trim(c: Sequence[int]) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a: Sequence[int], b: Sequence[int]) -> tuple:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pneg(a: Sequence[int]) -> tuple:
    return tuple(-x for x in a)


def pmul(a: Sequence[int], b: Sequence[int]) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def one_minus_z_pow(k: int) -> tuple:
    return tuple((-1) ** i * comb(k, i) for i in range(k + 1))


def divide_one_minus_z(a: Sequence[int]) -> tuple | None:
    """a / (1-z) when exact, else None."""
    if sum(a) != 0:
        return None
    out, run = [], 0
    for x in a[:-1]:
        run += x
        out.append(run)
    return _trim(out)


def peval(a: Sequence[int], z) -> int:
    acc = 0
    for c in reversed(a):
        acc = acc * z + c
    return acc


def format_numerator(a: Sequence[int], var: str = "z") -> str:
    """Ascending powers, no spaces: 4z+z^2+6z^3-3z^4."""
    if not a:
        return "0"
    out = ""
    for k, c in enumerate(a):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            power = var if k == 1 else f"{var}^{k}"
            body = power if mag == 1 else f"{mag}{power}"
        out += body if not out and sign == "+" else sign + body
    return out


@dataclass(frozen=True, eq=False)
class RationalSeries:
    """The power series numerator(z) / (1-z)^denom, exact over the integers.

    Two instances compare equal when they expand to the same series; use
    :meth:`same_form` to compare the literal numerator and exponent.
    """

    numerator: tuple
    denom: int

    def __post_init__(self):
        object.__setattr__(self, "numerator", _trim(int(c) for c in self.numerator))
        if self.denom < 0:
            raise ValueError("denominator exponent must be non-negative")

    @classmethod
    def zero(cls) -> "RationalSeries":
        return cls((), 0)

    @classmethod
    def polynomial(cls, coeffs: Sequence[int]) -> "RationalSeries":
        return cls(tuple(coeffs), 0)

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    @property
    def is_normalized(self) -> bool:
        return self.is_zero or sum(self.numerator) != 0 or self.denom == 0

    def normalized(self) -> "RationalSeries":
        if self.is_zero:
            return RationalSeries.zero()
        num, k = self.numerator, self.denom
        while k > 0:
            q = divide_one_minus_z(num)
            if q is None:
                break
            num, k = q, k - 1
        return RationalSeries(num, k)

    def same_form(self, other: "RationalSeries") -> bool:
        return self.numerator == other.numerator and self.denom == other.denom

    def __eq__(self, other):
        if not isinstance(other, RationalSeries):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return a.same_form(b)

    def __hash__(self):
        n = self.normalized()
        return hash((n.numerator, n.denom))

    def with_denom(self, k: int) -> "RationalSeries":
        """Same series written over (1-z)^k, k at least the current exponent."""
        if k < self.denom:
            raise ValueError("cannot lower the denominator exponent this way")
        return RationalSeries(pmul(self.numerator, one_minus_z_pow(k - self.denom)) if self.numerator else (), k)

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        k = max(self.denom, other.denom)
        return RationalSeries(padd(self.with_denom(k).numerator, other.with_denom(k).numerator), k)

    def __neg__(self):
        return RationalSeries(pneg(self.numerator), self.denom)

    def __sub__(self, other: "RationalSeries") -> "RationalSeries":
        return self + (-other)

    def scale(self, c: int) -> "RationalSeries":
        return RationalSeries(tuple(c * x for x in self.numerator), self.denom)

    def shift(self, k: int) -> "RationalSeries":
        """Multiply by z^k."""
        return RationalSeries((0,) * k + self.numerator if self.numerator else (), self.denom)

    def cumulative(self) -> "RationalSeries":
        """Running sums of the coefficients: divide by (1-z)."""
        return RationalSeries(self.numerator, self.denom + 1)

    def expand(self, count: int) -> list[int]:
        """First ``count`` coefficients."""
        c = [0] * count
        for i, x in enumerate(self.numerator[:count]):
            c[i] = x
        for _ in range(self.denom):
            run = 0
            for i in range(count):
                run += c[i]
                c[i] = run
        return c

    def coefficient(self, t: int) -> int:
        return self.expand(t + 1)[t] if t >= 0 else 0

    def truncation(self, degree_bound: int) -> tuple:
        """Coefficients of z^0 .. z^{degree_bound-1} as a polynomial."""
        return _trim(self.expand(max(degree_bound, 0)))

    def at_one(self) -> int:
        """Sum of the numerator coefficients (the multiplicity when normalized)."""
        return sum(self.numerator)

    def as_polynomial(self) -> tuple | None:
        """The series as a polynomial if it is one, else None."""
        n = self.normalized()
        return n.numerator if n.denom == 0 else None

    @property
    def dimension(self) -> int:
        """Pole order at z = 1 (the Krull dimension for a Hilbert series)."""
        n = self.normalized()
        return n.denom if not n.is_zero else 0

    def __str__(self):
        num = format_numerator(self.numerator)
        if self.denom == 0:
            return num
        den = "(1-z)" if self.denom == 1 else f"(1-z)^{self.denom}"
        if len([c for c in self.numerator if c]) > 1:
            num = f"({num})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalSeries({list(self.numerator)}, {self.denom})"

    def to_json(self) -> dict:
        return {"numerator": list(self.numerator), "denomExponent": self.denom}


def splice(low: RationalSeries, high: RationalSeries, threshold: int) -> RationalSeries:
    """Coefficients of ``low`` below ``threshold`` followed by those of ``high``."""
    head = padd(low.truncation(threshold), pneg(high.truncation(threshold)))
    return high + RationalSeries.polynomial(head)


# --- coefficients of the associated polynomial --------------------------------

def j_vector(series: RationalSeries, d: int) -> tuple:
    """(j_0, .., j_d) with P(t) = sum_i (-1)^i j_i C(t+d-i, d-i).

    ``series`` is the cumulative series h(z)/(1-z)^{r+1}; the numerator is
    first rewritten over (1-z)^{d+1}.
    """
    if series.is_zero:
        return (0,) * (d + 1)
    s = series.normalized()
    if s.denom > d + 1:
        raise ValueError(f"pole order {s.denom} exceeds d+1 = {d + 1}")
    h = s.with_denom(d + 1).numerator
    return tuple(sum(comb(k, i) * c for k, c in enumerate(h)) for i in range(d + 1))


def hilbert_polynomial_value(j: Sequence[int], t: int) -> int:
    d = len(j) - 1
    return sum((-1) ** i * j[i] * comb(t + d - i, d - i) for i in range(d + 1))


def agreement_start(series: RationalSeries, j: Sequence[int], horizon: int) -> int:
    """First t from which the series coefficients equal the polynomial, checked to ``horizon``."""
    vals = series.expand(horizon + 1)
    start = horizon + 1
    for t in range(horizon, -1, -1):
        if vals[t] != hilbert_polynomial_value(j, t):
            break
        start = t
    return start


# --- fitting from finitely many values ----------------------------------------

@dataclass(frozen=True)
class SeriesFit:
    series: RationalSeries | None
    stable: bool
    start: int | None  # first t where the fitted polynomial matches
    window: tuple | None


def differences(values: Sequence[int], order: int) -> list[int]:
    v = list(values)
    for _ in range(order):
        v = [b - a for a, b in zip(v, v[1:])]
    return v


def fit_cumulative(values: Sequence[int], d: int, window: int = 3) -> SeriesFit:
    """Fit sum_t values[t] z^t as N(z)/(1-z)^{d+1} from finitely many terms.

    Stable means the d-th differences are constant over the last ``window``
    entries; the polynomial through the tail is then extended to whatever
    length the numerator needs.
    """
    T = len(values) - 1
    diffs = differences(values, d)
    if len(diffs) < window or len(set(diffs[-window:])) != 1:
        return SeriesFit(None, False, None, None)
    # polynomial of degree <= d through the last d+1 points, via Newton forward form
    base = T - d
    pts = list(values[base:])

    def poly(t):
        # Lagrange on integer nodes base..T, exact
        total = Fraction(0)
        for i, y in enumerate(pts):
            xi = base + i
            term = Fraction(y)
            for j in range(len(pts)):
                if j != i:
                    xj = base + j
                    term *= Fraction(t - xj, xi - xj)
            total += term
        return total

    start = T + 1
    for t in range(T, -1, -1):
        if poly(t) != values[t]:
            break
        start = t
    if T - start + 1 < max(window, d + 1):
        return SeriesFit(None, False, None, None)
    horizon = max(T, start + d)
    ext = list(values) + [int(poly(t)) for t in range(T + 1, horizon + 1)]
    num = pmul(ext, one_minus_z_pow(d + 1))[: horizon + 1]
    fitted = RationalSeries(num, d + 1).normalized()
    return SeriesFit(fitted, True, start, (max(start, T - window + 1), T))
