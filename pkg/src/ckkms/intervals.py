"""Closed intervals with rational endpoints, plus rigorous exp/log/sqrt enclosures.

All endpoints are Fractions, so +, -, * and integer powers are exact; the
transcendental enclosures use truncated series with explicit remainder
bounds, rounded outward.  Every function here returns an interval that is
guaranteed to contain the true value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from math import isqrt

Q = Fraction


def _to_q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # floats are exact dyadic rationals
    raise TypeError(f"cannot interpret {x!r} as a rational endpoint")


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _to_q(self.lo))
        object.__setattr__(self, "hi", _to_q(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x) -> "Interval":
        x = _to_q(x)
        return Interval(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        x = _to_q(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other) -> "Interval":
        other = other if isinstance(other, Interval) else Interval.point(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        other = other if isinstance(other, Interval) else Interval.point(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> "Interval":
        return Interval.point(other) - self

    def __mul__(self, other) -> "Interval":
        other = other if isinstance(other, Interval) else Interval.point(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError(f"interval [{self.lo}, {self.hi}] contains 0")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Interval":
        other = other if isinstance(other, Interval) else Interval.point(other)
        return self * other.reciprocal()

    def __pow__(self, k: int) -> "Interval":
        if not isinstance(k, int):
            raise TypeError("interval powers must have integer exponents")
        if k < 0:
            return (self ** (-k)).reciprocal()
        if k == 0:
            return Interval.point(1)
        if k % 2 == 1 or self.lo >= 0:
            return Interval(self.lo**k, self.hi**k)
        if self.hi <= 0:
            return Interval(self.hi**k, self.lo**k)
        return Interval(Q(0), max(self.lo**k, self.hi**k))

    def abs_sup(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def distance_sup(self, other: "Interval") -> Fraction:
        """Largest possible |x - y| with x in self, y in other."""
        return max(abs(self.hi - other.lo), abs(other.hi - self.lo))

    def __repr__(self) -> str:
        return f"Interval({self.lo}, {self.hi})"


def sqrt_upper(x: Fraction) -> Fraction:
    """A rational upper bound on sqrt(x) for x >= 0."""
    x = _to_q(x)
    if x < 0:
        raise DomainError("sqrt of a negative rational")
    if x == 0:
        return Q(0)
    # sqrt(p/q) = sqrt(p*q)/q <= (isqrt(p*q)+1)/q
    p, q = x.numerator, x.denominator
    return Q(isqrt(p * q) + 1, q)



def _exp_series_01(t: Fraction, terms: int) -> Interval:
    """Enclosure of e^t for rational t in [0, 1]."""
    assert 0 <= t <= 1
    total = Q(0)
    term = Q(1)
    for k in range(terms):
        total += term
        term = term * t / (k + 1)
    # remaining tail: sum_{k>=terms} t^k/k! <= 2 * t^terms/terms!  (t <= 1)
    return Interval(total, total + 2 * term)


_E_CACHE: dict[int, Interval] = {}


def _e_enclosure(terms: int = 20) -> Interval:
    enc = _E_CACHE.get(terms)
    if enc is None:
        enc = _exp_series_01(Q(1), terms)
        _E_CACHE[terms] = enc
    return enc


# Arguments produced by iterated root refinement carry denominators with
# thousands of digits; running the power series on them is quadratically
# expensive.  Snapping the fractional part down to this grid keeps the series
# arithmetic small; e^f <= e^f0 * (1 + 2/SNAP) supplies the outward slack.
_EXP_SNAP = 2**96


def exp_interval_point(t: Fraction, precision: Fraction = Q(1, 10**15)) -> Interval:
    """Rigorous enclosure of e^t for a single rational t."""
    t = _to_q(t)
    precision = _to_q(precision)
    if t < 0:
        return exp_interval_point(-t, precision / 4).reciprocal()
    n = int(t)  # floor for t >= 0
    f = t - n
    slack = Q(0)
    if f.denominator > _EXP_SNAP and precision >= Q(16, _EXP_SNAP):
        f = Q((f.numerator * _EXP_SNAP) // f.denominator, _EXP_SNAP)
        slack = Q(2, _EXP_SNAP)
    terms = 12
    while True:
        enc = _exp_series_01(f, terms)
        if slack:
            enc = Interval(enc.lo, enc.hi * (1 + slack))
        if n:
            e_enc = _e_enclosure(terms + 8)
            enc = enc * e_enc**n
        if enc.width <= precision:
            return enc
        terms += 8
        if terms > 600:
            # width is limited by the magnitude of e^t itself; return best
            return enc


def exp_interval(t: Interval, precision: Fraction = Q(1, 10**15)) -> Interval:
    """Enclosure of {e^x : x in t}; exp is monotone so endpoints suffice."""
    lo = exp_interval_point(t.lo, precision)
    hi = exp_interval_point(t.hi, precision)
    return Interval(lo.lo, hi.hi)


_LN2_CACHE: dict[int, Interval] = {}


def _atanh_series(u: Fraction, terms: int) -> Interval:
    """Enclosure of atanh(u) = sum u^(2k+1)/(2k+1) for |u| < 1."""
    total = Q(0)
    power = u
    u2 = u * u
    for k in range(terms):
        total += power / (2 * k + 1)
        power *= u2
    # tail bound: |sum_{k>=terms}| <= |u|^(2*terms+1) / ((2*terms+1)(1-u^2))
    bound = abs(power) / ((2 * terms + 1) * (1 - u2))
    return Interval(total - bound, total + bound)


def _ln2_enclosure(terms: int) -> Interval:
    if terms not in _LN2_CACHE:
        _LN2_CACHE[terms] = _atanh_series(Q(1, 3), terms) * 2
    return _LN2_CACHE[terms]


def log_interval_point(x: Fraction, precision: Fraction = Q(1, 10**15)) -> Interval:
    """Rigorous enclosure of ln(x) for a positive rational x."""
    x = _to_q(x)
    precision = _to_q(precision)
    if x <= 0:
        raise DomainError("log of a non-positive rational")
    # scale x into [2/3, 4/3] by powers of 2, then ln(x) = ln(m) + k ln 2
    k = 0
    m = x
    while m > Q(4, 3):
        m /= 2
        k += 1
    while m < Q(2, 3):
        m *= 2
        k -= 1
    u = (m - 1) / (m + 1)  # |u| <= 1/5 on [2/3, 4/3]... actually <= 1/7 and 1/5
    terms = 10
    while True:
        enc = _atanh_series(u, terms) * 2
        if k:
            enc = enc + _ln2_enclosure(terms + 20) * k
        if enc.width <= precision:
            return enc
        terms += 10
        if terms > 500:
            return enc


def log_interval(x: Interval, precision: Fraction = Q(1, 10**15)) -> Interval:
    """Enclosure of {ln t : t in x} for x with positive lower endpoint."""
    lo = log_interval_point(x.lo, precision)
    hi = log_interval_point(x.hi, precision)
    return Interval(lo.lo, hi.hi)
