"""Exact scalar values: rationals, algebraic numbers, their powers and products.

The tower has six shapes.  Rat wraps a Fraction.  Alg is a real algebraic
number given by an integer polynomial (constant-first) together with an
isolating interval containing exactly one root, across which the squarefree
part changes sign.  Power and Product are exact multiplicative combinations
(Product carries a rational coefficient and algebraic factors with nonzero
integer exponents).  Flt is a float, always treated as heuristic.  Enc is a
value known only through a rigorous rational-endpoint enclosure.

Construction goes through make_algebraic / make_power / mul, which normalize:
rational roots collapse to Rat, x^k that is congruent to a constant modulo
the defining polynomial collapses to a rational power, empty products unwrap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import polys
from .errors import DomainError, InvalidScalarError
from .intervals import Interval, Q

# ---------------------------------------------------------------------------
# scalar shapes


class Scalar:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Rat(Scalar):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True, slots=True)
class Alg(Scalar):
    poly: tuple  # int coefficients, constant-first, squarefree primitive
    lo: Fraction
    hi: Fraction


@dataclass(frozen=True, slots=True)
class Power(Scalar):
    base: Alg
    exp: int  # >= 1


@dataclass(frozen=True, slots=True)
class Product(Scalar):
    rational: Fraction
    factors: tuple  # tuple[(Alg, int)], exponents nonzero, bases distinct


@dataclass(frozen=True, slots=True)
class Flt(Scalar):
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise InvalidScalarError(f"non-finite float scalar {self.value!r}")


@dataclass(frozen=True, slots=True)
class Enc(Scalar):
    interval: Interval


ONE = Rat(Fraction(1))
ZERO = Rat(Fraction(0))


def is_exact(s: Scalar) -> bool:
    return isinstance(s, (Rat, Alg, Power, Product))


# ---------------------------------------------------------------------------
# construction


def make_algebraic(poly, lo, hi) -> Scalar:
    """Algebraic number from an integer polynomial and an isolating interval.

    Collapses to Rat when the isolated root is rational.  Raises
    InvalidScalarError unless the interval isolates exactly one root with a
    sign change of the squarefree part.
    """
    lo, hi = Q(lo), Q(hi)
    sf = polys.squarefree_part(list(poly))
    if polys.degree(sf) < 1:
        raise InvalidScalarError("polynomial has no roots to isolate")
    for r in polys.rational_roots_in(sf, lo, hi):
        if lo <= r <= hi:
            # exactly-one-root check still applies
            if polys.count_roots(sf, lo, hi) > 1 and not (lo == hi == r):
                raise InvalidScalarError("interval does not isolate a single root")
            return Rat(r)
    flo, fhi = polys.eval_at(sf, lo), polys.eval_at(sf, hi)
    if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
        raise InvalidScalarError("interval endpoints must straddle a sign change")
    if polys.count_roots(sf, lo, hi) != 1:
        raise InvalidScalarError("interval does not isolate a single root")
    return Alg(tuple(sf), lo, hi)


def _alg_power_collapse(base: Alg, k: int) -> Fraction | None:
    """If x^k is a constant c modulo the defining polynomial, every root of
    the polynomial satisfies x^k = c; return c, else None."""
    p = [Q(c) for c in base.poly]
    rem = [Q(0), Q(1)]  # x
    out = [Q(1)]
    e = k
    while e:
        if e & 1:
            out = polys.divmod_exact(polys.mul(out, rem), p)[1]
        rem = polys.divmod_exact(polys.mul(rem, rem), p)[1]
        e >>= 1
    if polys.degree(out) <= 0:
        return out[0] if out else Q(0)
    return None


def make_power(base: Scalar, exp: int) -> Scalar:
    if exp == 0:
        return ONE
    if isinstance(base, Rat):
        return Rat(base.value**exp)
    if isinstance(base, Flt):
        return Flt(base.value**exp)
    if isinstance(base, Power):
        return make_power(base.base, base.exp * exp)
    if isinstance(base, Product):
        return mul(Rat(base.rational**exp), *(make_power(b, e * exp) for b, e in base.factors))
    if isinstance(base, Enc):
        return Enc(base.interval**exp)
    assert isinstance(base, Alg)
    c = _alg_power_collapse(base, abs(exp))
    if c is not None:
        return Rat(c**1 if exp > 0 else 1 / c)
    if exp == 1:
        return base
    if exp > 1:
        return Power(base, exp)
    return Product(Q(1), ((base, exp),))


# ---------------------------------------------------------------------------
# enclosures

_ALG_CACHE: dict[tuple, tuple[Fraction, Fraction]] = {}


def _alg_interval(a: Alg, width: Fraction) -> Interval:
    key = (a.poly, a.lo, a.hi)
    lo, hi = _ALG_CACHE.get(key, (a.lo, a.hi))
    if hi - lo > width:
        lo, hi = polys.refine_root(list(a.poly), lo, hi, width)
        _ALG_CACHE[key] = (lo, hi)
    return Interval(lo, hi)


def refine(s: Scalar, precision) -> Interval:
    """Rational-endpoint enclosure of width at most `precision` where the
    representation permits; Enc returns its fixed interval."""
    precision = Q(precision)
    if precision <= 0:
        raise DomainError("precision must be positive")
    if isinstance(s, Rat):
        return Interval.point(s.value)
    if isinstance(s, Flt):
        return Interval.point(Fraction(s.value))
    if isinstance(s, Enc):
        return s.interval
    if isinstance(s, Alg):
        return _alg_interval(s, precision)
    if isinstance(s, Power):
        return _power_interval(s.base, s.exp, precision)
    if isinstance(s, Product):
        iv = Interval.point(s.rational)
        sub = precision
        while True:
            out = Interval.point(s.rational)
            for b, e in s.factors:
                out = out * _power_interval(b, e, sub)
            if out.width <= precision:
                return out
            sub /= 16
            if sub < Q(1, 10**400):
                return out
    raise TypeError(f"not a scalar: {s!r}")


def _power_interval(base: Alg, exp: int, precision: Fraction) -> Interval:
    sub = precision
    while True:
        biv = _alg_interval(base, sub)
        if exp < 0 and biv.lo <= 0 <= biv.hi:
            sub /= 16
            continue
        out = biv**exp
        if out.width <= precision:
            return out
        sub /= 16
        if sub < Q(1, 10**400):
            return out


def interval_of(s: Scalar, precision=Q(1, 10**15)) -> Interval:
    return refine(s, precision)


def to_float(s: Scalar) -> float:
    if isinstance(s, Rat):
        return float(s.value)
    if isinstance(s, Flt):
        return s.value
    iv = refine(s, Q(1, 10**17))
    return float(iv.mid)


def to_fraction(s: Scalar) -> Fraction | None:
    if isinstance(s, Rat):
        return s.value
    return None


# ---------------------------------------------------------------------------
# arithmetic

def _as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Rat(Fraction(x))
    if isinstance(x, float):
        return Flt(x)
    raise TypeError(f"cannot coerce {x!r} to a scalar")


def _factors_of(s: Scalar) -> tuple[Fraction, tuple]:
    if isinstance(s, Rat):
        return s.value, ()
    if isinstance(s, Alg):
        return Q(1), ((s, 1),)
    if isinstance(s, Power):
        return Q(1), ((s.base, s.exp),)
    if isinstance(s, Product):
        return s.rational, s.factors
    raise TypeError


def _build_product(rational: Fraction, factors: dict) -> Scalar:
    live = {b: e for b, e in factors.items() if e != 0}
    if rational == 0:
        return ZERO
    # collapse any factor whose power is congruent to a constant
    for b in list(live):
        c = _alg_power_collapse(b, abs(live[b]))
        if c is not None:
            rational *= c if live[b] > 0 else 1 / c
            del live[b]
    if not live:
        return Rat(rational)
    items = tuple(sorted(live.items(), key=lambda it: (it[0].poly, it[0].lo, it[0].hi)))
    if rational == 1 and len(items) == 1 and items[0][1] >= 1:
        b, e = items[0]
        return b if e == 1 else Power(b, e)
    return Product(rational, items)


def mul(*values) -> Scalar:
    scalars = [_as_scalar(v) for v in values]
    if any(isinstance(s, Enc) for s in scalars):
        out = Interval.point(1)
        for s in scalars:
            out = out * refine(s, Q(1, 10**18))
        return Enc(out)
    if any(isinstance(s, Flt) for s in scalars):
        out = 1.0
        for s in scalars:
            out *= to_float(s)
        return Flt(out)
    rational = Q(1)
    factors: dict = {}
    for s in scalars:
        r, fs = _factors_of(s)
        rational *= r
        for b, e in fs:
            factors[b] = factors.get(b, 0) + e
    return _build_product(rational, factors)


def inv(s: Scalar) -> Scalar:
    s = _as_scalar(s)
    if isinstance(s, Rat):
        if s.value == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Rat(1 / s.value)
    if isinstance(s, Flt):
        return Flt(1.0 / s.value)
    if isinstance(s, Enc):
        return Enc(s.interval.reciprocal())
    r, fs = _factors_of(s)
    return _build_product(1 / r, {b: -e for b, e in fs})


def div(a: Scalar, b: Scalar) -> Scalar:
    return mul(a, inv(b))


def add(*values) -> Scalar:
    scalars = [_as_scalar(v) for v in values]
    nonzero = [s for s in scalars if not (isinstance(s, Rat) and s.value == 0)]
    if not nonzero:
        return ZERO
    if len(nonzero) == 1:
        return nonzero[0]
    if all(isinstance(s, Rat) for s in nonzero):
        return Rat(sum(s.value for s in nonzero))
    if any(isinstance(s, Flt) for s in nonzero) and not any(
        isinstance(s, Enc) for s in nonzero
    ):
        return Flt(sum(to_float(s) for s in nonzero))
    out = Interval.point(0)
    for s in nonzero:
        out = out + refine(s, Q(1, 10**18))
    return Enc(out)


def sub_scalar(a, b) -> Scalar:
    return add(a, mul(Rat(Q(-1)), b))


# ---------------------------------------------------------------------------
# comparisons

def compare_rational(s: Scalar, c: Fraction, max_depth: int = 600) -> int:
    """Sign of s - c; exact for exact scalars, raises if undecidable."""
    c = Q(c)
    if isinstance(s, Rat):
        return (s.value > c) - (s.value < c)
    if isinstance(s, Flt):
        return (s.value > c) - (s.value < c)
    if isinstance(s, Alg) and s.lo <= c <= s.hi and polys.eval_at(list(s.poly), c) == 0:
        return 0
    width = Q(1, 16)
    for _ in range(max_depth):
        iv = refine(s, width)
        if iv.lo > c:
            return 1
        if iv.hi < c:
            return -1
        width /= 16
    raise InvalidScalarError(f"cannot separate scalar from {c}")


def in_open_unit_interval(s: Scalar) -> bool:
    try:
        return compare_rational(s, Q(0)) > 0 and compare_rational(s, Q(1)) < 0
    except InvalidScalarError:
        return False


def same_value(a: Scalar, b: Scalar, max_depth: int = 60) -> bool:
    """Exact value equality where decidable, else a deep-enclosure criterion."""
    a, b = _as_scalar(a), _as_scalar(b)
    if a == b:
        return True
    if isinstance(a, Rat) and isinstance(b, Rat):
        return a.value == b.value
    if isinstance(a, Rat) or isinstance(b, Rat):
        r, other = (a, b) if isinstance(a, Rat) else (b, a)
        if is_exact(other):
            try:
                return compare_rational(other, r.value) == 0
            except InvalidScalarError:
                return False
    if isinstance(a, Alg) and isinstance(b, Alg):
        g = polys.poly_gcd(list(a.poly), list(b.poly))
        if polys.degree(g) < 1:
            return False
        width = Q(1, 2)
        for _ in range(max_depth):
            ia, ib = refine(a, width), refine(b, width)
            if not ia.intersects(ib):
                return False
            hull = ia.hull(ib)
            if polys.count_roots(g, hull.lo, hull.hi) == 1 and (
                polys.count_roots(list(a.poly), hull.lo, hull.hi) == 1
                and polys.count_roots(list(b.poly), hull.lo, hull.hi) == 1
            ):
                return True
            width /= 16
        return False
    # powers/products: compare by deep refinement
    width = Q(1, 10**40)
    ia, ib = refine(a, width), refine(b, width)
    return ia.intersects(ib) and max(ia.width, ib.width) <= width


def values_close(a: Scalar, b: Scalar, tol) -> bool:
    tol = Q(tol)
    ia = refine(_as_scalar(a), tol / 8)
    ib = refine(_as_scalar(b), tol / 8)
    return ia.distance_sup(ib) <= tol


# ---------------------------------------------------------------------------
# prime-exponent lattices and common bases


@dataclass(frozen=True)
class BaseDecomposition:
    base: Scalar
    exponents: tuple[int, ...]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs are desk-scale)."""
    if n <= 0:
        raise DomainError("factorize expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _exp_vector(v: Fraction) -> dict[int, int]:
    vec = dict(factorize(v.numerator)) if v.numerator != 1 else {}
    for p, e in factorize(v.denominator).items():
        vec[p] = vec.get(p, 0) - e
    return {p: e for p, e in vec.items() if e != 0}


def _parallel_lattice(rows: list[list[int]]) -> tuple[list[int], list[int]] | None:
    """If every row is an integer multiple of one primitive vector, return
    (primitive, multipliers); otherwise None."""
    ref = next((r for r in rows if any(r)), None)
    if ref is None:
        return None
    g = 0
    for e in ref:
        g = gcd(g, abs(e))
    prim = [e // g for e in ref]
    j0 = next(j for j, e in enumerate(prim) if e)
    mults = []
    for row in rows:
        if row[j0] % prim[j0] != 0:
            return None
        k = row[j0] // prim[j0]
        if any(row[j] != k * prim[j] for j in range(len(prim))):
            return None
        mults.append(k)
    return prim, mults


def common_base_rationals(values) -> BaseDecomposition | None:
    """Write rationals in (0,1) as base^k_i with one base in (0,1) and
    positive exponents of gcd 1, when such a base exists."""
    fracs = []
    for v in values:
        f = v.value if isinstance(v, Rat) else Q(v)
        if not (0 < f < 1):
            raise DomainError(f"common-base detection needs values in (0,1), got {f}")
        fracs.append(f)
    vecs = [_exp_vector(f) for f in fracs]
    primes = sorted(set().union(*[set(v) for v in vecs]))
    rows = [[v.get(p, 0) for p in primes] for v in vecs]
    hit = _parallel_lattice(rows)
    if hit is None:
        return None
    prim, mults = hit
    base = Q(1)
    for p, e in zip(primes, prim):
        base *= Q(p) ** e
    if base > 1:
        base = 1 / base
        mults = [-k for k in mults]
    assert all(k >= 1 for k in mults)
    g = 0
    for k in mults:
        g = gcd(g, k)
    return BaseDecomposition(Rat(base**g), tuple(k // g for k in mults))


# ---------------------------------------------------------------------------
# logarithm ratio detection


@dataclass(frozen=True)
class LogRatioVerdict:
    kind: str  # "rational" | "irrational" | "undecided"
    ratio: Fraction | None = None


def _convergents(x: Fraction):
    """Continued-fraction convergents of a positive rational."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    a = x
    while True:
        n = int(a)
        p0, q0, p1, q1 = p1, q1, n * p1 + p0, n * q1 + q0
        yield Fraction(p1, q1)
        frac = a - n
        if frac == 0:
            return
        a = 1 / frac


def log_ratio_rational(x, y, denominator_bound: int = 10**6, tolerance=Q(1, 10**9)) -> LogRatioVerdict:
    """Decide whether log(x)/log(y) is rational for x, y in (0,1).

    Exact for rational inputs via prime-exponent vectors (a verdict of
    "irrational" only arises there).  Other inputs go through float
    continued-fraction convergents and can only yield "rational" or
    "undecided"."""
    tolerance = Q(tolerance)
    sx, sy = _as_scalar(x), _as_scalar(y)
    for s in (sx, sy):
        if is_exact(s) and not in_open_unit_interval(s):
            raise DomainError("log-ratio detection needs values in (0,1)")
    if isinstance(sx, Rat) and isinstance(sy, Rat):
        ex, ey = _exp_vector(sx.value), _exp_vector(sy.value)
        primes = sorted(set(ex) | set(ey))
        vx = [ex.get(p, 0) for p in primes]
        vy = [ey.get(p, 0) for p in primes]
        j0 = next(j for j, e in enumerate(vy) if e)
        t = Fraction(vx[j0], vy[j0])
        if all(Fraction(vx[j]) == t * vy[j] for j in range(len(primes))):
            return LogRatioVerdict("rational", t)
        return LogRatioVerdict("irrational")
    fx, fy = to_float(sx), to_float(sy)
    if not (0.0 < fx < 1.0 and 0.0 < fy < 1.0):
        raise DomainError("log-ratio detection needs values in (0,1)")
    r = math.log(fx) / math.log(fy)
    target = Fraction(r)
    for conv in _convergents(target):
        if conv.denominator > denominator_bound:
            break
        if abs(target - conv) <= tolerance:
            return LogRatioVerdict("rational", conv)
    return LogRatioVerdict("undecided")


# ---------------------------------------------------------------------------
# rendering and JSON forms


def fmt15(x: float) -> str:
    return format(x, ".15g")


def scalar_decimal(s: Scalar) -> str:
    return fmt15(to_float(s))


def scalar_exact_str(s: Scalar) -> str:
    if isinstance(s, Rat):
        return str(s.value)
    if isinstance(s, Alg):
        return f"root({list(s.poly)}, ({s.lo}, {s.hi}))"
    if isinstance(s, Power):
        return f"{scalar_exact_str(s.base)}^{s.exp}"
    if isinstance(s, Product):
        parts = [str(s.rational)] if s.rational != 1 else []
        parts += [f"{scalar_exact_str(b)}^{e}" if e != 1 else scalar_exact_str(b) for b, e in s.factors]
        return " * ".join(parts) if parts else "1"
    if isinstance(s, Flt):
        return fmt15(s.value)
    if isinstance(s, Enc):
        return f"[{s.interval.lo}, {s.interval.hi}]"
    raise TypeError


def scalar_to_json(s: Scalar) -> dict:
    if isinstance(s, Rat):
        return {"type": "rational", "num": s.value.numerator, "den": s.value.denominator}
    if isinstance(s, Alg):
        return {"type": "algebraic", "poly": list(s.poly), "interval": [str(s.lo), str(s.hi)]}
    if isinstance(s, Power):
        return {"type": "power", "base": scalar_to_json(s.base), "exp": s.exp}
    if isinstance(s, Product):
        return {
            "type": "product",
            "rational": {"num": s.rational.numerator, "den": s.rational.denominator},
            "factors": [{"base": scalar_to_json(b), "exp": e} for b, e in s.factors],
        }
    if isinstance(s, Flt):
        return {"type": "float", "value": s.value}
    if isinstance(s, Enc):
        return {"type": "enclosure", "lo": str(s.interval.lo), "hi": str(s.interval.hi)}
    raise TypeError(f"not a scalar: {s!r}")


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, bool):
        raise InvalidScalarError("booleans are not scalars")
    if isinstance(obj, int):
        return Rat(Fraction(obj))
    if isinstance(obj, float):
        return Flt(obj)
    if isinstance(obj, str):
        return Rat(Fraction(obj))
    if not isinstance(obj, dict) or "type" not in obj:
        raise InvalidScalarError(f"malformed scalar JSON: {obj!r}")
    kind = obj["type"]
    if kind == "rational":
        return Rat(Fraction(obj["num"], obj["den"]))
    if kind == "algebraic":
        lo, hi = obj["interval"]
        return make_algebraic(obj["poly"], Fraction(str(lo)), Fraction(str(hi)))
    if kind == "power":
        exp = obj["exp"]
        if not isinstance(exp, int) or exp < 1:
            raise InvalidScalarError("power exponent must be a positive integer")
        return make_power(scalar_from_json(obj["base"]), exp)
    if kind == "product":
        rat = Fraction(obj["rational"]["num"], obj["rational"]["den"])
        out = Rat(rat)
        for f in obj["factors"]:
            out = mul(out, make_power(scalar_from_json(f["base"]), abs(f["exp"])) if f["exp"] > 0
                      else inv(make_power(scalar_from_json(f["base"]), -f["exp"])))
        return out
    if kind == "float":
        return Flt(float(obj["value"]))
    if kind == "enclosure":
        return Enc(Interval(Fraction(str(obj["lo"])), Fraction(str(obj["hi"]))))
    raise InvalidScalarError(f"unknown scalar type {kind!r}")
