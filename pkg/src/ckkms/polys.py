"""Dense univariate polynomial helpers over exact rationals.

Coefficient lists are constant-first: coeffs[k] is the coefficient of x^k.
The zero polynomial is the empty list.  These routines back the algebraic
scalar type (root isolation via Sturm chains) and the spectral solvers
(characteristic and determinant polynomials).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Q = Fraction
Poly = list  # list[Fraction | int], constant-first


def trim(p: Poly) -> Poly:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def degree(p: Poly) -> int:
    p = trim(p)
    return len(p) - 1 if p else -1


def eval_at(p: Poly, x: Fraction) -> Fraction:
    acc = Q(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def neg(p: Poly) -> Poly:
    return [-c for c in p]


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def scale(p: Poly, c) -> Poly:
    return trim([a * c for a in p])


def divmod_exact(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Polynomial long division over the rationals."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = [Q(c) for c in trim(p)]
    quot = [Q(0)] * max(0, len(rem) - len(q) + 1)
    lead = Q(q[-1])
    while len(rem) >= len(q):
        factor = rem[-1] / lead
        shift = len(rem) - len(q)
        quot[shift] = factor
        for i, c in enumerate(q):
            rem[shift + i] -= factor * c
        rem = trim(rem)
        if not rem:
            break
    return trim(quot), rem


def div_exact(p: Poly, q: Poly) -> Poly:
    quot, rem = divmod_exact(p, q)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return quot


def derivative(p: Poly) -> Poly:
    return trim([k * p[k] for k in range(1, len(p))])


def content_primitive(p: Poly) -> tuple[Fraction, Poly]:
    """Write p = c * q with q primitive integer coefficients, positive leading."""
    p = trim(p)
    if not p:
        return Q(0), []
    fracs = [Q(c) for c in p]
    den = 1
    for c in fracs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fracs]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    ints = [c // g for c in ints]
    sign = 1
    if ints[-1] < 0:
        ints = [-c for c in ints]
        sign = -1
    return Q(sign * g, den), ints


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over the rationals."""
    a, b = trim(p), trim(q)
    while b:
        _, r = divmod_exact(a, b)
        a, b = b, r
    if not a:
        return []
    lead = Q(a[-1])
    return [Q(c) / lead for c in a]


def squarefree_part(p: Poly) -> Poly:
    """Primitive integer polynomial with the same distinct roots as p."""
    p = trim(p)
    if degree(p) <= 0:
        return p
    g = poly_gcd(p, derivative(p))
    if degree(g) <= 0:
        _, prim = content_primitive(p)
        return prim
    _, prim = content_primitive(div_exact(p, g))
    return prim


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [trim(p), derivative(p)]
    while chain[-1]:
        _, r = divmod_exact(chain[-2], chain[-1])
        chain.append(neg(r))
    chain.pop()
    return chain


def _sign_variations(chain: list[Poly], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = eval_at(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Poly, lo: Fraction, hi: Fraction, chain: list[Poly] | None = None) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    sf = squarefree_part(p)
    if degree(sf) <= 0:
        return 0
    if chain is None:
        chain = sturm_chain(sf)
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def rational_roots_in(p: Poly, lo: Fraction, hi: Fraction) -> list[Fraction]:
    """All rational roots of p inside [lo, hi], via the rational root test."""
    _, ints = content_primitive(p)
    if not ints:
        return []
    # factor out powers of x
    shift = 0
    while ints and ints[0] == 0:
        ints = ints[1:]
        shift += 1
    roots = set()
    if shift and lo <= 0 <= hi:
        roots.add(Q(0))
    if ints and len(ints) > 1:
        a0, an = abs(ints[0]), abs(ints[-1])
        for pnum in _divisors(a0):
            for qden in _divisors(an):
                for cand in (Q(pnum, qden), Q(-pnum, qden)):
                    if lo <= cand <= hi and eval_at(ints, cand) == 0:
                        roots.add(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def isolate_smallest_root(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Isolating interval (a, b) for the smallest root of p in (lo, hi).

    Returns endpoints with p(a) != 0, p(b) != 0, exactly one distinct root
    inside.  Raises if p has no root there.
    """
    sf = squarefree_part(p)
    chain = sturm_chain(sf)
    lo, hi = Q(lo), Q(hi)
    # nudge endpoints off roots
    while eval_at(sf, lo) == 0:
        lo += (hi - lo) / 1024
    while eval_at(sf, hi) == 0:
        hi -= (hi - lo) / 1024
    total = _sign_variations(chain, lo) - _sign_variations(chain, hi)
    if total <= 0:
        raise ArithmeticError("no root in the requested interval")
    while True:
        mid = (lo + hi) / 2
        if eval_at(sf, mid) == 0:
            mid += (hi - lo) / 1024  # rational root at midpoint; shift the cut
        left = _sign_variations(chain, lo) - _sign_variations(chain, mid)
        if left >= 1:
            hi = mid
            if left == 1:
                break
        else:
            lo = mid
    # now exactly one root in (lo, hi]; shrink until the sign changes strictly
    while eval_at(sf, lo) * eval_at(sf, hi) > 0 or (hi - lo) > Q(1, 4):
        mid = (lo + hi) / 2
        if eval_at(sf, mid) == 0:
            mid += (hi - lo) / 1024
        if _sign_variations(chain, lo) - _sign_variations(chain, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def refine_root(p: Poly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect a sign-change bracket of p down to the requested width."""
    flo = eval_at(p, lo)
    fhi = eval_at(p, hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    if (flo > 0) == (fhi > 0):
        raise ArithmeticError("bracket endpoints must straddle a sign change")
    while hi - lo > width:
        mid = (lo + hi) / 2
        fmid = eval_at(p, mid)
        if fmid == 0:
            return mid, mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return lo, hi


def charpoly(rows: list[list[int]]) -> Poly:
    """Monic characteristic polynomial det(xI - A), integer coefficients."""
    n = len(rows)
    a = [[Q(v) for v in row] for row in rows]
    # Faddeev-LeVerrier: M_0 = I, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I
    coeffs = [Q(0)] * (n + 1)
    coeffs[n] = Q(1)
    m = [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if k > 1:
            am = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
            for i in range(n):
                am[i][i] += coeffs[n - k + 1]
            m = am
        trace = sum(sum(a[i][t] * m[t][i] for t in range(n)) for i in range(n))
        coeffs[n - k] = -trace / k
    out = []
    for c in coeffs:
        assert c.denominator == 1
        out.append(int(c))
    return trim(out)


def polymat_det(mat: list[list[Poly]]) -> Poly:
    """Determinant of a matrix of integer polynomials (Bareiss elimination)."""
    n = len(mat)
    m = [[trim(list(p)) for p in row] for row in mat]
    sign = 1
    prev = [1]  # previous pivot, divides exactly at each step
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return []  # whole column vanishes below row k: singular
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j]))
                m[i][j] = div_exact(num, prev) if num else []
            m[i][k] = []
        prev = m[k][k] if m[k][k] else [1]
    det = m[n - 1][n - 1]
    return scale(det, sign) if sign < 0 else det
