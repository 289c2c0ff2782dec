"""Perron-Frobenius data with rigorous two-sided error bounds.

Power iteration runs on the shifted matrix M + I (primitive whenever M is
irreducible, which kills the oscillation of periodic matrices) in exact
rational arithmetic.  Collatz-Wielandt quotients evaluated on the interval
matrix give a certified eigenvalue bracket at every step; the eigenvector
enclosure comes from a Birkhoff projective-metric contraction bound, with
all inequalities rounded outward in rational arithmetic.

The inverse-temperature solver has an exact branch for rational frequency
vectors: with omega_i = m_i / L the parameter entries are powers t^{m_i} of
a root t of det(diag(t^{m_i}) A - I), and t is the smallest root of that
polynomial in (0,1) because below it the spectral radius stays under 1, so
no eigenvalue can reach 1 earlier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from . import polys, scalars
from .errors import (DomainError, MembershipRejected, NumericalFailureError,
                     PreconditionError)
from .intervals import Interval, Q, exp_interval, log_interval_point, sqrt_upper
from .matrix01 import ZeroOneMatrix, _strongly_connected, in_class_cdm
from .scalars import Alg, Enc, Flt, Rat, Scalar

DEFAULT_PRECISION = Q(1, 10**12)
ITERATION_CAP = 10**5
SOLVE_BETA_DEGREE_CAP = 256


@dataclass(frozen=True)
class PFData:
    eigenvalue: Interval
    eigenvector: tuple  # tuple[Interval, ...], entries positive, sums to 1
    iterations: int


@dataclass(frozen=True)
class ParamVector:
    matrix: ZeroOneMatrix
    entries: tuple  # tuple[Scalar, ...], each in (0,1)
    certificate: str  # "exact" | "verified"
    tolerance: Fraction | None = None

    def __post_init__(self):
        if len(self.entries) != self.matrix.n:
            raise DomainError("parameter vector length must match the matrix size")
        if self.certificate not in ("exact", "verified"):
            raise DomainError(f"unknown certificate {self.certificate!r}")


@dataclass(frozen=True)
class FrequencyVector:
    entries: tuple  # tuple[Scalar, ...], positive

    def __post_init__(self):
        entries = tuple(scalars._as_scalar(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        for e in entries:
            if isinstance(e, (Rat, Flt)) and scalars.to_float(e) <= 0:
                raise DomainError("frequencies must be positive")

    def is_rational(self) -> bool:
        return all(isinstance(e, Rat) for e in self.entries)


@dataclass(frozen=True)
class BetaSolution:
    beta: Interval
    param: ParamVector
    mode: str  # "exact" | "heuristic"
    base: Scalar | None = None  # a_i = base^exponents[i] in exact mode
    exponents: tuple | None = None
    scale: Fraction | None = None  # beta = -scale * ln(base)


# ---------------------------------------------------------------------------
# matrix plumbing


def scaled_matrix(a_entries, matrix: ZeroOneMatrix):
    """Row-scaled matrix (diag a) A with Scalar entries."""
    n = matrix.n
    out = []
    for i in range(n):
        ai = scalars._as_scalar(a_entries[i])
        out.append([ai if matrix.rows[i][j] else scalars.ZERO for j in range(n)])
    return out


def _coerce_matrix(m):
    if isinstance(m, ZeroOneMatrix):
        return [[Rat(Q(v)) for v in row] for row in m.rows]
    return [[scalars._as_scalar(v) for v in row] for row in m]


def _is_zero_entry(s: Scalar) -> bool:
    return isinstance(s, Rat) and s.value == 0


def _interval_matrix(entries, width: Fraction):
    """Per-entry enclosures; positive entries are refined until their lower
    endpoint is positive, exact zeros stay zero."""
    n = len(entries)
    lo = [[Q(0)] * n for _ in range(n)]
    hi = [[Q(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            s = entries[i][j]
            if _is_zero_entry(s):
                continue
            w = width
            iv = scalars.refine(s, w)
            while iv.lo <= 0 and not isinstance(s, Enc) and w > Q(1, 10**300):
                w /= 16
                iv = scalars.refine(s, w)
            if iv.lo < 0:
                raise PreconditionError("matrix entries must be nonnegative")
            if iv.lo <= 0:
                raise PreconditionError("cannot certify the sign of a matrix entry")
            lo[i][j], hi[i][j] = iv.lo, iv.hi
    return lo, hi


def _shifted(lo, hi):
    n = len(lo)
    nlo = [[lo[i][j] + (1 if i == j else 0) for j in range(n)] for i in range(n)]
    nhi = [[hi[i][j] + (1 if i == j else 0) for j in range(n)] for i in range(n)]
    nmid = [[(nlo[i][j] + nhi[i][j]) / 2 for j in range(n)] for i in range(n)]
    return nlo, nhi, nmid


def _pattern(entries):
    return tuple(tuple(0 if _is_zero_entry(v) else 1 for v in row) for row in entries)


def _matvec(m, x):
    n = len(x)
    return [sum(m[i][j] * x[j] for j in range(n) if m[i][j]) for i in range(n)]


def _round_vector(x, max_den: int):
    out = []
    for v in x:
        r = v.limit_denominator(max_den)
        out.append(r if r > 0 else v)
    return out


def _floor_bits(x: Fraction, bits: int) -> Fraction:
    scaled = x * (1 << bits)
    return Q(scaled.numerator // scaled.denominator, 1 << bits)


def _ceil_bits(x: Fraction, bits: int) -> Fraction:
    scaled = x * (1 << bits)
    return Q(-((-scaled.numerator) // scaled.denominator), 1 << bits)


def _cw_iterate(nlo, nhi, nmid, x, target: Fraction, cap: int, max_den: int):
    """Collatz-Wielandt bracket refinement for the shifted matrix.

    Returns (bracket_for_unshifted, x, converged, steps).  Every bracket
    contains the true eigenvalue, so successive brackets intersect.
    """
    n = len(x)
    best = None
    stall = 0
    steps = 0
    while steps < cap:
        steps += 1
        ylo = _matvec(nlo, x)
        yhi = _matvec(nhi, x)
        cw = Interval(min(ylo[i] / x[i] for i in range(n)) - 1,
                      max(yhi[i] / x[i] for i in range(n)) - 1)
        if best is None:
            best = cw
        else:
            merged = Interval(max(best.lo, cw.lo), min(best.hi, cw.hi))
            if merged.width >= best.width * Q(99, 100):
                stall += 1
            else:
                stall = 0
            best = merged
        if best.width <= target:
            return best, x, True, steps
        if stall >= 15:
            return best, x, False, steps
        y = _matvec(nmid, x)
        total = sum(y)
        x = _round_vector([v / total for v in y], max_den)
    return best, x, False, steps


# ---------------------------------------------------------------------------
# pf_data


def pf_data(matrix, precision=DEFAULT_PRECISION, iteration_cap: int = ITERATION_CAP,
            compute_vector: bool = True) -> PFData:
    """Certified Perron eigenvalue bracket (width <= precision) and a
    positive eigenvector enclosure normalized to sum 1.

    `matrix` is a ZeroOneMatrix or a square array of nonnegative Scalars
    whose zero pattern is irreducible.  `compute_vector=False` skips the
    eigenvector enclosure (the eigenvector field is then empty).
    """
    precision = Q(precision)
    if precision <= 0:
        raise DomainError("precision must be positive")
    entries = _coerce_matrix(matrix)
    n = len(entries)
    if n < 2:
        raise DomainError("matrices must be at least 2x2")
    if not _strongly_connected(_pattern(entries)):
        raise PreconditionError("matrix is not irreducible")
    refinable = not any(isinstance(entries[i][j], Enc) for i in range(n) for j in range(n))

    bits = max(64, precision.denominator.bit_length() + 48)
    max_den = 1 << bits
    entry_width = precision / (8 * n)
    x = [Q(1, n)] * n
    total_steps = 0
    while True:
        nlo, nhi, nmid = _shifted(*_interval_matrix(entries, entry_width))
        bracket, x, ok, steps = _cw_iterate(
            nlo, nhi, nmid, x, precision, iteration_cap - total_steps, max_den)
        total_steps += steps
        if ok:
            break
        if total_steps >= iteration_cap:
            raise NumericalFailureError(
                f"power iteration did not converge within {iteration_cap} steps")
        if not refinable:
            raise NumericalFailureError(
                "eigenvalue bracket is limited by fixed-width enclosure entries")
        entry_width /= 64

    if not compute_vector:
        return PFData(bracket, (), total_steps)
    vec_width = entry_width if not refinable else min(entry_width, precision / (64 * n))
    if refinable:
        nlo, nhi, nmid = _shifted(*_interval_matrix(entries, vec_width))
    vector = _eigenvector_enclosure(
        nlo, nhi, nmid, x, precision, iteration_cap, max_den, refinable,
        lambda w: _shifted(*_interval_matrix(entries, w)), vec_width, bits + 16)
    return PFData(bracket, vector, total_steps)


def _mat_mul_iv(alo, ahi, blo, bhi, bits: int):
    # products are rounded outward to a fixed denominator grid so that
    # repeated powers do not blow up the rational arithmetic
    n = len(alo)
    clo = [[Q(0)] * n for _ in range(n)]
    chi = [[Q(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            s_lo = Q(0)
            s_hi = Q(0)
            for k in range(n):
                s_lo += alo[i][k] * blo[k][j]
                s_hi += ahi[i][k] * bhi[k][j]
            clo[i][j], chi[i][j] = _floor_bits(s_lo, bits), _ceil_bits(s_hi, bits)
    return clo, chi


def _eigenvector_enclosure(nlo, nhi, nmid, x, precision, cap, max_den,
                           refinable, rebuild, width, bits):
    """Birkhoff bound: with B = (M+I)^(n-1) entrywise positive and upper
    contraction ratio kappa, the projective distance from the iterate x to
    the true eigenvector is at most d(x, Bx)/(1-kappa); normalization to
    sum 1 turns that into the componentwise enclosure [x_i/F, x_i F]."""
    n = len(x)

    def positive_power():
        blo, bhi = nlo, nhi
        for _ in range(n - 2):
            blo, bhi = _mat_mul_iv(blo, bhi, nlo, nhi, bits)
        guard = 0
        while any(blo[i][j] <= 0 for i in range(n) for j in range(n)):
            blo, bhi = _mat_mul_iv(blo, bhi, nlo, nhi, bits)
            guard += 1
            if guard > 2 * n:
                raise NumericalFailureError("failed to reach a positive matrix power")
        return blo, bhi

    blo, bhi = positive_power()
    # cheap upper bound on the cross-ratio sup (B_ik B_jl)/(B_jk B_il); a
    # loose kappa only costs extra iterations, never correctness
    top = max(v for row in bhi for v in row)
    bot = min(v for row in blo for v in row)
    phi = (top * top) / (bot * bot)
    root = sqrt_upper(phi)
    kappa = (root - 1) / (root + 1)
    denom = 1 - kappa
    best_u = None
    stall = 0
    steps = 0
    while True:
        steps += 1
        if steps > cap:
            break
        wlo = _matvec(blo, x)
        whi = _matvec(bhi, x)
        ratio = max((x[i] * whi[j]) / (x[j] * wlo[i])
                    for i in range(n) for j in range(n))
        u = (ratio - 1) / denom
        if u <= precision and u <= 1:
            break
        if best_u is not None and u >= best_u * Q(99, 100):
            stall += 1
        else:
            stall = 0
        best_u = u if best_u is None else min(best_u, u)
        if stall >= 10:
            if not refinable:
                break
            width /= 64
            nlo2, nhi2, nmid2 = rebuild(width)
            nlo, nhi, nmid = nlo2, nhi2, nmid2
            blo, bhi = positive_power()
            stall = 0
            continue
        y = _matvec(nmid, x)
        total = sum(y)
        x = _round_vector([v / total for v in y], max_den)
    u = min(u, Q(1))
    factor = 1 + u + u * u  # >= e^u for u in [0, 1]
    return tuple(Interval(xi / factor, xi * factor) for xi in x)


# ---------------------------------------------------------------------------
# spectral membership and canonical parameters


def in_lambda(matrix: ZeroOneMatrix, a_entries, tolerance=Q(1, 10**9)) -> ParamVector:
    """Accept a parameter vector when the spectral radius of (diag a) A is 1
    within `tolerance`; rejection raises MembershipRejected carrying the
    computed enclosure."""
    tolerance = Q(tolerance)
    entries = tuple(scalars._as_scalar(v) for v in a_entries)
    if len(entries) != matrix.n:
        raise DomainError("parameter vector length must match the matrix size")
    for s in entries:
        if not scalars.in_open_unit_interval(s):
            raise DomainError("parameter entries must lie strictly between 0 and 1")
    if matrix.is_full() and all(isinstance(s, Rat) for s in entries):
        total = sum(s.value for s in entries)
        enclosure = Interval.point(total)
        if abs(total - 1) <= tolerance:
            cert = "exact" if total == 1 else "verified"
            return ParamVector(matrix, entries, cert, tolerance)
        raise MembershipRejected(
            f"spectral radius is exactly {total}, not 1", enclosure)
    data = pf_data(scaled_matrix(entries, matrix), precision=tolerance / 4,
                   compute_vector=False)
    band = Interval(1 - tolerance, 1 + tolerance)
    if data.eigenvalue.intersects(band):
        return ParamVector(matrix, entries, "verified", tolerance)
    raise MembershipRejected(
        f"spectral radius enclosure [{data.eigenvalue.lo}, {data.eigenvalue.hi}] "
        "does not meet 1", data.eigenvalue)


def pf_eigenvalue_scalar(matrix: ZeroOneMatrix, precision=DEFAULT_PRECISION) -> Scalar:
    """The spectral radius of a 0-1 matrix as an exact algebraic scalar."""
    char = polys.charpoly([list(r) for r in matrix.rows])
    sf = polys.squarefree_part(char)
    prec = min(Q(precision), Q(1, 10**6))
    for _ in range(12):
        data = pf_data(matrix, precision=prec)
        lo, hi = data.eigenvalue.lo, data.eigenvalue.hi
        pad = (hi - lo) or prec
        lo, hi = lo - pad / 7, hi + pad / 7
        if polys.eval_at(sf, lo) != 0 and polys.eval_at(sf, hi) != 0 and \
                polys.count_roots(sf, lo, hi) == 1:
            return scalars.make_algebraic(char, lo, hi)
        prec /= 256
    raise NumericalFailureError("could not isolate the spectral radius")


def reciprocal_scalar(s: Scalar) -> Scalar:
    """1/s, keeping algebraic numbers algebraic via coefficient reversal."""
    if isinstance(s, Rat):
        return Rat(1 / s.value)
    if isinstance(s, Alg):
        rev = list(reversed(list(s.poly)))
        iv = Interval(s.lo, s.hi).reciprocal()
        return scalars.make_algebraic(rev, iv.lo, iv.hi)
    return scalars.inv(s)


def canonical_point(matrix: ZeroOneMatrix, precision=DEFAULT_PRECISION) -> ParamVector:
    """The constant vector (1/c_A, ..., 1/c_A); exact by construction."""
    if not _strongly_connected(matrix.rows):
        raise PreconditionError("matrix is not irreducible")
    c = pf_eigenvalue_scalar(matrix, precision)
    if isinstance(c, Rat) and c.value == 1:
        raise DomainError("spectral radius 1 puts the canonical point on the boundary")
    entry = reciprocal_scalar(c)
    return ParamVector(matrix, tuple([entry] * matrix.n), "exact")


# ---------------------------------------------------------------------------
# solvers


def solve_power_equation(exponents, precision=DEFAULT_PRECISION) -> Scalar:
    """The unique x in (0,1) with sum_i x^(p_i) = 1, as an exact scalar."""
    exps = [int(p) for p in exponents]
    if len(exps) < 2:
        raise DomainError("need at least two exponents (one forces x = 1)")
    if any(p < 1 for p in exps):
        raise DomainError("exponents must be positive integers")
    coeffs = [0] * (max(exps) + 1)
    coeffs[0] = -1
    for p in exps:
        coeffs[p] += 1
    lo, hi = polys.refine_root(coeffs, Q(0), Q(1), Q(precision))
    if lo == hi:
        return Rat(lo)
    return scalars.make_algebraic(coeffs, lo, hi)


def _det_poly(matrix: ZeroOneMatrix, exps) -> list:
    """det(diag(t^m_i) A - I) as an integer polynomial in t."""
    n = matrix.n
    mat = []
    for i in range(n):
        row = []
        for j in range(n):
            p = [0] * exps[i] + [1] if matrix.rows[i][j] else []
            if i == j:
                p = polys.sub(p, [1])
            row.append(p)
        mat.append(row)
    return polys.polymat_det(mat)


def solve_beta(matrix: ZeroOneMatrix, omega, precision=DEFAULT_PRECISION,
               degree_cap: int = SOLVE_BETA_DEGREE_CAP) -> BetaSolution:
    """Solve PFE(diag(e^{-beta omega_i}) A) = 1 for the unique beta > 0.

    Rational frequencies take the exact branch (power-form parameters over
    the smallest (0,1) root of the determinant polynomial); anything else
    falls back to certified bisection with float parameters, flagged
    heuristic.
    """
    precision = Q(precision)
    if not isinstance(omega, FrequencyVector):
        omega = FrequencyVector(tuple(omega))
    if len(omega.entries) != matrix.n:
        raise DomainError("frequency vector length must match the matrix size")
    if not in_class_cdm(matrix):
        raise PreconditionError(
            "solver needs an irreducible non-permutation matrix (spectral radius > 1)")
    if omega.is_rational():
        fracs = [e.value for e in omega.entries]
        if any(f <= 0 for f in fracs):
            raise DomainError("frequencies must be positive")
        scale_l = lcm(*[f.denominator for f in fracs])
        m = [int(f * scale_l) for f in fracs]
        g = 0
        for v in m:
            g = gcd(g, v)
        reduced = [v // g for v in m]
        if sum(reduced) <= degree_cap:
            return _solve_beta_exact(matrix, reduced, Q(scale_l, g), precision)
    return _solve_beta_numeric(matrix, omega, precision)


def _solve_beta_exact(matrix: ZeroOneMatrix, reduced, scale: Fraction,
                      precision: Fraction) -> BetaSolution:
    det = _det_poly(matrix, reduced)
    lo, hi = polys.isolate_smallest_root(det, Q(0), Q(1))
    lo, hi = polys.refine_root(det, lo, hi, precision)
    base = Rat(lo) if lo == hi else scalars.make_algebraic(det, lo, hi)
    entries = tuple(scalars.make_power(base, e) for e in reduced)
    biv = scalars.refine(base, precision / 4)
    log_prec = precision / (4 * (1 + int(scale)))
    ln_lo = log_interval_point(biv.lo, log_prec)
    ln_hi = log_interval_point(biv.hi, log_prec)
    beta = Interval(-scale * ln_hi.hi, -scale * ln_lo.lo)
    param = ParamVector(matrix, entries, "exact")
    return BetaSolution(beta, param, "exact", base=base,
                        exponents=tuple(reduced), scale=scale)


def _radius_vs_one(matrix: ZeroOneMatrix, omega: FrequencyVector, beta: Fraction,
                   work: Fraction) -> int:
    """Sign of PFE(diag(e^{-beta omega}) A) - 1; 0 when undecided at this
    working precision."""
    entries = []
    for w in omega.entries:
        wiv = scalars.refine(w, work)
        entries.append(Enc(exp_interval(-(wiv * beta), work)))
    mat = scaled_matrix(entries, matrix)
    coerced = _coerce_matrix(mat)
    n = matrix.n
    nlo, nhi, nmid = _shifted(*_interval_matrix(coerced, work))
    bracket, _, _, _ = _cw_iterate(nlo, nhi, nmid, [Q(1, n)] * n,
                                   work * 4, 4000, 1 << 96)
    if bracket.lo > 1:
        return 1
    if bracket.hi < 1:
        return -1
    return 0


def _solve_beta_numeric(matrix: ZeroOneMatrix, omega: FrequencyVector,
                        precision: Fraction) -> BetaSolution:
    work = max(precision / 64, Q(1, 10**15))
    hi = Q(1)
    doublings = 0
    while _radius_vs_one(matrix, omega, hi, work) >= 0:
        hi *= 2
        doublings += 1
        if doublings > 80:
            raise NumericalFailureError("no bracket for the inverse temperature")
    lo = Q(0)
    while hi - lo > precision:
        mid = (lo + hi) / 2
        sign = _radius_vs_one(matrix, omega, mid, work)
        if sign == 0:
            work /= 16
            if work < Q(1, 10**60):
                break
            continue
        if sign > 0:
            lo = mid
        else:
            hi = mid
    beta = Interval(lo, hi)
    mid = beta.mid
    entries = tuple(
        Flt(math.exp(-float(mid) * scalars.to_float(w))) for w in omega.entries
    )
    param = ParamVector(matrix, entries, "verified", tolerance=precision)
    return BetaSolution(beta, param, "heuristic")
