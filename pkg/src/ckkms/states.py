"""KMS state evaluation on the monomial algebra and the KMS-condition check.

A state is determined by its parameter vector a and the eigenvector x of
(diag a) A with eigenvalue 1 and sum 1: on a diagonal monomial s_J s_J* with
|J| = m the value is a_{j_1} ... a_{j_{m-1}} x_{j_m}; off the diagonal the
value is 0.  For full matrices x = a exactly, so those states evaluate in
exact arithmetic; otherwise the eigenvector is carried as a certified
interval enclosure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import ckwords, scalars
from .ckwords import Monomial, NormalForm
from .errors import DimensionError, DomainError, PreconditionError
from .intervals import Interval, Q, exp_interval
from .matrix01 import ZeroOneMatrix
from .perron import (DEFAULT_PRECISION, BetaSolution, FrequencyVector,
                     ParamVector, pf_data, scaled_matrix)
from .scalars import Enc, Rat, Scalar


@dataclass(frozen=True)
class StateSpec:
    param: ParamVector
    eigenvalue: Interval  # contains 1 within the parameter tolerance
    eigenvector: tuple  # tuple[Interval, ...], positive, sums to 1
    exact_vector: tuple | None  # tuple[Scalar, ...] when available
    precision: Fraction

    @property
    def matrix(self) -> ZeroOneMatrix:
        return self.param.matrix


def state_spec(param: ParamVector, precision=DEFAULT_PRECISION,
               independent_pf: bool = False) -> StateSpec:
    """Build the evaluation data for the state of a certified parameter.

    Full matrices admit the exact eigenvector x = a (row i of (diag a) F_n
    applied to a gives a_i * sum(a) = a_i); `independent_pf` forces the
    power-iteration path anyway, which verification oracles use to keep the
    two sides of an identity independent.
    """
    precision = Q(precision)
    matrix = param.matrix
    if matrix.is_full() and not independent_pf:
        enclosures = tuple(scalars.refine(s, precision) for s in param.entries)
        total_lo = sum(iv.lo for iv in enclosures)
        total_hi = sum(iv.hi for iv in enclosures)
        return StateSpec(param, Interval(total_lo, total_hi), enclosures,
                         param.entries, precision)
    data = pf_data(scaled_matrix(param.entries, matrix), precision=precision)
    slack = param.tolerance if param.tolerance is not None else precision * 8
    band = Interval(1 - slack, 1 + slack)
    if not data.eigenvalue.intersects(band):
        raise PreconditionError(
            "spectral radius enclosure does not contain 1; the parameter is "
            "not on the KMS manifold")
    return StateSpec(param, data.eigenvalue, data.eigenvector, None, precision)


# ---------------------------------------------------------------------------
# evaluation


def eval_monomial(spec: StateSpec, mono: Monomial) -> Scalar:
    """rho_a(s_J s_K*): zero off the diagonal, else the product of the
    parameter entries along J except the last letter, times x of the last."""
    matrix = spec.matrix
    if any(j > matrix.n for j in mono.J + mono.K):
        raise DimensionError("monomial uses letters beyond the matrix size")
    if mono.J != mono.K:
        return scalars.ZERO
    if mono.is_unit:
        return scalars.ONE
    if ckwords.monomial_is_zero(matrix, mono):
        return scalars.ZERO
    J = mono.J
    if spec.exact_vector is not None:
        parts = [spec.param.entries[j - 1] for j in J[:-1]]
        parts.append(spec.exact_vector[J[-1] - 1])
        return scalars.mul(*parts)
    parts = [spec.param.entries[j - 1] for j in J[:-1]]
    parts.append(Enc(spec.eigenvector[J[-1] - 1]))
    return scalars.mul(*parts)


def eval_state(spec: StateSpec, x) -> Scalar:
    """Linear extension of eval_monomial to normal forms."""
    nf = ckwords.as_normal_form(spec.matrix, x)
    if nf.is_zero:
        return scalars.ZERO
    terms = []
    for mono, coeff in nf.terms:
        value = eval_monomial(spec, mono)
        if isinstance(value, Rat) and value.value == 0:
            continue
        terms.append(scalars.mul(coeff, value))
    if not terms:
        return scalars.ZERO
    return scalars.add(*terms)


def quasi_free_eval(n: int, J, K) -> Scalar:
    """delta_{JK} n^{-|J|}, exact; every word is admissible over the full
    matrix."""
    n = int(n)
    if n < 2:
        raise DomainError("quasi-free states need n >= 2")
    J = tuple(int(j) for j in J)
    K = tuple(int(k) for k in K)
    for j in J + K:
        if not 1 <= j <= n:
            raise DomainError(f"letter index {j} outside 1..{n}")
    if J != K:
        return scalars.ZERO
    return Rat(Q(1, n ** len(J)))


# ---------------------------------------------------------------------------
# gauge action


def _beta_interval(beta, precision) -> Interval:
    if isinstance(beta, BetaSolution):
        return beta.beta
    if isinstance(beta, Interval):
        return beta
    if isinstance(beta, Scalar):
        return scalars.refine(beta, precision)
    return scalars.refine(scalars._as_scalar(beta), precision)


def _matches_solution(omega: FrequencyVector, solution: BetaSolution) -> bool:
    if solution.base is None or solution.exponents is None:
        return False
    if not omega.is_rational():
        return False
    scale = solution.scale
    return all(w.value == Q(e, 1) / scale
               for w, e in zip(omega.entries, solution.exponents))


def gauge_factor(omega, beta, mono: Monomial, precision=DEFAULT_PRECISION) -> Scalar:
    """The factor e^{-beta (omega(J) - omega(K))} by which the analytically
    continued gauge action scales s_J s_K*.

    Exact beta solutions with matching rational frequencies give an exact
    power of the solution's base; everything else is an enclosure.
    """
    precision = Q(precision)
    if not isinstance(omega, FrequencyVector):
        omega = FrequencyVector(tuple(omega))
    if isinstance(beta, BetaSolution) and _matches_solution(omega, beta):
        exp_total = (sum(beta.exponents[j - 1] for j in mono.J)
                     - sum(beta.exponents[k - 1] for k in mono.K))
        if exp_total == 0:
            return scalars.ONE
        return scalars.make_power(beta.base, exp_total)
    if all(isinstance(w, Rat) for w in omega.entries):
        delta = (sum(omega.entries[j - 1].value for j in mono.J)
                 - sum(omega.entries[k - 1].value for k in mono.K))
        if delta == 0:
            return scalars.ONE
        delta_iv = Interval.point(delta)
    else:
        count = max(1, len(mono.J) + len(mono.K))
        work = precision / (4 * count)
        delta_iv = Interval.point(0)
        for j in mono.J:
            delta_iv = delta_iv + scalars.refine(omega.entries[j - 1], work)
        for k in mono.K:
            delta_iv = delta_iv - scalars.refine(omega.entries[k - 1], work)
        if delta_iv.lo == delta_iv.hi == 0:
            return scalars.ONE
    biv = _beta_interval(beta, precision)
    return Enc(exp_interval(-(biv * delta_iv), precision))


# ---------------------------------------------------------------------------
# KMS condition


@dataclass(frozen=True)
class KmsCheckResult:
    ok: bool
    lhs: Scalar
    rhs: Scalar
    residual: Fraction  # certified upper bound on |lhs - rhs|
    tolerance: Fraction


def residual_bound(a: Scalar, b: Scalar, precision=Q(1, 10**14)) -> Fraction:
    """Certified upper bound on |a - b|."""
    ia = scalars.refine(a, Q(precision))
    ib = scalars.refine(b, Q(precision))
    return ia.distance_sup(ib)


def kms_check(spec: StateSpec, omega, beta, x, y,
              tolerance=Q(1, 10**9), precision=DEFAULT_PRECISION) -> KmsCheckResult:
    """Check rho(y . sigma_{i beta}(x)) = rho(x y) for monomials x, y.

    Precondition: the spec's parameter satisfies a_i = e^{-beta omega_i}
    within the tolerance; violating that is a usage error, not a failed
    check.
    """
    tolerance = Q(tolerance)
    precision = Q(precision)
    if not isinstance(omega, FrequencyVector):
        omega = FrequencyVector(tuple(omega))
    if len(omega.entries) != spec.matrix.n:
        raise DimensionError("frequency vector length must match the matrix size")
    matrix = spec.matrix

    exact_match = isinstance(beta, BetaSolution) and _matches_solution(omega, beta) \
        and spec.param.entries == beta.param.entries
    if not exact_match:
        biv = _beta_interval(beta, precision)
        for a_i, w in zip(spec.param.entries, omega.entries):
            wiv = scalars.refine(w, precision)
            target = exp_interval(-(biv * wiv), precision)
            gap = scalars.refine(a_i, precision).distance_sup(target)
            if gap > tolerance:
                raise PreconditionError(
                    "parameter does not match e^{-beta omega} within tolerance "
                    f"(gap bound {float(gap):.3g})")

    xf = ckwords.as_normal_form(matrix, x)
    yf = ckwords.as_normal_form(matrix, y)
    lhs_terms = []
    for mono, coeff in xf.terms:
        factor = gauge_factor(omega, beta, mono, precision)
        value = eval_state(spec, ckwords.multiply(matrix, yf, mono))
        if isinstance(value, Rat) and value.value == 0:
            continue
        lhs_terms.append(scalars.mul(coeff, factor, value))
    lhs = scalars.add(*lhs_terms) if lhs_terms else scalars.ZERO
    rhs = eval_state(spec, ckwords.multiply(matrix, xf, yf))
    gap = residual_bound(lhs, rhs, min(precision, tolerance / 16))
    return KmsCheckResult(gap <= tolerance, lhs, rhs, gap, tolerance)
