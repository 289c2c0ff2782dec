"""Kronecker products, the index-level embedding, and tensor-product states.

The composite index convention is u = m(i-1) + j for i in 1..n, j in 1..m.
The embedding sends the composite generator s_u to s_i tensor s_j, so its
action on monomials is letterwise index splitting; the tensor product of
two states evaluates a composite monomial as the product of the two factor
evaluations of the split monomials.

The homomorphism verifier compares that tensor evaluation against the state
of the Kronecker parameter vector over the Kronecker matrix, with the
composite eigenvector recomputed independently by power iteration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import ckwords, scalars, states
from .ckwords import Monomial
from .errors import DimensionError, DomainError
from .intervals import Interval, Q
from .matrix01 import ZeroOneMatrix, kronecker_matrix
from .perron import (DEFAULT_PRECISION, BetaSolution, FrequencyVector,
                     in_lambda)
from .scalars import Enc, Rat, Scalar
from .states import StateSpec, state_spec

ENUMERATION_CAP = 10**5


@dataclass(frozen=True)
class IndexSplit:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 2 or self.m < 2:
            raise DomainError("factor dimensions must be at least 2")

    @property
    def size(self) -> int:
        return self.n * self.m

    def pair_index(self, i: int, j: int) -> int:
        if not (1 <= i <= self.n and 1 <= j <= self.m):
            raise DomainError(f"pair ({i},{j}) outside 1..{self.n} x 1..{self.m}")
        return self.m * (i - 1) + j

    def split_index(self, u: int):
        if not 1 <= u <= self.size:
            raise DomainError(f"composite index {u} outside 1..{self.size}")
        return ((u - 1) // self.m + 1, (u - 1) % self.m + 1)


def kronecker_vector(v, w) -> tuple:
    """(v kron w)_{m(i-1)+j} = v_i w_j as exact scalar products."""
    vs = [scalars._as_scalar(x) for x in v]
    ws = [scalars._as_scalar(x) for x in w]
    return tuple(scalars.mul(a, b) for a in vs for b in ws)


def embed_monomial(split: IndexSplit, mono: Monomial):
    """Letterwise index splitting: the pair of factor monomials whose tensor
    is the image of the composite monomial."""
    first = Monomial(tuple(split.split_index(u)[0] for u in mono.J),
                     tuple(split.split_index(u)[0] for u in mono.K))
    second = Monomial(tuple(split.split_index(u)[1] for u in mono.J),
                      tuple(split.split_index(u)[1] for u in mono.K))
    return first, second


def tensor_state_eval(spec_a: StateSpec, spec_b: StateSpec, x) -> Scalar:
    """(rho_a tensor rho_b) of a composite normal form, evaluated through
    the embedding: each composite monomial splits into two factor monomials
    and the values multiply."""
    split = IndexSplit(spec_a.matrix.n, spec_b.matrix.n)
    composite = kronecker_matrix(spec_a.matrix, spec_b.matrix)
    nf = ckwords.as_normal_form(composite, x)
    if nf.is_zero:
        return scalars.ZERO
    terms = []
    for mono, coeff in nf.terms:
        first, second = embed_monomial(split, mono)
        va = states.eval_monomial(spec_a, first)
        if isinstance(va, Rat) and va.value == 0:
            continue
        vb = states.eval_monomial(spec_b, second)
        if isinstance(vb, Rat) and vb.value == 0:
            continue
        terms.append(scalars.mul(coeff, va, vb))
    if not terms:
        return scalars.ZERO
    return scalars.add(*terms)


# ---------------------------------------------------------------------------
# homomorphism verification


@dataclass(frozen=True)
class TensorReport:
    passed: bool
    max_residual: Fraction
    tolerance: Fraction
    diagonal_count: int
    off_diagonal_count: int
    max_len: int


def verify_tensor_identity(spec_a: StateSpec, spec_b: StateSpec, max_len: int,
                           tolerance=Q(1, 10**9), cap: int = ENUMERATION_CAP,
                           off_diagonal_samples: int = 200,
                           seed: int = 0) -> TensorReport:
    """Compare the tensor evaluation with the state of the Kronecker
    parameter over the Kronecker matrix.

    Every admissible diagonal monomial s_J s_J* with |J| <= max_len is
    evaluated on both sides.  Monomials with J != K vanish on both sides
    structurally (the split of unequal sequences differs in some factor, and
    states vanish off the diagonal); a seeded sample of such pairs is pushed
    through both evaluators to confirm the zeros rather than trusting the
    argument.
    """
    tolerance = Q(tolerance)
    composite = kronecker_matrix(spec_a.matrix, spec_b.matrix)
    ab = kronecker_vector(spec_a.param.entries, spec_b.param.entries)
    param = in_lambda(composite, ab, tolerance=tolerance)
    spec_ab = state_spec(param, precision=min(spec_a.precision, spec_b.precision,
                                              tolerance / 64),
                         independent_pf=True)
    words = ckwords.enumerate_admissible(composite, max_len, cap)
    work = tolerance / 64
    max_residual = Q(0)
    diagonal = 0
    for J in words:
        mono = Monomial(J, J)
        if J and not ckwords.followers(composite, J, J):
            continue
        lhs = tensor_state_eval(spec_a, spec_b, mono)
        rhs = states.eval_state(spec_ab, mono)
        gap = states.residual_bound(lhs, rhs, work)
        diagonal += 1
        if gap > max_residual:
            max_residual = gap
    rng = random.Random(seed)
    by_len = {}
    for J in words:
        by_len.setdefault(len(J), []).append(J)
    off_count = 0
    attempts = 0
    while off_count < off_diagonal_samples and attempts < off_diagonal_samples * 20:
        attempts += 1
        length = rng.choice([l for l in by_len if l > 0] or [0])
        if length == 0:
            break
        J = rng.choice(by_len[length])
        K = rng.choice(by_len[length])
        if J == K:
            continue
        mono = Monomial(J, K)
        if ckwords.monomial_is_zero(composite, mono):
            continue
        lhs = tensor_state_eval(spec_a, spec_b, mono)
        rhs = states.eval_state(spec_ab, mono)
        if not (isinstance(lhs, Rat) and lhs.value == 0
                and isinstance(rhs, Rat) and rhs.value == 0):
            gap = states.residual_bound(lhs, rhs, work)
            if gap > max_residual:
                max_residual = gap
        off_count += 1
    return TensorReport(max_residual <= tolerance, max_residual, tolerance,
                        diagonal, off_count, max_len)


# ---------------------------------------------------------------------------
# gauge actions on tensor products


def combined_frequencies(split: IndexSplit, omega1, beta1, omega2, beta2,
                         precision=DEFAULT_PRECISION) -> FrequencyVector:
    """Frequencies of the tensor of two rescaled gauge actions:
    Omega_{m(i-1)+j} = beta1 omega_i + beta2 omega_j.  The Kronecker state
    is KMS for this action at inverse temperature 1."""
    precision = Q(precision)
    if not isinstance(omega1, FrequencyVector):
        omega1 = FrequencyVector(tuple(omega1))
    if not isinstance(omega2, FrequencyVector):
        omega2 = FrequencyVector(tuple(omega2))
    if len(omega1.entries) != split.n or len(omega2.entries) != split.m:
        raise DimensionError("frequency lengths must match the split dimensions")
    b1 = _beta_scalar(beta1, precision)
    b2 = _beta_scalar(beta2, precision)
    for b in (b1, b2):
        if scalars.refine(b, precision).lo <= 0:
            raise DomainError("inverse temperatures must be positive")
    entries = []
    for wi in omega1.entries:
        for wj in omega2.entries:
            entries.append(scalars.add(scalars.mul(b1, wi), scalars.mul(b2, wj)))
    return FrequencyVector(tuple(entries))


def _beta_scalar(beta, precision) -> Scalar:
    if isinstance(beta, BetaSolution):
        return Enc(beta.beta)
    if isinstance(beta, Interval):
        return Enc(beta)
    if isinstance(beta, Scalar):
        return beta
    return scalars._as_scalar(beta)


# ---------------------------------------------------------------------------
# coassociativity of the index splitting


def check_coassociativity(n_a: int, n_b: int, n_c: int) -> bool:
    """Both ways of splitting a triple-product generator index agree:
    u -> (composite, k) -> ((i, j), k) equals u -> (i, composite) -> (i, (j, k))."""
    if min(n_a, n_b, n_c) < 2:
        raise DomainError("all three dimensions must be at least 2")
    left_outer = IndexSplit(n_a * n_b, n_c)
    left_inner = IndexSplit(n_a, n_b)
    right_outer = IndexSplit(n_a, n_b * n_c)
    right_inner = IndexSplit(n_b, n_c)
    for u in range(1, n_a * n_b * n_c + 1):
        uc, k = left_outer.split_index(u)
        i1, j1 = left_inner.split_index(uc)
        i2, vc = right_outer.split_index(u)
        j2, k2 = right_inner.split_index(vc)
        if (i1, j1, k) != (i2, j2, k2):
            return False
    return True
