"""Kronecker vectors, index splitting, tensor-product states, the
homomorphism verifier, and combined gauge frequencies, cross-checked against
numpy's kron and exact rational evaluation."""

import math
import random

import numpy as np
import pytest

from ckkms import ckwords, perron, scalars, states, tensorops
from ckkms.ckwords import Monomial
from ckkms.errors import DimensionError, DomainError
from ckkms.matrix01 import ZeroOneMatrix, kronecker_matrix
from ckkms.scalars import Q, Rat
from ckkms.tensorops import IndexSplit

from conftest import CYCLE3, FULL2, FULL3, GOLDEN, random_positive_rationals

PHI = (1 + math.sqrt(5)) / 2


def spec_for(matrix, **kw):
    return states.state_spec(perron.canonical_point(matrix), **kw)


def rat_vector(*values):
    return tuple(Rat(Q(v)) for v in values)


class TestIndexSplit:
    def test_generator_images(self):
        split = IndexSplit(2, 2)
        assert split.split_index(2) == (1, 2)
        assert split.split_index(3) == (2, 1)

    def test_bijection(self):
        for n, m in ((2, 2), (2, 3), (3, 2), (3, 4)):
            split = IndexSplit(n, m)
            seen = set()
            for u in range(1, n * m + 1):
                i, j = split.split_index(u)
                assert split.pair_index(i, j) == u
                seen.add((i, j))
            assert seen == {(i, j) for i in range(1, n + 1)
                            for j in range(1, m + 1)}

    def test_range_checks(self):
        split = IndexSplit(2, 3)
        with pytest.raises(DomainError):
            split.split_index(7)
        with pytest.raises(DomainError):
            split.pair_index(3, 1)
        with pytest.raises(DomainError):
            IndexSplit(1, 2)


class TestKroneckerVector:
    def test_rational_example(self):
        got = tensorops.kronecker_vector(rat_vector(Q(1, 3), Q(2, 3)),
                                         rat_vector(Q(1, 2), Q(1, 2)))
        assert [scalars.to_fraction(s) for s in got] == [
            Q(1, 6), Q(1, 6), Q(1, 3), Q(1, 3)]

    def test_golden_example(self):
        c = scalars.make_algebraic([-1, 1, 1], Q(0), Q(1))  # (sqrt5 - 1)/2
        c2 = scalars.mul(c, c)
        got = tensorops.kronecker_vector(rat_vector(Q(1, 2), Q(1, 2)), (c, c2))
        floats = [scalars.to_float(s) for s in got]
        expected = [(math.sqrt(5) - 1) / 4, (math.sqrt(5) - 1) ** 2 / 8]
        assert floats == pytest.approx(expected * 2, abs=1e-12)

    def test_scalar_unit(self):
        v = rat_vector(Q(2, 5), Q(3, 5))
        got = tensorops.kronecker_vector(v, (Rat(Q(1)),))
        assert [scalars.to_fraction(s) for s in got] == [Q(2, 5), Q(3, 5)]

    def test_against_numpy(self):
        rng = random.Random(61)
        for _ in range(20):
            v = random_positive_rationals(rng, rng.randint(2, 4))
            w = random_positive_rationals(rng, rng.randint(2, 4))
            got = tensorops.kronecker_vector(tuple(Rat(x) for x in v),
                                             tuple(Rat(x) for x in w))
            ref = np.kron(np.array([float(x) for x in v]),
                          np.array([float(x) for x in w]))
            assert [scalars.to_float(s) for s in got] == pytest.approx(
                list(ref), abs=1e-12)

    def test_associative(self):
        rng = random.Random(67)
        v, w, x = (tuple(Rat(q) for q in random_positive_rationals(rng, k))
                   for k in (2, 3, 2))
        left = tensorops.kronecker_vector(tensorops.kronecker_vector(v, w), x)
        right = tensorops.kronecker_vector(v, tensorops.kronecker_vector(w, x))
        assert [scalars.to_fraction(s) for s in left] == \
               [scalars.to_fraction(s) for s in right]


class TestEmbedMonomial:
    def test_generators(self):
        split = IndexSplit(2, 2)
        first, second = tensorops.embed_monomial(split, Monomial((2,), ()))
        assert (first, second) == (Monomial((1,), ()), Monomial((2,), ()))
        first, second = tensorops.embed_monomial(split, Monomial((3,), ()))
        assert (first, second) == (Monomial((2,), ()), Monomial((1,), ()))

    def test_unit(self):
        split = IndexSplit(2, 3)
        assert tensorops.embed_monomial(split, Monomial((), ())) == (
            Monomial((), ()), Monomial((), ()))

    def test_letterwise(self):
        split = IndexSplit(2, 2)
        first, second = tensorops.embed_monomial(split, Monomial((1, 4), (2,)))
        assert first == Monomial((1, 2), (1,))
        assert second == Monomial((1, 2), (2,))

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            tensorops.embed_monomial(IndexSplit(2, 2), Monomial((5,), ()))

    def test_admissibility_preserved(self):
        rng = random.Random(71)
        for a, b in ((GOLDEN, FULL2), (CYCLE3, GOLDEN)):
            split = IndexSplit(a.n, b.n)
            composite = kronecker_matrix(a, b)
            for _ in range(120):
                word = tuple(rng.randint(1, composite.n)
                             for _ in range(rng.randint(1, 4)))
                mono = Monomial(word, ())
                first, second = tensorops.embed_monomial(split, mono)
                assert ckwords.is_admissible(composite, word) == (
                    ckwords.is_admissible(a, first.J)
                    and ckwords.is_admissible(b, second.J))

    def test_zero_monomials_split(self):
        rng = random.Random(73)
        a, b = GOLDEN, CYCLE3
        split = IndexSplit(a.n, b.n)
        composite = kronecker_matrix(a, b)
        for _ in range(150):
            J = tuple(rng.randint(1, composite.n)
                      for _ in range(rng.randint(0, 3)))
            K = tuple(rng.randint(1, composite.n)
                      for _ in range(rng.randint(0, 3)))
            mono = Monomial(J, K)
            first, second = tensorops.embed_monomial(split, mono)
            assert ckwords.monomial_is_zero(composite, mono) == (
                ckwords.monomial_is_zero(a, first)
                or ckwords.monomial_is_zero(b, second))


class TestTensorStateEval:
    def test_quasi_free_product(self):
        spec2, spec3 = spec_for(FULL2), spec_for(FULL3)
        for u in range(1, 7):
            got = tensorops.tensor_state_eval(spec2, spec3,
                                              Monomial((u,), (u,)))
            assert scalars.to_fraction(got) == Q(1, 6)

    def test_quasi_free_product_depth_two(self):
        # the product of uniform states is the uniform state on the product
        spec2, spec3 = spec_for(FULL2), spec_for(FULL3)
        for J in ckwords.enumerate_admissible(ZeroOneMatrix.full(6), 2):
            got = tensorops.tensor_state_eval(spec2, spec3, Monomial(J, J))
            assert scalars.to_fraction(got) == states.quasi_free_eval(
                6, J, J).value

    def test_off_diagonal_zero(self):
        spec2, spec3 = spec_for(FULL2), spec_for(FULL3)
        assert tensorops.tensor_state_eval(
            spec2, spec3, Monomial((1,), (2,))) == scalars.ZERO

    def test_weighted_example(self):
        pa = perron.in_lambda(FULL2, rat_vector(Q(1, 3), Q(2, 3)))
        pb = perron.in_lambda(FULL2, rat_vector(Q(1, 2), Q(1, 2)))
        got = tensorops.tensor_state_eval(states.state_spec(pa),
                                          states.state_spec(pb),
                                          Monomial((1,), (1,)))
        assert scalars.to_fraction(got) == Q(1, 6)

    def test_matches_kronecker_state_exactly(self):
        # over full factors both sides are exact rationals; require equality
        pa = perron.in_lambda(FULL2, rat_vector(Q(1, 3), Q(2, 3)))
        pb = perron.in_lambda(FULL2, rat_vector(Q(1, 4), Q(3, 4)))
        spec_a, spec_b = states.state_spec(pa), states.state_spec(pb)
        composite = kronecker_matrix(FULL2, FULL2)
        ab = tensorops.kronecker_vector(pa.entries, pb.entries)
        spec_ab = states.state_spec(perron.in_lambda(composite, ab))
        for J in ckwords.enumerate_admissible(composite, 2):
            mono = Monomial(J, J)
            lhs = tensorops.tensor_state_eval(spec_a, spec_b, mono)
            rhs = states.eval_state(spec_ab, mono)
            assert scalars.to_fraction(lhs) == scalars.to_fraction(rhs)


class TestVerifyTensorIdentity:
    def test_full2_pair(self):
        pa = perron.in_lambda(FULL2, rat_vector(Q(1, 3), Q(2, 3)))
        pb = perron.in_lambda(FULL2, rat_vector(Q(1, 2), Q(1, 2)))
        report = tensorops.verify_tensor_identity(states.state_spec(pa),
                                                  states.state_spec(pb),
                                                  max_len=3)
        assert report.passed
        assert report.max_residual <= Q(1, 10**9)
        assert report.diagonal_count == 1 + 4 + 16 + 64
        assert report.off_diagonal_count > 0

    def test_golden_pair(self):
        spec = spec_for(GOLDEN)
        report = tensorops.verify_tensor_identity(spec, spec, max_len=3)
        assert report.passed

    def test_max_len_zero(self):
        report = tensorops.verify_tensor_identity(spec_for(FULL2),
                                                  spec_for(FULL2), max_len=0)
        assert report.passed and report.diagonal_count == 1

    def test_both_orders_pass_independently(self):
        pa = perron.in_lambda(FULL2, rat_vector(Q(1, 5), Q(4, 5)))
        spec_a = states.state_spec(pa)
        spec_b = spec_for(GOLDEN)
        fwd = tensorops.verify_tensor_identity(spec_a, spec_b, max_len=2)
        rev = tensorops.verify_tensor_identity(spec_b, spec_a, max_len=2)
        assert fwd.passed and rev.passed

    def test_mixed_cycle_pair(self):
        report = tensorops.verify_tensor_identity(spec_for(CYCLE3),
                                                  spec_for(FULL2), max_len=2)
        assert report.passed


class TestCombinedFrequencies:
    def test_uniform_example(self):
        sol = perron.solve_beta(FULL2, (Q(1), Q(1)))
        omega = tensorops.combined_frequencies(IndexSplit(2, 2),
                                               (Q(1), Q(1)), sol,
                                               (Q(1), Q(1)), sol)
        for entry in omega.entries:
            iv = scalars.refine(entry, Q(1, 10**12))
            assert abs(float(iv.mid) - 2 * math.log(2)) < 1e-10

    def test_mixed_example(self):
        phi_sol = perron.solve_beta(FULL2, (Q(1), Q(2)))
        two_sol = perron.solve_beta(FULL2, (Q(1), Q(1)))
        omega = tensorops.combined_frequencies(IndexSplit(2, 2),
                                               (Q(1), Q(2)), phi_sol,
                                               (Q(1), Q(1)), two_sol)
        logphi, log2 = math.log(PHI), math.log(2)
        expected = [logphi + log2, logphi + log2,
                    2 * logphi + log2, 2 * logphi + log2]
        got = [float(scalars.refine(e, Q(1, 10**12)).mid)
               for e in omega.entries]
        assert got == pytest.approx(expected, abs=1e-10)

    def test_unit_betas_plain_sums(self):
        omega = tensorops.combined_frequencies(IndexSplit(2, 2),
                                               (Q(1), Q(2)), Rat(Q(1)),
                                               (Q(3), Q(5)), Rat(Q(1)))
        assert [e.value for e in omega.entries] == [4, 6, 5, 7]

    def test_validation(self):
        with pytest.raises(DimensionError):
            tensorops.combined_frequencies(IndexSplit(2, 2), (Q(1),),
                                           Rat(Q(1)), (Q(1), Q(1)), Rat(Q(1)))
        with pytest.raises(DomainError):
            tensorops.combined_frequencies(IndexSplit(2, 2), (Q(1), Q(1)),
                                           Rat(Q(-1)), (Q(1), Q(1)), Rat(Q(1)))


class TestKmsTransport:
    def test_kronecker_state_is_equilibrium_at_one(self):
        sol_a = perron.solve_beta(FULL2, (Q(1), Q(1)))
        sol_b = perron.solve_beta(FULL2, (Q(1), Q(2)))
        split = IndexSplit(2, 2)
        composite = kronecker_matrix(FULL2, FULL2)
        ab = tensorops.kronecker_vector(sol_a.param.entries,
                                        sol_b.param.entries)
        spec = states.state_spec(perron.in_lambda(composite, ab))
        omega = tensorops.combined_frequencies(split, (Q(1), Q(1)), sol_a,
                                               (Q(1), Q(2)), sol_b)
        words = ckwords.enumerate_admissible(composite, 1)
        monos = [Monomial(J, K) for J in words for K in words]
        for mono in monos:
            res = states.kms_check(spec, omega, Rat(Q(1)), mono,
                                   mono.adjoint(), tolerance=Q(1, 10**9))
            assert res.ok, (mono, float(res.residual))


class TestCoassociativity:
    def test_triples(self):
        assert tensorops.check_coassociativity(2, 2, 2)
        assert tensorops.check_coassociativity(2, 3, 2)
        assert tensorops.check_coassociativity(3, 4, 2)

    def test_minimum_dimensions(self):
        with pytest.raises(DomainError):
            tensorops.check_coassociativity(2, 2, 1)
