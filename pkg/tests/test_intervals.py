"""Interval arithmetic: containment soundness, widths, and exp/log enclosures."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckkms.errors import DomainError
from ckkms.intervals import (
    Interval,
    exp_interval,
    exp_interval_point,
    log_interval,
    log_interval_point,
)

fractions_small = st.fractions(min_value=-50, max_value=50, max_denominator=40)
positive_fractions = st.fractions(
    min_value=Fraction(1, 40), max_value=50, max_denominator=40
)


def make_interval(a: Fraction, b: Fraction) -> Interval:
    return Interval(min(a, b), max(a, b))


@st.composite
def intervals(draw, elements=fractions_small):
    return make_interval(draw(elements), draw(elements))


@st.composite
def interval_with_point(draw, elements=fractions_small):
    iv = draw(intervals(elements))
    t = draw(st.fractions(min_value=0, max_value=1, max_denominator=64))
    return iv, iv.lo + t * (iv.hi - iv.lo)


class TestConstruction:
    def test_reversed_endpoints_rejected(self):
        with pytest.raises(Exception):
            Interval(Fraction(1), Fraction(0))

    def test_point_has_zero_width(self):
        iv = Interval.point(Fraction(3, 7))
        assert iv.lo == iv.hi == Fraction(3, 7)
        assert iv.width == 0
        assert iv.mid == Fraction(3, 7)

    @given(intervals())
    @settings(max_examples=60, deadline=None)
    def test_width_nonnegative_and_mid_inside(self, iv):
        assert iv.width >= 0
        assert iv.lo <= iv.mid <= iv.hi


class TestArithmeticContainment:
    """result intervals must contain the pointwise operation of any members"""

    @given(interval_with_point(), interval_with_point())
    @settings(max_examples=80, deadline=None)
    def test_add_sub_mul(self, ap, bp):
        (ia, xa), (ib, xb) = ap, bp
        s = ia + ib
        assert s.lo <= xa + xb <= s.hi
        d = ia - ib
        assert d.lo <= xa - xb <= d.hi
        p = ia * ib
        assert p.lo <= xa * xb <= p.hi

    @given(interval_with_point(),
           interval_with_point(elements=positive_fractions))
    @settings(max_examples=60, deadline=None)
    def test_division_by_positive(self, ap, bp):
        (ia, xa), (ib, xb) = ap, bp
        q = ia * ib.reciprocal()
        assert q.lo <= xa / xb <= q.hi

    def test_reciprocal_through_zero_rejected(self):
        with pytest.raises(Exception):
            Interval(Fraction(-1), Fraction(1)).reciprocal()

    @given(intervals(), intervals())
    @settings(max_examples=60, deadline=None)
    def test_hull_contains_both(self, a, b):
        h = a.hull(b)
        assert h.lo <= a.lo and h.hi >= a.hi
        assert h.lo <= b.lo and h.hi >= b.hi

    @given(intervals(), intervals())
    @settings(max_examples=60, deadline=None)
    def test_intersects_is_symmetric(self, a, b):
        assert a.intersects(b) == b.intersects(a)

    @given(intervals(), intervals())
    @settings(max_examples=60, deadline=None)
    def test_distance_sup_bounds_member_distance(self, a, b):
        d = a.distance_sup(b)
        assert d >= abs(a.mid - b.mid) - (a.width + b.width)
        assert d >= 0


class TestExpLog:
    @given(st.fractions(min_value=-10, max_value=10, max_denominator=30))
    @settings(max_examples=50, deadline=None)
    def test_exp_point_encloses_float_exp(self, x):
        iv = exp_interval_point(x, Fraction(1, 10**12))
        true = math.exp(float(x))
        assert float(iv.lo) <= true * (1 + 1e-13) and true * (1 - 1e-13) <= float(iv.hi)
        assert iv.width <= Fraction(1, 10**11)

    @given(st.fractions(min_value=Fraction(1, 30), max_value=30,
                        max_denominator=30))
    @settings(max_examples=50, deadline=None)
    def test_log_point_encloses_float_log(self, x):
        iv = log_interval_point(x, Fraction(1, 10**12))
        true = math.log(float(x))
        assert float(iv.lo) <= true + 1e-11 and true - 1e-11 <= float(iv.hi)

    def test_exp_log_roundtrip(self):
        x = Fraction(5, 7)
        iv = log_interval_point(x, Fraction(1, 10**14))
        back = exp_interval(iv, Fraction(1, 10**14))
        assert back.lo <= x <= back.hi

    def test_exp_monotone_on_intervals(self):
        iv = exp_interval(Interval(Fraction(0), Fraction(1)), Fraction(1, 10**9))
        assert iv.lo <= 1 <= iv.hi or iv.lo >= 1  # contains e^0 = 1 at the left
        assert float(iv.hi) >= math.e - 1e-9

    def test_log_requires_positive(self):
        with pytest.raises(DomainError):
            log_interval_point(Fraction(0))
        with pytest.raises(DomainError):
            log_interval(Interval(Fraction(-1), Fraction(2)))
