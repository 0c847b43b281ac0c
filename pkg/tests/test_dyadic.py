"""Dyadic and interval arithmetic: exactness, rounding, soundness."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qal.dyadic import (DOWN, NEAREST, UP, Dyadic, Interval, Precision,
                        iv_deriv_enclosure, iv_quad_step)

dyadics = st.builds(Dyadic,
                    st.integers(min_value=-(1 << 40), max_value=1 << 40),
                    st.integers(min_value=-50, max_value=20))
precisions = st.integers(min_value=1, max_value=80)


def iv(a: Dyadic, b: Dyadic) -> Interval:
    return Interval(a, b) if a <= b else Interval(b, a)


intervals = st.builds(iv, dyadics, dyadics)


class TestDyadicRing:
    def test_canonical_form(self):
        d = Dyadic(12, 0)
        assert (d.man, d.exp) == (3, 2)
        assert (Dyadic(0, 7).man, Dyadic(0, 7).exp) == (0, 0)

    @given(dyadics, dyadics)
    def test_add_matches_fractions(self, a, b):
        assert (a + b).as_fraction() == a.as_fraction() + b.as_fraction()

    @given(dyadics, dyadics)
    def test_mul_matches_fractions(self, a, b):
        assert (a * b).as_fraction() == a.as_fraction() * b.as_fraction()

    @given(dyadics, dyadics)
    def test_comparison_matches_fractions(self, a, b):
        assert (a < b) == (a.as_fraction() < b.as_fraction())
        assert (a == b) == (a.as_fraction() == b.as_fraction())

    @given(dyadics)
    def test_neg_abs_half(self, a):
        assert (-a).as_fraction() == -a.as_fraction()
        assert abs(a).as_fraction() == abs(a.as_fraction())
        assert a.half().as_fraction() == a.as_fraction() / 2

    def test_equality_is_structural_and_hashable(self):
        assert Dyadic(4, -1) == Dyadic(1, 1) == Dyadic(2)
        assert len({Dyadic(4, -1), Dyadic(2), Dyadic(1, 1)}) == 1


class TestRounding:
    @given(dyadics, precisions)
    def test_directed_modes_bracket(self, a, m):
        lo, hi = a.round(m, DOWN), a.round(m, UP)
        assert lo <= a <= hi
        assert (hi - lo).as_fraction() <= Fraction(1, 1 << m)
        assert lo.in_grid(m) and hi.in_grid(m)

    @given(dyadics, precisions)
    def test_nearest_within_half_granule(self, a, m):
        r = a.round(m, NEAREST)
        assert abs(r - a).as_fraction() <= Fraction(1, 1 << (m + 1))

    def test_nearest_ties_to_even(self):
        # 3/2 at granule 1 sits exactly between 1 and 2; even mantissa wins
        assert Dyadic(3, -1).round(0) == Dyadic(2)
        assert Dyadic(5, -1).round(0) == Dyadic(2)

    @given(dyadics, precisions)
    def test_grid_members_round_to_themselves(self, a, m):
        r = a.round(m)
        assert r.round(m, DOWN) == r.round(m, UP) == r

    def test_precision_object_accepted(self):
        assert Dyadic(5, -4).round(Precision(2), DOWN) == Dyadic(1, -2)
        with pytest.raises(ValueError):
            Precision(0)

    @given(dyadics)
    def test_floor_ceil_int(self, a):
        q = a.as_fraction()
        assert a.floor_int() == q.numerator // q.denominator
        assert a.ceil_int() == -((-q.numerator) // q.denominator)


class TestSerialization:
    @given(dyadics)
    def test_str_parse_roundtrip(self, a):
        assert Dyadic.parse(str(a)) == a

    def test_parse_forms(self):
        assert Dyadic.parse("-7*2^-2") == Dyadic(-7, -2)
        assert Dyadic.parse("-1.75") == Dyadic(-7, -2)
        assert Dyadic.parse("3") == Dyadic(3)
        with pytest.raises(ValueError):
            Dyadic.parse("0.1")  # not a dyadic rational

    def test_decimal_rendering(self):
        assert Dyadic(-7, -2).decimal(4) == "-1.7500"
        assert "+/-" in Dyadic(1, -70).decimal(6)

    @given(st.floats(allow_nan=False, allow_infinity=False,
                     min_value=-8.0, max_value=8.0))
    def test_from_float_exact(self, x):
        assert Dyadic.from_float(x).as_fraction() == Fraction(x)


class TestInterval:
    @given(intervals, intervals)
    def test_add_mul_sound(self, x, y):
        pairs = [(a, b) for a in (x.lo, x.mid(), x.hi)
                 for b in (y.lo, y.mid(), y.hi)]
        s, p = x + y, x * y
        for a, b in pairs:
            assert s.lo <= a + b <= s.hi
            assert p.lo <= a * b <= p.hi

    @given(intervals)
    def test_square_is_set_exact(self, x):
        sq = x.square()
        assert sq.lo == x.mig() * x.mig()
        assert sq.hi == x.mag() * x.mag()
        assert sq.lo >= Dyadic(0)

    @given(intervals, precisions)
    def test_round_out_contains(self, x, m):
        assert x.round_out(m).contains_interval(x)

    @given(intervals, intervals, precisions)
    def test_divide_sound(self, x, y, m):
        if y.contains_zero():
            with pytest.raises(ZeroDivisionError):
                x.divide(y, m)
            return
        q = x.divide(y, m)
        for a in (x.lo, x.hi):
            for b in (y.lo, y.hi):
                assert q.lo.as_fraction() <= a.as_fraction() / b.as_fraction() <= q.hi.as_fraction()

    @given(intervals, intervals, precisions)
    def test_quad_step_sound(self, x, c, p):
        out = iv_quad_step(x, c, p)
        for v in (x.lo, x.mid(), x.hi):
            for w in (c.lo, c.hi):
                assert out.lo <= v * v + w <= out.hi

    @given(intervals)
    def test_deriv_enclosure(self, x):
        d = iv_deriv_enclosure(x)
        assert d.lo == x.lo.scale2(1) and d.hi == x.hi.scale2(1)

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            Interval(Dyadic(1), Dyadic(0))

    @given(intervals, intervals)
    def test_intersect_hull(self, x, y):
        h = x.hull(y)
        assert h.contains_interval(x) and h.contains_interval(y)
        z = x.intersect(y)
        if z is None:
            assert x.disjoint(y)
        else:
            assert x.contains_interval(z) and y.contains_interval(z)
