"""Critical orbits, cycle certification, periodic points, escape times."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qal.dyadic import NEAREST, Dyadic, Interval
from qal.dynamics import (ParameterRangeError, TrackedInterval,
                          certify_attracting_cycle, check_param,
                          critical_orbit, escape_time,
                          isolate_periodic_points, iter_eval, recheck_cycle)
from qal.oracle import WorstCaseOracle, oracle_exact

params_in_range = st.builds(
    lambda k: Dyadic(k, -52),
    st.integers(min_value=-(2 << 52), max_value=1 << 50))


def pointwise_orbit(c: Dyadic, steps: int, p: int) -> list:
    """Independent reference: nearest-rounded pointwise orbit at precision p."""
    xs, x = [Dyadic(0)], Dyadic(0)
    for _ in range(steps):
        x = (x * x + c).round(p, NEAREST)
        xs.append(x)
    return xs


class TestCriticalOrbit:
    @given(params_in_range, st.integers(min_value=1, max_value=200))
    @settings(max_examples=60, deadline=None)
    def test_enclosure_soundness(self, c, steps):
        enc = critical_orbit(oracle_exact(c), steps, 96)
        ref = pointwise_orbit(c, steps, 384)
        pad = Dyadic(1, -300)  # reference rounding slack per step, summed
        for k, x in enumerate(ref):
            step = enc.steps[k]
            assert step.lo - pad.scale2(k.bit_length() + 4) <= x <= step.hi + pad.scale2(k.bit_length() + 4)

    def test_blowup_flagged_outside_range(self):
        # c = 1 escapes; widths explode once the orbit passes 2
        enc = critical_orbit(oracle_exact(Dyadic(1)), 64, 64)
        assert enc.blown_up

    def test_check_param(self):
        assert check_param(oracle_exact(Dyadic(-1))).contains(Dyadic(-1))
        with pytest.raises(ParameterRangeError):
            check_param(oracle_exact(Dyadic(1)))
        with pytest.raises(ParameterRangeError):
            check_param(oracle_exact(Dyadic(-3)))


class TestTrackedImage:
    @given(st.floats(min_value=-2.0, max_value=0.25),
           st.floats(min_value=-2.0, max_value=2.0),
           st.floats(min_value=-2.0, max_value=2.0),
           st.floats(min_value=0.0, max_value=1.0))
    @settings(max_examples=120, deadline=None)
    def test_image_is_a_set_image(self, cf, af, bf, t):
        c = Interval.point(Dyadic.from_float(cf))
        lo, hi = min(af, bf), max(af, bf)
        j = TrackedInterval.from_exact(Dyadic.from_float(lo),
                                       Dyadic.from_float(hi))
        img = j.image(c, 128)
        x = Dyadic.from_float(lo + t * (hi - lo))
        assert img.outer().contains(x * x + c.lo)
        # endpoints of the true image stay inside the outer enclosure (exact)
        a, b = Dyadic.from_float(lo), Dyadic.from_float(hi)
        ends = [a * a + c.lo, b * b + c.lo]
        if lo <= 0 <= hi:
            ends.append(c.lo)
        assert img.outer().contains(min(ends))
        assert img.outer().contains(max(ends))


class TestCycleCertification:
    def test_superattracting_fixed_point(self):
        cert = certify_attracting_cycle(oracle_exact(Dyadic(0)))
        assert cert.period == 1 and cert.kind == "superattracting"

    def test_attracting_fixed_point(self):
        cert = certify_attracting_cycle(oracle_exact(Dyadic(-1, -1)))
        assert cert.period == 1 and cert.kind == "attracting"
        # the fixed point is (1 - sqrt(3))/2; the enclosure can be tighter
        # than a float64, so test nearness rather than containment
        ref = Dyadic.from_float(-0.36602540378443865)
        slack = Dyadic(1, -50)
        assert cert.point_enclosures[0].intersect(
            Interval(ref - slack, ref + slack)) is not None

    def test_superattracting_two_cycle(self):
        cert = certify_attracting_cycle(oracle_exact(Dyadic(-1)))
        assert cert.period == 2 and cert.kind == "superattracting"

    def test_parabolic_is_never_certified_attracting(self):
        # c = -7/4: multiplier of the 3-cycle is exactly 1
        assert certify_attracting_cycle(oracle_exact(Dyadic(-7, -2)),
                                        p_cap=512) is None

    def test_chaotic_parameter_returns_none(self):
        assert certify_attracting_cycle(oracle_exact(Dyadic(-2)),
                                        p_cap=256) is None

    def test_certificate_survives_adversarial_oracle(self):
        o = WorstCaseOracle(oracle_exact(Dyadic(-1)))
        cert = certify_attracting_cycle(o)
        assert cert.period == 2
        assert any(e.contains(Dyadic(0)) for e in cert.point_enclosures)
        assert any(e.contains(Dyadic(-1)) for e in cert.point_enclosures)

    def test_recheck_at_doubled_precision(self):
        o = oracle_exact(Dyadic(-1, -1))
        cert = certify_attracting_cycle(o)
        assert recheck_cycle(cert, o, 256)


def float_root_count(c: float, n: int, grid: int = 1 << 16) -> int:
    """Independent sign-scan count of P^n(w) = w roots on [-2, 2]."""
    def g(w):
        v = w
        for _ in range(n):
            v = v * v + c
        return v - w
    count, prev = 0, g(-2.0)
    for j in range(1, grid + 1):
        cur = g(-2.0 + 4.0 * j / grid)
        if prev == 0.0 or prev * cur < 0:
            count += 1
        prev = cur
    return count


class TestPeriodicPoints:
    @pytest.mark.parametrize("c,n", [(-1.0, 1), (-1.0, 2), (0.0, 1),
                                     (-1.3, 2), (-1.76, 3)])
    def test_count_matches_sign_scan(self, c, n):
        pts = isolate_periodic_points(oracle_exact(Dyadic.from_float(c)), n, 64)
        assert len(pts) == float_root_count(c, n)
        assert all(p.unique for p in pts)

    def test_enclosures_disjoint_and_refined(self):
        pts = isolate_periodic_points(oracle_exact(Dyadic(-1)), 2, 64)
        encs = sorted(pts, key=lambda p: p.enclosure.lo.as_fraction())
        for a, b in zip(encs, encs[1:]):
            assert a.enclosure.disjoint(b.enclosure)
        # the superattracting 2-cycle {0, -1} appears among the four roots
        assert any(p.enclosure.contains(Dyadic(0)) for p in pts)
        assert any(p.enclosure.contains(Dyadic(-1)) for p in pts)

    def test_multiplier_encloses_truth(self):
        # at c = 0 the fixed point 0 has multiplier exactly 0
        pts = isolate_periodic_points(oracle_exact(Dyadic(0)), 1, 64)
        zero = [p for p in pts if p.enclosure.contains(Dyadic(0))]
        assert zero and zero[0].multiplier.contains(Dyadic(0))


class TestIterEval:
    @given(st.floats(min_value=-1.9, max_value=0.2),
           st.floats(min_value=-1.5, max_value=1.5),
           st.integers(min_value=1, max_value=6))
    @settings(max_examples=80, deadline=None)
    def test_value_and_derivative_sound(self, cf, xf, k):
        c = Interval.point(Dyadic.from_float(cf))
        box = Interval(Dyadic.from_float(xf - 1e-3), Dyadic.from_float(xf + 1e-3))
        val, der = iter_eval(box, c, k, 128)
        v, dv = xf, 1.0
        for _ in range(k):
            dv *= 2 * v
            v = v * v + cf
        if abs(v) < 1e12:
            assert float(val.lo) - 1e-6 <= v <= float(val.hi) + 1e-6
        if abs(dv) < 1e12:
            assert float(der.lo) - 1e-6 <= dv <= float(der.hi) + 1e-6


GATE = Interval(Dyadic(-1, -2), Dyadic(1, -2))


class TestEscapeTime:
    def test_unit_epsilon_escapes_in_one_step(self):
        assert escape_time(Dyadic(1), GATE) == 1

    def test_sqrt_scaling_law(self):
        eps = Dyadic.parse("7*2^-16")  # about 1.07e-4
        n = escape_time(eps, GATE)
        assert 2.8 <= n * float(eps) ** 0.5 <= 3.3

    def test_quarter_epsilon_doubles_count(self):
        eps = Dyadic(13, -17)
        n1 = escape_time(eps, GATE)
        n2 = escape_time(eps.scale2(-2), GATE)
        assert 1.8 <= n2 / n1 <= 2.2

    def test_input_validation(self):
        with pytest.raises(ValueError):
            escape_time(Dyadic(0), GATE)
        with pytest.raises(ValueError):
            escape_time(Dyadic(1), Interval(Dyadic(-1, -2), Dyadic(1, -3)))
