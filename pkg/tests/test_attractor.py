"""Classification, certified approximation, pixel queries, rendering."""

import random
from fractions import Fraction

import pytest

from qal.attractor import (ApproximationFailed, Budget, Hints, approximate,
                           classify, pixel_query, render)
from qal.dyadic import Dyadic, Interval
from qal.oracle import QueryLedger, WorstCaseOracle, oracle_exact

NEG_ONE = Dyadic(-1)
QUARTER = Dyadic(1, -2)


def hausdorff(a, b) -> Fraction:
    """Exact Hausdorff distance between two finite dyadic point sets."""
    fa = [p.as_fraction() for p in a]
    fb = [p.as_fraction() for p in b]
    d = Fraction(0)
    for xs, ys in ((fa, fb), (fb, fa)):
        for x in xs:
            d = max(d, min(abs(x - y) for y in ys))
    return d


class TestClassify:
    def test_superattracting_cycles(self):
        assert classify(oracle_exact(Dyadic(0))).describe() == \
            "LimitCycle superattracting period=1"
        assert classify(oracle_exact(NEG_ONE)).describe() == \
            "LimitCycle superattracting period=2"

    def test_attracting_fixed_point(self):
        cls = classify(oracle_exact(Dyadic(-1, -1)))
        assert (cls.variant, cls.kind, cls.period) == \
            ("limit-cycle", "attracting", 1)

    def test_parabolic_with_hints(self):
        cls = classify(oracle_exact(QUARTER), Hints(1, "1c"))
        assert cls.describe() == "LimitCycle parabolic period=1"
        cls3 = classify(oracle_exact(Dyadic(-7, -2)), Hints(3, "1c"))
        assert (cls3.kind, cls3.period) == ("parabolic", 3)

    def test_interval_cycle_with_hints(self):
        cls = classify(oracle_exact(Dyadic(-2)), Hints(1, "2"))
        assert cls.describe() == "IntervalCycle period=1"

    def test_hint_validation(self):
        with pytest.raises(ValueError):
            Hints(case="4")
        with pytest.raises(ValueError):
            classify(oracle_exact(QUARTER), Hints(case="1c"))

    def test_starved_budget_returns_none(self):
        cls = classify(oracle_exact(Dyadic(-7, -2)), Hints(3, "1c"),
                       Budget(max_precision=16))
        assert cls is None


class TestApproximate:
    def test_fixed_critical_point(self):
        out = approximate(oracle_exact(Dyadic(0)), 16)
        assert out.points == (Dyadic(0),)

    def test_two_cycle_is_exact(self):
        out = approximate(oracle_exact(NEG_ONE), 10)
        assert out.points == (NEG_ONE, Dyadic(0))
        assert out.trace["case"] == "1b"

    def test_attracting_fixed_point_contract(self):
        out = approximate(oracle_exact(Dyadic(-1, -1)), 14)
        assert len(out.points) == 1
        # (1 - sqrt(3))/2 to 30 digits, as a tight rational bracket
        lo = Fraction(-366025403784438646763723170753, 10 ** 30)
        hi = lo + Fraction(1, 10 ** 28)
        x = out.points[0].as_fraction()
        assert lo - Fraction(1, 1 << 14) < x < hi + Fraction(1, 1 << 14)

    def test_parabolic_with_hints(self):
        out = approximate(oracle_exact(QUARTER), 20, Hints(1, "1c"))
        assert len(out.points) == 1
        assert abs(out.points[0].as_fraction() - Fraction(1, 2)) < Fraction(1, 1 << 20)

    def test_chebyshev_full_interval(self):
        out = approximate(oracle_exact(Dyadic(-2)), 3, Hints(1, "2"))
        pts = [p.as_fraction() for p in out.points]
        assert abs(pts[0] + 2) <= Fraction(1, 8)
        assert abs(pts[-1] - 2) <= Fraction(1, 8)
        assert max(b - a for a, b in zip(pts, pts[1:])) <= Fraction(1, 8)
        assert all(p.in_grid(5) for p in out.points)

    def test_points_sorted_and_in_grid(self):
        out = approximate(oracle_exact(NEG_ONE), 6)
        assert list(out.points) == sorted(out.points, key=lambda d: d.as_fraction())
        assert all(p.in_grid(8) for p in out.points)

    def test_refinement_consistency(self):
        o = oracle_exact(Dyadic.from_float(-1.1))  # attracting 2-cycle
        outs = {n: approximate(o, n) for n in range(4, 9)}
        for n in range(4, 8):
            d = hausdorff(outs[n].points, outs[n + 1].points)
            assert d <= Fraction(1, 1 << n) + Fraction(1, 1 << (n + 1))

    def test_worst_case_oracle_same_contract(self):
        out = approximate(WorstCaseOracle(oracle_exact(Dyadic(-1, -1))), 12)
        assert len(out.points) == 1
        lo = Fraction(-3660254037844387, 10 ** 16)
        assert abs(out.points[0].as_fraction() - lo) < Fraction(1, 1 << 11)

    def test_starved_budget_fails_honestly(self):
        with pytest.raises(ApproximationFailed):
            approximate(oracle_exact(Dyadic(-7, -2)), 8, Hints(3, "1c"),
                        Budget(max_precision=16))

    def test_exact_chain_needs_no_precision(self):
        # the c = -2 certificate is set-exact, so a tiny precision budget
        # is still enough to certify it
        out = approximate(oracle_exact(Dyadic(-2)), 4, Hints(1, "2"),
                          Budget(max_precision=16))
        assert out.points[0] == Dyadic(-2) and out.points[-1] == Dyadic(2)

    def test_resolution_validation(self):
        with pytest.raises(ValueError):
            approximate(oracle_exact(Dyadic(0)), 0)


class TestPixelQuery:
    def test_two_cycle_band(self):
        o = oracle_exact(NEG_ONE)
        assert pixel_query(o, 2, Dyadic(0)) == 1
        assert pixel_query(o, 2, Dyadic(-1, -1)) == 0
        assert pixel_query(o, 2, Dyadic(1, -2)) == 1

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            pixel_query(oracle_exact(NEG_ONE), 2, Dyadic(1, -3))

    def test_band_soundness_random_pixels(self):
        # A = {0, -1} exactly; verify both certified sides of the contract
        o = oracle_exact(NEG_ONE)
        rng = random.Random(7)
        n = 8
        near, far = Fraction(1, 1 << n), Fraction(2, 1 << n)
        for _ in range(400):
            j = rng.randint(-(2 << n), 2 << n)
            x = Fraction(j, 1 << n)
            true_dist = min(abs(x), abs(x + 1))
            bit = pixel_query(o, n, Dyadic(j, -n))
            if bit == 0:
                assert true_dist > near
            else:
                assert true_dist < far


class TestRender:
    def test_known_row(self):
        img = render(oracle_exact(NEG_ONE), 2,
                     Interval(Dyadic(-2), Dyadic(0)))
        header, _, rest = img.partition(b"255\n")
        assert header.startswith(b"P5\n")
        assert b"9 1" in header
        assert rest == bytes([255, 255, 255, 0, 0, 0, 255, 0, 0])

    def test_byte_identical_across_runs(self):
        view = Interval(Dyadic(-2), Dyadic(1, -2))
        a = render(oracle_exact(Dyadic(-1, -1)), 4, view)
        b = render(oracle_exact(Dyadic(-1, -1)), 4, view)
        assert a == b

    def test_empty_viewport_rejected(self):
        tiny = Interval(Dyadic(1, -8), Dyadic(3, -8))
        with pytest.raises(ValueError):
            render(oracle_exact(NEG_ONE), 2, tiny)


class TestLedgerAccounting:
    def test_runs_charge_the_ledger(self):
        led = QueryLedger()
        approximate(oracle_exact(NEG_ONE), 8, ledger=led)
        assert led.total_units > 0
        assert led.max_precision >= 8
