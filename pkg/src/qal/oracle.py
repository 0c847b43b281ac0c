"""Parameter-access oracles with cost accounting.

An oracle for a real c answers precision-m queries with an element of D_m
within 2^-(m-1) of c, and every query at precision m is charged m cost units
to the computation's ledger -- including cache hits, so replays are charged
identically to first runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dyadic import ZERO, Dyadic, Interval, dy_max, dy_min

DEFAULT_PRECISION_CAP = 4096


class OracleFault(Exception):
    """A refiner could not honor its construction contract.

    Raised instead of ever returning an answer that might violate the
    oracle's distance guarantee.
    """


@dataclass
class QueryLedger:
    """Oracle-cost accounting: total units, max precision, full query log."""

    total_units: int = 0
    max_precision: int = 0
    log: list = field(default_factory=list)

    def charge(self, m: int, answer: Dyadic):
        self.total_units += m
        self.max_precision = max(self.max_precision, m)
        self.log.append((m, answer))

    @property
    def query_count(self) -> int:
        return len(self.log)


@dataclass(frozen=True)
class LedgerReport:
    total_units: int
    max_precision: int
    query_count: int


def ledger_report(ledger: QueryLedger) -> LedgerReport:
    return LedgerReport(ledger.total_units, ledger.max_precision, ledger.query_count)


class ParamOracle:
    """Base oracle: caching, the query contract, and derived enclosures.

    Subclasses implement _answer(m) -> element of D_m within 2^-(m-1) of c.
    known_critical_period, when set by a construction that guarantees
    P_c^n(0) = 0, lets combinatorial code emit exact 'C' symbols.
    """

    spec: str = "?"
    known_critical_period: int | None = None

    def __init__(self):
        self._cache: dict[int, Dyadic] = {}

    def _answer(self, m: int) -> Dyadic:
        raise NotImplementedError

    def query(self, m: int, ledger: QueryLedger | None = None) -> Dyadic:
        if m < 1:
            raise ValueError("query precision must be >= 1")
        if m not in self._cache:
            self._cache[m] = self._answer(m)
        ans = self._cache[m]
        if ledger is not None:
            ledger.charge(m, ans)
        return ans

    def enclosure(self, m: int, ledger: QueryLedger | None = None) -> Interval:
        """Sound bracket for c derived from one contract-level query."""
        a = self.query(m, ledger)
        slack = Dyadic(1, -(m - 1))
        return Interval(a - slack, a + slack)


def query(o: ParamOracle, ledger: QueryLedger, m: int) -> Dyadic:
    return o.query(m, ledger)


class ExactOracle(ParamOracle):
    """Oracle for a parameter that is itself an exact dyadic."""

    def __init__(self, value: Dyadic):
        super().__init__()
        self.value = value
        self.spec = f"exact:{value}"
        self.known_critical_period = _exact_critical_period(value)

    def _answer(self, m: int) -> Dyadic:
        return self.value.round(m)

    def enclosure(self, m: int, ledger: QueryLedger | None = None) -> Interval:
        # Still answers (and charges) through the query path; the bracket is
        # the generic contract bracket, so downstream certificates never
        # depend on exactness they could not observe.
        return super().enclosure(m, ledger)


def oracle_exact(d: Dyadic) -> ParamOracle:
    return ExactOracle(d)


def _exact_critical_period(c: Dyadic, max_steps: int = 64,
                           max_bits: int = 1 << 14) -> int | None:
    """Exact-arithmetic check for P_c^k(0) = 0; only possible for dyadic c."""
    x = ZERO
    for k in range(1, max_steps + 1):
        x = x * x + c
        if x == ZERO:
            return k
        if abs(x.man).bit_length() > max_bits or abs(x) > _TWO:
            return None
    return None


_TWO = Dyadic(2)


class RefinerOracle(ParamOracle):
    """Oracle backed by an interval refiner converging to a real c.

    The refiner maintains a bracket and must be able to shrink it below any
    requested width; answers are midpoints rounded to the grid.
    """

    def __init__(self):
        super().__init__()
        self.bracket: Interval | None = None

    def _refine_to(self, width_exp: int):
        """Shrink self.bracket to width < 2^-width_exp."""
        raise NotImplementedError

    def _answer(self, m: int) -> Dyadic:
        self._refine_to(m + 1)
        # |mid - c| <= 2^-(m+2); grid rounding adds <= 2^-(m+1): total < 2^-(m-1)
        return self.bracket.mid().round(m)


class BisectOracle(RefinerOracle):
    """Sign-change bisection refiner.

    pred(x: Dyadic, p: int) -> -1 | 0 | +1 evaluates a sign certificate for
    the defining function at working precision p; 0 means undecided.  The
    bracket endpoints must carry certain opposite signs.
    """

    def __init__(self, pred, bracket: Interval, precision_cap: int = DEFAULT_PRECISION_CAP,
                 spec: str = "bisect"):
        super().__init__()
        self.pred = pred
        self.precision_cap = precision_cap
        self.spec = spec
        p = 64
        slo = self._sign(bracket.lo, p)
        shi = self._sign(bracket.hi, p)
        if slo == 0 or shi == 0 or slo == shi:
            raise OracleFault(
                f"no certified sign change on {bracket} (signs {slo},{shi})")
        self.bracket = bracket
        self._slo = slo

    def _sign(self, x: Dyadic, p: int) -> int:
        while True:
            s = self.pred(x, p)
            if s != 0 or p >= self.precision_cap:
                return s
            p *= 2

    def _refine_to(self, width_exp: int):
        target = Dyadic(1, -width_exp)
        while self.bracket.width() >= target:
            lo, hi = self.bracket.lo, self.bracket.hi
            mid = self.bracket.mid()
            s = self._sign(mid, 64)
            if s == 0:
                # Undecided exactly at mid (e.g. mid is the root): try two
                # off-center probes; keeping either still shrinks by 1/4.
                q = self.bracket.width().scale2(-2)
                for probe in (mid - q, mid + q):
                    s = self._sign(probe, 64)
                    if s != 0:
                        mid = probe
                        break
                else:
                    raise OracleFault(
                        f"sign undecided near {mid} at precision cap")
            if s == self._slo:
                self.bracket = Interval(mid, hi)
            else:
                self.bracket = Interval(lo, mid)


def oracle_bisect(pred, bracket: Interval, precision_cap: int = DEFAULT_PRECISION_CAP,
                  spec: str = "bisect") -> ParamOracle:
    return BisectOracle(pred, bracket, precision_cap, spec)


def oracle_newton(func, bracket: Interval, precision_cap: int = DEFAULT_PRECISION_CAP,
                  spec: str = "newton") -> ParamOracle:
    return IntervalNewtonOracle(func, bracket, precision_cap, spec)


class IntervalNewtonOracle(RefinerOracle):
    """Refiner for a simple root of F using interval Newton with bisection
    fallback.

    func(X: Interval, p: int) -> (F_enclosure, dF_enclosure) must enclose the
    defining function and its derivative over X.
    """

    def __init__(self, func, bracket: Interval, precision_cap: int = DEFAULT_PRECISION_CAP,
                 spec: str = "newton"):
        super().__init__()
        self.func = func
        self.precision_cap = precision_cap
        self.spec = spec
        self._p = 64
        if self._sign_at(bracket.lo) * self._sign_at(bracket.hi) != -1:
            raise OracleFault(f"no certified sign change on {bracket}")
        self._slo = self._sign_at(bracket.lo)
        self.bracket = bracket

    def _sign_at(self, x: Dyadic) -> int:
        p = self._p
        while True:
            f, _ = self.func(Interval.point(x), p)
            if f.lo > ZERO:
                return 1
            if f.hi < ZERO:
                return -1
            if p >= self.precision_cap:
                return 0
            p *= 2

    def _refine_to(self, width_exp: int):
        target = Dyadic(1, -width_exp)
        stall = 0
        while self.bracket.width() >= target:
            X = self.bracket
            f_mid, _ = self.func(Interval.point(X.mid()), self._p)
            _, df = self.func(X, self._p)
            stepped = False
            if not df.contains_zero():
                # N(X) = mid - F(mid)/F'(X), intersected with X
                corr = f_mid.divide(df, self._p)
                n_lo = X.mid() - corr.hi
                n_hi = X.mid() - corr.lo
                nxt = Interval(dy_min(n_lo, n_hi), dy_max(n_lo, n_hi)).intersect(X)
                if nxt is None:
                    raise OracleFault("interval Newton emptied the bracket")
                if nxt.width() < X.width():
                    self.bracket = nxt
                    stepped = True
            if not stepped:
                # bisection fallback on the certified sign change
                mid = X.mid()
                s = self._sign_at(mid)
                if s == 0:
                    q = X.width().scale2(-2)
                    for probe in (mid - q, mid + q):
                        s = self._sign_at(probe)
                        if s != 0:
                            mid = probe
                            break
                    else:
                        if self._p >= self.precision_cap:
                            raise OracleFault("sign undecided at precision cap")
                        self._p *= 2
                        continue
                if s == self._slo:
                    self.bracket = Interval(mid, X.hi)
                else:
                    self.bracket = Interval(X.lo, mid)
            if self.bracket.width() >= X.width():
                stall += 1
                if stall > 4:
                    if self._p >= self.precision_cap:
                        raise OracleFault("refiner stalled at precision cap")
                    self._p *= 2
                    stall = 0
            else:
                stall = 0


class WorstCaseOracle(ParamOracle):
    """Adversarial wrapper: answers with a far admissible grid element.

    Downstream certified results must stay correct under any contract-level
    oracle; this wrapper exercises that in tests.
    """

    def __init__(self, inner: ParamOracle):
        super().__init__()
        self.inner = inner
        self.spec = f"worst({inner.spec})"
        self.known_critical_period = inner.known_critical_period

    def _answer(self, m: int) -> Dyadic:
        near = self.inner.query(m + 2)
        # |near - c| < 2^-(m+1); offset by 2^-m, alternating side by parity:
        # |answer - c| <= 2^-m + 2^-(m+1) = 1.5 * 2^-m < 2^-(m-1).
        off = Dyadic(1 if m % 2 == 0 else -1, -m)
        return near.round(m) + off
