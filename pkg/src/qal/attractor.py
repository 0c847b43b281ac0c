"""Attractor classification, certified 2^-n approximation, pixel queries.

The three-way trichotomy (limit cycle / cycle of intervals / Feigenbaum-like
Cantor attractor) is decided by certificates: contraction traps for cycles,
interval-chain invariance for interval cycles, and a budgeted tower of
certified renormalization windows for the Cantor case.  Every output set
carries the Hausdorff contract dist_H(C_n, A) < 2^-n; runs that cannot
certify return an explicit failure, never a guess.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dyadic import NEAREST, ZERO, Dyadic, Interval, dy_max, dy_min
from .dynamics import (TrackedInterval, certify_attracting_cycle, check_param,
                       isolate_periodic_points, iter_eval, iv_quad_step,
                       precision_cap)
from .oracle import ExactOracle, OracleFault, ParamOracle, QueryLedger
from .renorm import CombinatorialType

ONE = Dyadic(1)


class ApproximationFailed(RuntimeError):
    """Budget exhausted before a certificate was reached."""


@dataclass(frozen=True)
class Hints:
    """Non-uniform information: the cycle period and/or the case tag."""

    period: int | None = None
    case: str | None = None  # 1a | 1b | 1c | 2 | 3

    def __post_init__(self):
        if self.period is not None and self.period < 1:
            raise ValueError("hint period must be >= 1")
        if self.case not in (None, "1a", "1b", "1c", "2", "3"):
            raise ValueError(f"unknown case tag {self.case!r}")


@dataclass(frozen=True)
class Budget:
    max_period: int = 32
    max_precision: int | None = None
    steps: int = 200_000
    depth: int = 5  # window-tower levels for case 3

    def p_cap(self) -> int:
        # an explicit budget wins over the environment's default cap
        return self.max_precision or precision_cap()


@dataclass(frozen=True)
class AttractorClass:
    variant: str  # limit-cycle | interval-cycle | feigenbaum-like
    kind: str | None = None  # attracting | superattracting | parabolic
    period: int | None = None
    prefix: tuple = ()  # CombinatorialType per tower level (case 3)

    def describe(self) -> str:
        if self.variant == "limit-cycle":
            return f"LimitCycle {self.kind} period={self.period}"
        if self.variant == "interval-cycle":
            return f"IntervalCycle period={self.period}"
        types = " ".join(
            f"({t.period}:{','.join(map(str, t.perm)) if t.perm else '?'})"
            for t in self.prefix)
        return f"FeigenbaumLike depth={len(self.prefix)} types={types}"


@dataclass(frozen=True)
class ApproxSet:
    resolution: int
    points: tuple  # sorted distinct Dyadic in D_{n+2}
    trace: dict = field(compare=False, default_factory=dict)


# ---------------------------------------------------------------------------
# Classification

def classify(o: ParamOracle, hints: Hints | None = None,
             budget: Budget | None = None,
             ledger: QueryLedger | None = None) -> AttractorClass | None:
    """Certified attractor class, or None when the budget gives out."""
    check_param(o, ledger)
    h = hints or Hints()
    b = budget or Budget()
    if h.case in (None, "1b") and o.known_critical_period:
        return AttractorClass("limit-cycle", "superattracting",
                              o.known_critical_period)
    if h.case == "1b":
        return None
    if h.case == "1c":
        if h.period is None:
            raise ValueError("case 1c needs a period hint")
        if _parabolic_points(o, h.period, b, ledger) is not None:
            return AttractorClass("limit-cycle", "parabolic", h.period)
        return None
    if h.case == "2":
        if h.period is None:
            raise ValueError("case 2 needs a period hint")
        if _interval_chain(o, h.period, 10, b, ledger) is not None:
            return AttractorClass("interval-cycle", None, h.period)
        return None
    if h.case in (None, "1a"):
        try:
            cert = certify_attracting_cycle(o, b.max_period, b.steps, ledger,
                                            p_cap=min(512, b.p_cap()))
        except OracleFault:
            cert = None  # oracle cannot reach the precision; try deeper cases
        if cert is not None and cert.kind in ("attracting", "superattracting"):
            return AttractorClass("limit-cycle", cert.kind, cert.period)
        if h.case == "1a":
            return None
    if h.period is not None:
        if _parabolic_points(o, h.period, b, ledger) is not None:
            return AttractorClass("limit-cycle", "parabolic", h.period)
        if _interval_chain(o, h.period, 10, b, ledger) is not None:
            return AttractorClass("interval-cycle", None, h.period)
    prefix = _window_tower(o, b, ledger)
    if prefix:
        return AttractorClass("feigenbaum-like", prefix=tuple(prefix))
    return None


def _orbit_enclosures(o: ParamOracle, steps: int, p: int,
                      ledger: QueryLedger | None, m: int | None = None) -> list:
    """[0, P(0), ..., P^steps(0)]; the oracle is read at every step.

    Reading c once per application of P is the cost model's intent: every
    use of the parameter at precision p is charged, cache hits included.
    m overrides the oracle precision when it should differ from the
    arithmetic precision p (oracles with expensive deep queries).
    """
    x = Interval.point(ZERO)
    out = [x]
    for _ in range(steps):
        c = o.enclosure(m or p, ledger)
        x = iv_quad_step(x, c, p)
        out.append(x)
    return out


def _parabolic_points(o: ParamOracle, q: int, b: Budget,
                      ledger: QueryLedger | None,
                      width_exp: int = 10) -> list | None:
    """Case 1c: period-q point enclosures that survive the repelling filter.

    Isolates all solutions of P^q(w) = w, discards every enclosure whose
    derivative enclosure certifies |DP^q| > 1, and returns the remainder
    once each surviving enclosure is narrower than 2^-width_exp.  The
    parabolic interpretation of the survivors is the hint's claim; the
    certificates here are the isolation and the expansion filter.
    """
    p = max(64, 2 * (width_exp + 4))
    target = Dyadic(1, -width_exp)
    while p <= b.p_cap():
        pts = isolate_periodic_points(o, q, p, ledger)
        keep = [pt for pt in pts if not pt.multiplier.mig() > ONE]
        if keep and all(pt.enclosure.width() < target for pt in keep):
            return keep
        p *= 2
    return None


_EXACT_BITS = 4096


def _exact_chain(c: Dyadic, q: int) -> list | None:
    """Set-exact invariant chain for an exactly dyadic parameter, or None.

    J_0 = [P^q(0), P^2q(0)] and its images are computed in exact dyadic
    arithmetic (square() is set-exact), so invariance and the certificate's
    endpoints carry no rounding slack at all.  Falls back to None when the
    exact mantissas grow past a sanity bound.
    """
    x, orbit = ZERO, [ZERO]
    for _ in range(2 * q):
        x = x * x + c
        if abs(x.man).bit_length() > _EXACT_BITS:
            return None
        orbit.append(x)
    a, z = orbit[q], orbit[2 * q]
    if a == z:
        return None
    chain = [Interval(dy_min(a, z), dy_max(a, z))]
    for _ in range(q):
        img = chain[-1].square() + Interval.point(c)
        if max(abs(img.lo.man).bit_length(),
               abs(img.hi.man).bit_length()) > _EXACT_BITS:
            return None
        chain.append(img)
    return chain if chain[0].contains_interval(chain[q]) else None


def _snap_exact_periodic(c: Dyadic, q: int, enc: Interval) -> Interval:
    """Collapse enc to an exact point when its periodic point is dyadic.

    enc isolates one solution of P^q(w) = w; if a dyadic w inside enc
    satisfies the equation exactly, it is that solution.
    """
    for j in range(1, 64):
        w = enc.mid().round(j)
        if not enc.contains(w):
            continue
        x, ok = w, True
        for _ in range(q):
            x = x * x + c
            if abs(x.man).bit_length() > _EXACT_BITS:
                ok = False
                break
        if ok and x == w:
            return Interval.point(w)
    return enc


def _interval_chain(o: ParamOracle, q: int, slack_exp: int, b: Budget,
                    ledger: QueryLedger | None):
    """Case 2: tracked chain J_0..J_{q-1} with J_0 = [P^q(0), P^2q(0)].

    Returns (chain, precision) once the wrapped image lands back inside
    J_0 up to tolerance 2^-slack_exp and every endpoint is localized to
    that tolerance; None when precision runs out.  Exact invariance is not
    oracle-decidable (the bracket never has zero width), so the invariance
    certificate carries the stated tolerance.
    """
    if isinstance(o, ExactOracle):
        exact = _exact_chain(o.value, q)
        if exact is not None:
            o.query(max(8, slack_exp), ledger)  # the run still reads c
            return [TrackedInterval.from_exact(k.lo, k.hi)
                    for k in exact[:q]], 0
    tol = Dyadic(1, -slack_exp)
    p = max(64, 4 * slack_exp)
    while p <= b.p_cap():
        orbit = _orbit_enclosures(o, 2 * q, p, ledger)
        a, z = orbit[q], orbit[2 * q]
        if a.hi < z.lo:
            j = TrackedInterval(a, z)
        elif z.hi < a.lo:
            j = TrackedInterval(z, a)
        else:
            p *= 2
            continue
        chain = [j]
        c = o.enclosure(p, ledger)
        for _ in range(q):
            chain.append(chain[-1].image(c, p))
        wrap = chain[q]
        inflated = Interval(chain[0].outer().lo - tol,
                            chain[0].outer().hi + tol)
        slack = max(t.endpoint_slack() for t in chain)
        if inflated.contains_interval(wrap.outer()) and slack < tol:
            return chain[:q], p
        p *= 2
    return None


_WINDOW_CACHE: dict = {}


def _certified_window(period: int, enc: Interval, with_tau: bool):
    """window_endpoints memoized on the center enclosure (oracle-free)."""
    from .params import window_endpoints
    key = (period, enc.lo, enc.hi, with_tau)
    if key not in _WINDOW_CACHE:
        try:
            _WINDOW_CACHE[key] = window_endpoints(period, enc,
                                                  with_tau=with_tau)
        except OracleFault:
            _WINDOW_CACHE[key] = None
    return _WINDOW_CACHE[key]


def _window_tower(o: ParamOracle, b: Budget,
                  ledger: QueryLedger | None) -> list | None:
    """Case 3: certified renormalization windows of increasing period.

    Level by level, searches for a window of period (current period) * q
    whose certified endpoint enclosures strictly bracket the oracle's c
    bracket, escalating oracle precision while the bracket straddles an
    endpoint.  Returns the list of per-level combinatorial types found
    within the depth budget.
    """
    from .params import _contract_root, _float_roots, _is_primitive
    m = 8
    m_cap = min(b.p_cap(), 4096)
    bracket = o.enclosure(m, ledger)
    prefix: list = []
    cur = None
    period = 1
    for level in range(b.depth):
        found = None
        for q in range(2, 9):
            p_abs = period * q
            if p_abs > max(b.max_period, 64):
                break
            if cur is None:
                lo = max(float(bracket.lo) - 1.0, -2.0)
                hi = min(float(bracket.hi) + 1.0, 0.25)
            else:
                lo, hi = float(cur.left.lo), float(cur.right.hi)
            c_mid = float(bracket.mid())
            cands = []
            for seed in _float_roots(p_abs, lo, hi, grid=2048):
                enc = _contract_root(seed, p_abs, 1e-5)
                if enc is None or not _is_primitive(enc, p_abs, 64):
                    continue
                cands.append(enc)
            cands.sort(key=lambda e: abs(float(e.mid()) - c_mid))
            for enc in cands:
                # candidates are tested tau-free; the combinatorial type is
                # only computed for the window that actually wins
                win = _certified_window(p_abs, enc, False)
                if win is None:
                    continue
                while True:
                    if (win.left.hi < bracket.lo
                            and bracket.hi < win.right.lo):
                        found = (win, q, enc)
                        break
                    if (bracket.hi < win.left.lo
                            or bracket.lo > win.right.hi):
                        break
                    if m >= m_cap:
                        return prefix or None  # undecidable at the budget
                    m *= 2
                    try:
                        bracket = o.enclosure(m, ledger)
                    except OracleFault:
                        return prefix or None
                if found:
                    break
            if found:
                break
        if found is None:
            break
        win, q, enc = found
        if q == 2:
            rel = CombinatorialType(2, (2, 1))
        else:
            full = _certified_window(period * q, enc, True) if level == 0 else None
            if full is not None and full.tau is not None:
                rel = full.tau
            else:
                rel = CombinatorialType(q, ())
        prefix.append(rel)
        cur, period = win, period * q
    return prefix or None


# ---------------------------------------------------------------------------
# Certified approximation

@dataclass
class _Certificate:
    """Per-run immutable distance certificate.

    kind "points": A equals the union of the point enclosures (each holds
    exactly one attractor point).  kind "intervals": A is contained in the
    union of outer intervals, each within `gap` of A everywhere; for case 2
    the inner intervals are certified subsets of A.
    """

    kind: str  # points | intervals
    enclosures: list  # Interval
    inners: list | None  # Interval or None per entry (case 2)
    gap: Dyadic  # bound on sup_{x in enclosure} dist(x, A)
    trace: dict


def _build_certificate(o: ParamOracle, n: int, hints: Hints | None,
                       budget: Budget | None,
                       ledger: QueryLedger | None) -> _Certificate:
    h = hints or Hints()
    b = budget or Budget()
    cls = classify(o, h, b, ledger)
    if cls is None:
        raise ApproximationFailed("classification undecided at the budget")
    if cls.variant == "limit-cycle":
        if cls.kind == "parabolic":
            pts = _parabolic_points(o, cls.period, b, ledger,
                                    width_exp=n + 3)
            if pts is None:
                raise ApproximationFailed("parabolic cycle not localized")
            encs = [pt.enclosure for pt in pts]
            if isinstance(o, ExactOracle):
                encs = [_snap_exact_periodic(o.value, cls.period, e)
                        for e in encs]
            trace = {"case": "1c", "period": cls.period}
        elif o.known_critical_period:
            encs = _exact_cycle(o, cls.period, n, b, ledger)
            trace = {"case": "1b", "period": cls.period}
        else:
            encs = _refined_cycle(o, cls.period, n, b, ledger)
            trace = {"case": "1a", "period": cls.period}
        gap = max(e.width() for e in encs)
        return _Certificate("points", encs, None, gap, trace)
    if cls.variant == "interval-cycle":
        got = _interval_chain(o, cls.period, n + 4, b, ledger)
        if got is None:
            raise ApproximationFailed("interval cycle not localized")
        chain, p = got
        encs = [t.outer() for t in chain]
        inners = [t.inner() for t in chain]
        gap = max(t.endpoint_slack() for t in chain)
        return _Certificate("intervals", encs, inners, gap,
                            {"case": "2", "period": cls.period,
                             "precision": p})
    return _nested_cycle_cover(o, n, cls, b, ledger)


def _exact_cycle(o: ParamOracle, q: int, n: int, b: Budget,
                 ledger: QueryLedger | None) -> list:
    """Case 1b: the superattracting cycle through the critical point.

    For an exactly dyadic parameter the orbit is computed exactly (it is
    finite and periodic, so mantissas stay bounded); otherwise enclosures
    are refined below 2^-(n+3).
    """
    if isinstance(o, ExactOracle):
        o.query(n + 3, ledger)  # bookkeeping: the run still reads c
        x, pts = ZERO, [ZERO]
        for _ in range(q - 1):
            x = x * x + o.value
            pts.append(x)
        return [Interval.point(x) for x in pts]
    target = Dyadic(1, -(n + 3))
    p = max(64, 2 * (n + 8))
    while p <= b.p_cap():
        orbit = _orbit_enclosures(o, q, p, ledger)
        if all(x.width() < target for x in orbit):
            return orbit[:q]
        p *= 2
    raise ApproximationFailed("critical orbit not localized")


def _refined_cycle(o: ParamOracle, q: int, n: int, b: Budget,
                   ledger: QueryLedger | None) -> list:
    """Case 1a: certify the cycle, then Newton-squeeze each point enclosure."""
    cert = certify_attracting_cycle(o, max(b.max_period, q), b.steps, ledger,
                                    p_cap=b.p_cap())
    if cert is None or cert.period != q:
        raise ApproximationFailed("attracting cycle lost during refinement")
    target = Dyadic(1, -(n + 3))
    p = max(64, 2 * (n + 8))
    out = []
    for enc in cert.point_enclosures:
        box, pp = enc, p
        while box.width() >= target:
            c = o.enclosure(pp, ledger)
            mid = box.mid()
            fm, _ = iter_eval(Interval.point(mid), c, q, pp)
            _, df = iter_eval(box, c, q, pp)
            dg = df - Interval.point(ONE)
            if dg.contains_zero():
                pp *= 2
                if pp > b.p_cap():
                    raise ApproximationFailed("cycle point not localized")
                continue
            corr = (fm - Interval.point(mid)).divide(dg, pp)
            nxt = Interval(mid - corr.hi, mid - corr.lo).intersect(box)
            if nxt is None or nxt.width() >= box.width():
                pp *= 2
                if pp > b.p_cap():
                    raise ApproximationFailed("cycle point not localized")
                continue
            box = nxt
        out.append(box)
    return out


def _trap_chain(c: Interval, bval: float, period: int, p: int):
    """Image chain of K_0 = [-b, b]; the chain if P^period(K_0) is strictly
    inside K_0, else None.

    A symmetric trap around the critical point is the right shape here: the
    critical value P^period(0) is a local extremum of P^period, so the top
    of the image sits strictly below b and the bottom, one fold away from
    the critical point, clears -b with room.  The hull of two orbit points
    maps exactly onto itself and can never certify.
    """
    enc = Interval.point(Dyadic.from_float(bval)).round_out(p)
    k0 = Interval(-enc.hi, enc.hi)
    chain = [k0]
    for _ in range(period):
        chain.append((chain[-1].square() + c).round_out(p))
    return chain if k0.strictly_contains(chain[period]) else None


def _nested_cycle_cover(o: ParamOracle, n: int, cls: AttractorClass,
                        b: Budget, ledger: QueryLedger | None) -> _Certificate:
    """Case 3: descend invariant interval cycles until diameters collapse.

    For period P the cover is a symmetric K_0 = [-b, b] around the critical
    point and its image chain; the certificate is P^P(K_0) strictly inside
    K_0, which makes the union forward invariant, hence a rigorous superset
    of A = omega(0), with A meeting every K_i (the critical orbit enters
    K_0 at every multiple of P and cycles through the rest).  Descends P
    until every component is narrower than 2^-(n+2).
    """
    target = Dyadic(1, -(n + 2))
    rel = [t.period for t in cls.prefix] or [2]
    periods, acc = [], 1
    for q in rel:
        acc *= q
        periods.append(acc)
    while periods[-1] * rel[-1] <= 1 << 14:
        periods.append(periods[-1] * rel[-1])
    last_err = "window tower exhausted before components collapsed"
    for P in periods:
        m = n + 10
        m_cap = min(n + 40, b.p_cap())
        chain = None
        exhausted = False
        while chain is None and m <= m_cap:
            c = None
            try:
                c = o.enclosure(m, ledger)
            except OracleFault:
                # clamp to the best precision the oracle still answers
                floor_m = m - 6
                while m > floor_m:
                    m -= 1
                    try:
                        c = o.enclosure(m, ledger)
                        break
                    except OracleFault:
                        continue
                if c is None:
                    break
                exhausted = True
            p = max(64, 4 * m)
            cf, x = float(c.mid()), 0.0
            for _ in range(P):
                x = x * x + cf
            for t in (1.025, 1.05, 1.1, 1.2, 1.35, 1.55, 1.8):
                chain = _trap_chain(c, t * abs(x), P, p)
                if chain is not None:
                    break
            else:
                if exhausted:
                    break
                m += 6  # fine steps: deep-ladder oracles double cost per bit
        if chain is None:
            last_err = f"period-{P} trap not certified below the precision cap"
            continue
        comps = chain[:P]
        diam = max(k.width() for k in comps)
        if diam < target:
            return _Certificate(
                "intervals", comps, None, diam,
                {"case": "3", "period": P, "precision": p,
                 "diameter": float(diam)})
        last_err = (f"components at period {P} have diameter "
                    f"{float(diam):.3g}")
    raise ApproximationFailed(last_err)


def _grid_indices(iv: Interval, n: int):
    """Index range (j0, j1) of the step-2^-(n+1) grid inside iv, or None."""
    step_exp = n + 1
    j0 = iv.lo.scale2(step_exp).ceil_int()
    j1 = iv.hi.scale2(step_exp).floor_int()
    return (j0, j1) if j0 <= j1 else None


def approximate(o: ParamOracle, n: int, hints: Hints | None = None,
                budget: Budget | None = None,
                ledger: QueryLedger | None = None) -> ApproxSet:
    """Certified C_n with dist_H(C_n, A) < 2^-n, points in D_{n+2}."""
    if n < 1:
        raise ValueError("resolution must be >= 1")
    cert = _build_certificate(o, n, hints, budget, ledger)
    if cert.kind == "points":
        pts = {enc.mid().round(n + 2, NEAREST) for enc in cert.enclosures}
    else:
        idx = set()  # integer multiples of 2^-(n+1); narrow leftovers apart
        extra = set()
        for enc in cert.enclosures:
            rng = _grid_indices(enc, n)
            if rng is None:
                extra.add(enc.mid().round(n + 2, NEAREST))
            else:
                idx.update(range(rng[0], rng[1] + 1))
        pts = {Dyadic(j, -(n + 1)) for j in idx} | extra
    return ApproxSet(n, _sorted_dyadics(pts), dict(cert.trace))


def _sorted_dyadics(pts) -> tuple:
    if not pts:
        return ()
    emin = min(p.exp for p in pts)
    return tuple(sorted(pts, key=lambda d: d.man << (d.exp - emin)))


# ---------------------------------------------------------------------------
# Pixel queries and rendering

def _dist_bounds(cert: _Certificate, x: Dyadic):
    """(lower, upper) certified bounds on dist(x, A)."""
    lower = upper = None
    for i, enc in enumerate(cert.enclosures):
        if enc.contains(x):
            lo = ZERO
        else:
            lo = enc.lo - x if x < enc.lo else x - enc.hi
        lower = lo if lower is None else dy_min(lower, lo)
        if cert.kind == "points":
            up = lo + enc.width()
        elif cert.inners is not None and cert.inners[i] is not None:
            inner = cert.inners[i]
            if inner.contains(x):
                up = ZERO
            else:
                up = inner.lo - x if x < inner.lo else x - inner.hi
        else:
            up = lo + enc.width() + cert.gap
        upper = up if upper is None else dy_min(upper, up)
    return lower, upper


def _cached_certificate(o: ParamOracle, n: int, hints, budget,
                        ledger) -> _Certificate:
    cache = getattr(o, "_qal_cert_cache", None)
    if cache is None:
        cache = o._qal_cert_cache = {}
    key = (n, hints, budget)
    if key not in cache:
        cache[key] = _build_certificate(o, n, hints, budget, ledger)
    return cache[key]


def pixel_query(o: ParamOracle, n: int, x: Dyadic,
                hints: Hints | None = None, budget: Budget | None = None,
                ledger: QueryLedger | None = None) -> int:
    """1 if certified dist(x, A) <= 2^-n, 0 if certified >= 2^{1-n}.

    The borderline band resolves to 1 (black) so renders are reproducible.
    """
    if not x.in_grid(n):
        raise ValueError(f"pixel center {x} is not in D_{n}")
    cert = _cached_certificate(o, n, hints, budget, ledger)
    near, far = Dyadic(1, -n), Dyadic(1, 1 - n)
    lower, upper = _dist_bounds(cert, x)
    if upper <= near:
        return 1
    if lower >= far:
        return 0
    return 1


def render(o: ParamOracle, n: int, viewport: Interval,
           hints: Hints | None = None, budget: Budget | None = None,
           ledger: QueryLedger | None = None) -> bytes:
    """P5 graymap, one row, byte 0 (black) where pixel_query says 1."""
    lo = viewport.lo.scale2(n).ceil_int()
    hi = viewport.hi.scale2(n).floor_int()
    if hi < lo:
        raise ValueError("viewport contains no pixel centers")
    _cached_certificate(o, n, hints, budget, ledger)
    row = bytearray()
    for j in range(lo, hi + 1):
        bit = pixel_query(o, n, Dyadic(j, -n), hints, budget, ledger)
        row.append(0 if bit else 255)
    header = (f"P5\n# attractor band render; 0 = black = attractor side\n"
              f"{len(row)} 1\n255\n")
    return header.encode("ascii") + bytes(row)
