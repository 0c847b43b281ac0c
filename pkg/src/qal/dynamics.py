"""Certified forward dynamics of P_c(x) = x^2 + c on the real line.

Everything here is computed from oracle queries alone: a query at precision m
yields only the contract bracket |answer - c| < 2^-(m-1), so all certificates
remain valid under adversarial oracles.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .dyadic import (DOWN, UP, ZERO, Dyadic, Interval, dy_max, dy_min,
                     iv_deriv_enclosure, iv_quad_step)
from .oracle import ParamOracle, QueryLedger

ONE = Dyadic(1)
TWO_D = Dyadic(2)
NEG_TWO = Dyadic(-2)
QUARTER = Dyadic(1, -2)
PARAM_RANGE = Interval(NEG_TWO, QUARTER)
BLOWUP_WIDTH = Dyadic(1, -4)


def precision_cap() -> int:
    return int(os.environ.get("QAL_MAX_PRECISION", "4096"))


class ParameterRangeError(ValueError):
    """Parameter certified outside [-2, 1/4]."""


class PrecisionExhausted(RuntimeError):
    """Escalation hit the precision cap without reaching a certificate."""


def check_param(o: ParamOracle, ledger: QueryLedger | None = None) -> Interval:
    """Certify c is not outside [-2, 1/4]; returns a bracket for c."""
    enc = o.enclosure(16, ledger)
    if enc.hi < PARAM_RANGE.lo or enc.lo > PARAM_RANGE.hi:
        raise ParameterRangeError(f"parameter bracket {enc} outside [-2, 1/4]")
    return enc


# ---------------------------------------------------------------------------
# Critical orbit

@dataclass
class OrbitEnclosure:
    steps: list  # Interval, steps[0] = [0,0]
    precision_used: int
    blown_up: bool


def critical_orbit(o: ParamOracle, n_steps: int, p: int,
                   ledger: QueryLedger | None = None) -> OrbitEnclosure:
    """Enclosures of 0, P_c(0), ..., P_c^N(0) at working precision p.

    Iteration stops early once escape is certified (the enclosure is entirely
    past |x| = 2): from there the orbit increases monotonically to infinity
    and exact mantissas would double in size every step.
    """
    if n_steps < 1:
        raise ValueError("need at least one step")
    c = o.enclosure(p, ledger)
    steps = [Interval.point(ZERO)]
    blown = False
    for _ in range(n_steps):
        steps.append(iv_quad_step(steps[-1], c, p))
        if steps[-1].width() > BLOWUP_WIDTH:
            blown = True
        if steps[-1].lo > TWO_D or steps[-1].hi < NEG_TWO:
            blown = True
            break
    return OrbitEnclosure(steps, p, blown)


# ---------------------------------------------------------------------------
# Tracked intervals: set images with certified endpoint enclosures.
#
# Naive interval iteration of a wide interval loses everything; the image of
# an interval under the (piecewise monotone, even) quadratic map is instead
# computed as an exact set image whose endpoints are tracked as enclosures.

def _iv_max(a: Interval, b: Interval) -> Interval:
    return Interval(dy_max(a.lo, b.lo), dy_max(a.hi, b.hi))


def _iv_min(a: Interval, b: Interval) -> Interval:
    return Interval(dy_min(a.lo, b.lo), dy_min(a.hi, b.hi))


class TrackedInterval:
    """Real interval [l, h] with each endpoint known only as an enclosure."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Interval, hi: Interval):
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_exact(cls, lo: Dyadic, hi: Dyadic) -> "TrackedInterval":
        return cls(Interval.point(lo), Interval.point(hi))

    def outer(self) -> Interval:
        """Guaranteed superset with exact endpoints."""
        return Interval(self.lo.lo, self.hi.hi)

    def inner(self) -> Interval | None:
        """Guaranteed subset, or None if none is certified."""
        if self.lo.hi <= self.hi.lo:
            return Interval(self.lo.hi, self.hi.lo)
        return None

    def outer_width(self) -> Dyadic:
        return self.hi.hi - self.lo.lo

    def endpoint_slack(self) -> Dyadic:
        return dy_max(self.lo.width(), self.hi.width())

    def image(self, c: Interval, p: int) -> "TrackedInterval":
        """Set image under x^2 + c (even map: exact endpoint bookkeeping)."""
        lo_img = (self.lo.square() + c).round_out(p)
        hi_img = (self.hi.square() + c).round_out(p)
        c_img = c.round_out(p)
        if self.hi.hi <= ZERO:  # certified nonpositive: decreasing branch
            return TrackedInterval(hi_img, lo_img)
        if self.lo.lo >= ZERO:  # certified nonnegative: increasing branch
            return TrackedInterval(lo_img, hi_img)
        if self.lo.hi <= ZERO <= self.hi.lo:  # certified straddles 0
            return TrackedInterval(c_img, _iv_max(lo_img, hi_img))
        # undecided: hull of both cases
        return TrackedInterval(_iv_min(c_img, _iv_min(lo_img, hi_img)),
                               _iv_max(lo_img, hi_img))

    # certified (three-valued logic collapses to: True means proven)

    def certainly_inside(self, other: "TrackedInterval") -> bool:
        return other.lo.hi <= self.lo.lo and self.hi.hi <= other.hi.lo

    def certainly_inside_iv(self, box: Interval) -> bool:
        return box.lo <= self.lo.lo and self.hi.hi <= box.hi

    def certainly_contains_point(self, x: Dyadic) -> bool:
        return self.lo.hi <= x <= self.hi.lo

    def certainly_excludes_point(self, x: Dyadic) -> bool:
        return x < self.lo.lo or x > self.hi.hi

    def certainly_contains_iv(self, box: Interval) -> bool:
        return self.lo.hi <= box.lo and box.hi <= self.hi.lo

    def certainly_excludes_iv(self, box: Interval) -> bool:
        return box.hi < self.lo.lo or box.lo > self.hi.hi

    def interiors_certainly_disjoint(self, other: "TrackedInterval") -> bool:
        return self.hi.hi <= other.lo.lo or other.hi.hi <= self.lo.lo

    def certainly_precedes(self, other: "TrackedInterval") -> bool:
        """Certified endpointwise order: l <= l' and h <= h' (touching ok)."""
        return self.lo.hi <= other.lo.lo and self.hi.hi <= other.hi.lo

    def __repr__(self):
        return f"TrackedInterval({self.lo!r}, {self.hi!r})"


# ---------------------------------------------------------------------------
# Attracting-cycle certification (interval analog of the disk certificate)

@dataclass
class CertifiedCycle:
    period: int
    point_enclosures: list  # Interval, pairwise disjoint, cyclically mapped
    multiplier: Interval
    kind: str  # attracting | superattracting | parabolic | repelling | undecided


def classify_cycle(point_enclosures: list, multiplier: Interval) -> str:
    """Kind certified by the multiplier enclosure; parabolic never inferred."""
    if multiplier.contains_zero() and any(e.contains_zero() for e in point_enclosures):
        if multiplier.mag() < ONE:
            return "superattracting"
        return "undecided"
    m = multiplier.mag()
    lo = multiplier.mig()
    if m < ONE and lo > ZERO:
        return "attracting"
    if lo > ONE:
        return "repelling"
    return "undecided"


def _float_cycle_candidate(c: float, max_period: int, transient: int = 4096):
    """Heuristic (period, point) candidate from plain float iteration."""
    x = 0.0
    for _ in range(transient):
        x = x * x + c
        if abs(x) > 4.0:
            return None
    tail = [x]
    for _ in range(4 * max_period):
        x = x * x + c
        tail.append(x)
    for n in range(1, max_period + 1):
        if abs(tail[n] - tail[0]) < 1e-7 and abs(tail[2 * n] - tail[n]) < 1e-7:
            # polish with float Newton on P^n(w) - w
            w = tail[0]
            for _ in range(30):
                v, dv = w, 1.0
                for _ in range(n):
                    dv *= 2 * v
                    v = v * v + c
                g, dg = v - w, dv - 1.0
                if dg == 0.0:
                    break
                step = g / dg
                w -= step
                if abs(step) < 1e-14:
                    break
            return n, w
    return None


def certify_attracting_cycle(o: ParamOracle, max_period: int = 64,
                             step_budget: int = 200_000,
                             ledger: QueryLedger | None = None,
                             p_cap: int | None = None) -> CertifiedCycle | None:
    """Find and rigorously certify the attracting/superattracting limit cycle.

    Certificate: a dyadic interval J and n with P^n(J) strictly inside J and
    the sup of |D(P^n)| over the orbit tube below 1.  Returns None when the
    budget runs out -- never a false certificate.
    """
    check_param(o, ledger)
    p_cap = p_cap or precision_cap()
    c_float = float(o.query(53, ledger))
    cand = _float_cycle_candidate(c_float, max_period)
    if cand is None:
        return None
    n, w = cand
    steps_used = 0
    p = 64
    while p <= p_cap:
        c = o.enclosure(p, ledger)
        for rexp in range(6, min(40, p // 2), 2):
            steps_used += n
            if steps_used > step_budget:
                return None
            r = Dyadic(1, -rexp)
            center = Dyadic.from_float(w).round(min(p, 128))
            j = Interval(center - r, center + r)
            tube = [j]
            for _ in range(n):
                tube.append(iv_quad_step(tube[-1], c, p))
            if not (j.lo < tube[-1].lo and tube[-1].hi < j.hi):
                continue
            prod = Interval.point(ONE)
            for t in tube[:-1]:
                prod = (prod * Interval.point(iv_deriv_enclosure(t).mag())).round_out(p)
            if not prod.hi < ONE:
                continue
            return _polish_cycle(o, n, j, c, p, ledger)
        p *= 2
    return None


def _polish_cycle(o: ParamOracle, n: int, j: Interval, c: Interval, p: int,
                  ledger) -> CertifiedCycle:
    """Iterate P^n on a certified trap J until the enclosure stabilizes."""
    y = j
    prev_width = y.width()
    for _ in range(4 * p):
        z = y
        for _ in range(n):
            z = iv_quad_step(z, c, p)
        z = z.intersect(y) or z  # cycle point lies in both
        if z.width() >= prev_width:
            break
        y, prev_width = z, z.width()
    # enclosures of the full cycle
    encs = [y]
    for _ in range(n - 1):
        encs.append(iv_quad_step(encs[-1], c, p))
    # reduce to the true period if images meet earlier
    for d in range(1, n):
        if n % d == 0 and not encs[d].disjoint(encs[0]) and _recheck_trap(j, d, c, p):
            return _polish_cycle(o, d, j, c, p, ledger)
    mult = Interval.point(ONE)
    for e in encs:
        mult = (mult * iv_deriv_enclosure(e)).round_out(p)
    kind = classify_cycle(encs, mult)
    return CertifiedCycle(n, encs, mult, kind)


def _recheck_trap(j: Interval, d: int, c: Interval, p: int) -> bool:
    z = j
    for _ in range(d):
        z = iv_quad_step(z, c, p)
    return j.lo < z.lo and z.hi < j.hi


def recheck_cycle(cycle: CertifiedCycle, o: ParamOracle, p: int) -> bool:
    """Post-hoc re-verification of the trap at (typically doubled) precision."""
    c = o.enclosure(p)
    j = cycle.point_enclosures[0]
    pad = Dyadic(1, -(p // 4))
    j = Interval(j.lo - pad, j.hi + pad)
    return _recheck_trap(j, cycle.period, c, p)


# ---------------------------------------------------------------------------
# Periodic-point isolation (real interval stand-in for complex root finding)

@dataclass
class PeriodicPoint:
    enclosure: Interval
    unique: bool  # certified to contain exactly one solution of P^n(w)=w
    multiplier: Interval  # enclosure of (P^n)' over the enclosure


def iter_eval(x: Interval, c: Interval, k: int, p: int):
    """Enclosures of (P^k(w), (P^k)'(w)) over x, sharpened by a centered form.

    The naive enclosure of P^k over a box suffers dependency slop that scales
    like sqrt(width) near roots; intersecting with the mean-value form
    P^k(mid) + (P^k)'(x) * (x - mid) restores linear scaling.
    """
    t = x
    deriv = Interval.point(ONE)
    for _ in range(k):
        deriv = (deriv * iv_deriv_enclosure(t)).round_out(p)
        t = iv_quad_step(t, c, p)
    if not x.is_point():
        mid = x.mid()
        tm = Interval.point(mid)
        for _ in range(k):
            tm = iv_quad_step(tm, c, p)
        centered = tm + deriv * Interval(x.lo - mid, x.hi - mid)
        t = t.intersect(centered) or t
    return t, deriv


def _return_map_eval(x: Interval, c: Interval, n: int, p: int):
    """Enclosures of G = P^n(w) - w and its w-derivative over x.

    G gets its own mean-value form G(mid) + G'(x)(x - mid): subtracting x
    from the already-sharpened P^n enclosure would reintroduce the
    dependency slop that makes exclusion near double roots scale like
    sqrt(width) instead of linearly.
    """
    t, deriv = iter_eval(x, c, n, p)
    dg = deriv - Interval.point(ONE)
    f = t - x
    if not x.is_point():
        mid = x.mid()
        tm, _ = iter_eval(Interval.point(mid), c, n, p)
        centered = (tm - Interval.point(mid)) + dg * Interval(x.lo - mid,
                                                              x.hi - mid)
        f = f.intersect(centered) or f
    return f, dg, deriv


def _point_sign(x: Dyadic, c: Interval, n: int, p: int) -> int:
    f, _, _ = _return_map_eval(Interval.point(x), c, n, p)
    if f.lo > ZERO:
        return 1
    if f.hi < ZERO:
        return -1
    return 0


def isolate_periodic_points(o: ParamOracle, n: int, p: int,
                            ledger: QueryLedger | None = None) -> list:
    """All solutions of P_c^n(w) = w in (a superset of) the dynamical interval.

    Simple roots come back as unique-certified enclosures via sign change +
    interval Newton; root clusters that finite precision cannot split (e.g.
    parabolic double roots) come back as non-unique enclosures.  Jointly the
    enclosures contain every solution (exclusion test on the complement).
    """
    c = o.enclosure(p, ledger)
    # all periodic points of x^2+c with c in [-2, 1/4] lie in [-beta, beta]
    # with beta <= 2; a fixed pad keeps endpoint roots (c = -2) interior
    pad = Dyadic(1, -6)
    box = Interval(NEG_TWO - pad, Dyadic(2) + pad)
    min_width = Dyadic(1, -max(16, p // 2))
    queue = [box]
    unique, undecided = [], []
    while queue:
        x = queue.pop()
        f, df, _ = _return_map_eval(x, c, n, p)
        if not f.contains_zero():
            continue
        if not df.contains_zero():
            root = _newton_refine(x, c, n, p)
            if root is not None:
                unique.append(root)
                continue
        if x.width() <= min_width:
            undecided.append(x)
            continue
        mid = x.mid()
        queue.append(Interval(x.lo, mid))
        queue.append(Interval(mid, x.hi))
    out = []
    for root in unique:
        _, _, dv = _return_map_eval(root, c, n, p)
        out.append(PeriodicPoint(root, True, dv))
    for cluster in _merge_boxes(undecided):
        # drop clusters that duplicate an already-certified unique root
        if any(not cluster.disjoint(r.enclosure) for r in out if r.unique):
            continue
        # a root sitting exactly on a bisection boundary produces a cluster
        # of minimal boxes; a Newton retry on the inflated hull certifies it
        w = dy_max(cluster.width(), min_width)
        inflated = Interval(cluster.lo - w, cluster.hi + w)
        root = _newton_refine(inflated, c, n, p)
        if root is not None:
            _, _, dv = _return_map_eval(root, c, n, p)
            out.append(PeriodicPoint(root, True, dv))
            continue
        _, _, dv = _return_map_eval(cluster, c, n, p)
        out.append(PeriodicPoint(cluster, False, dv))
    out.sort(key=lambda r: r.enclosure.lo.as_fraction())
    return out


def _newton_refine(x: Interval, c: Interval, n: int, p: int) -> Interval | None:
    """Interval Newton: returns a contracted enclosure certified unique."""
    certified = False
    for _ in range(80):
        mid = x.mid()
        f_mid, _, _ = _return_map_eval(Interval.point(mid), c, n, p)
        _, df, _ = _return_map_eval(x, c, n, p)
        if df.contains_zero():
            return x if certified else None
        corr = f_mid.divide(df, p)
        nxt = Interval(mid - corr.hi, mid - corr.lo)
        if x.strictly_contains(nxt):
            certified = True
        inter = nxt.intersect(x)
        if inter is None:
            return None  # no root in x at all
        if inter.width() >= x.width():
            break
        x = inter
    return x if certified else None


def _merge_boxes(boxes: list) -> list:
    if not boxes:
        return []
    boxes = sorted(boxes, key=lambda b: b.lo.as_fraction())
    merged = [boxes[0]]
    for b in boxes[1:]:
        if not merged[-1].disjoint(b):
            merged[-1] = merged[-1].hull(b)
        else:
            merged.append(b)
    return merged


# ---------------------------------------------------------------------------
# Parabolic escape-time measurement for f_eps(w) = w + w^2 + eps

def escape_time(epsilon: Dyadic, gate: Interval, p_start: int = 64,
                p_cap: int | None = None, max_steps: int = 50_000_000) -> int:
    """Steps of w -> w + w^2 + eps to carry -a past +a, gate = [-a, a].

    Runs two directed-rounding orbits; counts must agree, else the working
    precision is escalated.
    """
    if epsilon <= ZERO:
        raise ValueError("epsilon must be positive")
    a = gate.hi
    if not (a > ZERO and -a == gate.lo):
        raise ValueError("gate must be symmetric [-a, a] with a > 0")
    if not a < Dyadic(1, -1):
        raise ValueError("gate must sit inside (-1/2, 1/2) where the map is monotone")
    p_cap = p_cap or precision_cap()
    p = p_start
    while p <= p_cap:
        n_lo = _escape_count(epsilon, a, p, UP, max_steps)    # early bound
        n_hi = _escape_count(epsilon, a, p, DOWN, max_steps)  # late bound
        if n_lo == n_hi and n_lo is not None:
            return n_lo
        p *= 2
    raise PrecisionExhausted("escape counts disagree at precision cap")


def _escape_count(eps: Dyadic, a: Dyadic, p: int, mode: str, max_steps: int):
    w = -a
    for k in range(1, max_steps + 1):
        w = (w + w * w + eps).round(p, mode)
        if w > a:
            return k
    return None
