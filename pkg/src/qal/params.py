"""Parameter-space solvers, each delivered as a ParamOracle.

Superstable centers (roots of Q_n(c) = P_c^n(0)), renormalization-window
endpoints, the eps_n family of essentially-bounded-combinatorics parameters
accumulating on the period-3 cusp -7/4, and the period-doubling limit.
Float arithmetic only ever produces seeds; every delivered bracket is
certified by interval Newton or certified sign bisection.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dyadic import UP, ZERO, Dyadic, Interval, dy_max, dy_min
from .dynamics import precision_cap
from .oracle import (IntervalNewtonOracle, OracleFault, ParamOracle,
                     QueryLedger)
from .renorm import CombinatorialType, detect_renormalization, principal_nest

ONE = Dyadic(1)
TWO = Dyadic(2)
PARAM_LO = Dyadic(-2)
PARAM_HI = Dyadic(1, -2)
CUSP3 = Dyadic(-7, -2)


# ---------------------------------------------------------------------------
# Q_n(c) = P_c^n(0) as a function of the parameter

def critical_value_eval(c: Interval, n: int, p: int):
    """Enclosures of (Q_n, dQ_n/dc) over a parameter interval c.

    Recursion x' = x^2 + c, d' = 2 x d + 1, sharpened by the mean-value form
    Q_n(mid) + dQ_n(c) * (c - mid).
    """
    x = Interval.point(ZERO)
    d = Interval.point(ZERO)
    for _ in range(n):
        d = (d * x.scale2(1) + Interval.point(ONE)).round_out(p)
        x = (x.square() + c).round_out(p)
    if not c.is_point():
        mid = Interval.point(c.mid())
        xm = Interval.point(ZERO)
        for _ in range(n):
            xm = (xm.square() + mid).round_out(p)
        centered = xm + d * (c - mid)
        x = x.intersect(centered) or x
    return x, d


def _q_float(c: float, n: int) -> float:
    x = 0.0
    for _ in range(n):
        x = x * x + c
    return x


def _q_newton_float(c: float, n: int, iters: int = 60) -> float | None:
    prev = None
    for _ in range(iters):
        x, d = 0.0, 0.0
        for _ in range(n):
            d = 2.0 * x * d + 1.0
            x = x * x + c
        if d == 0.0:
            return None
        step = x / d
        c -= step
        if abs(step) < 1e-15:
            return c
        # long compositions have a float noise floor well above 1e-15;
        # two consecutive noise-level steps count as converged
        if abs(step) < 1e-11 and prev is not None and prev < 1e-11:
            return c
        prev = abs(step)
    return None


def _contract_root(guess: float, n: int, radius: float, p: int = 64,
                   p_cap: int | None = None,
                   box_radius: float | None = None) -> Interval | None:
    """Certified enclosure of a simple root of Q_n near guess, or None.

    Interval Newton around the float seed; success requires a step strictly
    inside the previous box (existence and uniqueness).  radius bounds how
    far the polished seed may drift from guess; box_radius (default radius)
    sizes the Newton box and must exclude neighboring roots.
    """
    p_cap = p_cap or precision_cap()
    seed = _q_newton_float(guess, n)
    if seed is None or abs(seed - guess) > radius:
        return None
    while p <= p_cap:
        r = Dyadic.from_float(box_radius or radius).round(min(p, 128), UP)
        mid = Dyadic.from_float(seed).round(min(p, 128))
        box = Interval(dy_max(mid - r, PARAM_LO), dy_min(mid + r, PARAM_HI))
        certified = False
        min_w = Dyadic(1, -45)
        for _ in range(200):
            m = Interval.point(box.mid())
            fm, _ = critical_value_eval(m, n, p)
            _, df = critical_value_eval(box, n, p)
            if df.contains_zero():
                # Wrapping: long compositions wrap the derivative over wide
                # boxes; shrink toward the seed (accurate to ~2^-45 easily)
                # before spending precision.
                if box.width() > min_w:
                    c0, q = box.mid(), box.width().scale2(-3)
                    box = Interval(c0 - q, c0 + q)
                    continue
                break
            corr = fm.divide(df, p)
            nxt = Interval(box.mid() - corr.hi, box.mid() - corr.lo)
            if box.strictly_contains(nxt):
                certified = True
            inter = nxt.intersect(box)
            if inter is None:
                return None
            if inter.width() >= box.width():
                break
            box = inter
        if certified:
            return box
        p *= 2
    return None


def _is_primitive(enclosure: Interval, n: int, p: int) -> bool | None:
    """True when Q_d excludes 0 over the enclosure for all proper d | n."""
    for d in range(1, n):
        if n % d:
            continue
        v, _ = critical_value_eval(enclosure, d, p)
        if v.contains_zero():
            return None if v.lo < ZERO < v.hi and enclosure.width() > Dyadic(1, -p // 2) else False
    return True


def superstable_center(n: int, selector=None, p: int = 64) -> ParamOracle:
    """Oracle for a root of P_c^n(0) = 0 with primitive period n.

    selector: None (unique root expected), an int index into the ascending
    list of primitive roots in [-2, 1/4], or an Interval bracket hint.
    """
    if n < 1:
        raise ValueError("period must be >= 1")
    if isinstance(selector, Interval):
        # pad so that a tight certified enclosure still spans a sign change
        lo, hi = float(selector.lo) - 1e-7, float(selector.hi) + 1e-7
    else:
        lo, hi = -2.0, 0.25
    roots = _float_roots(n, lo, hi)
    enclosures = []
    for r in roots:
        enc = _contract_root(r, n, 1e-6 + 1e-3 / n)
        if enc is None:
            continue
        prim = _is_primitive(enc, n, p)
        if prim:
            enclosures.append(enc)
    if not enclosures:
        raise OracleFault(f"no primitive period-{n} center in [{lo}, {hi}]")
    idx = selector if isinstance(selector, int) else 0
    if isinstance(selector, int) and not 0 <= idx < len(enclosures):
        raise OracleFault(f"center index {idx} out of range "
                          f"({len(enclosures)} roots)")
    if selector is None and len(enclosures) > 1 and n > 1:
        raise OracleFault(f"{len(enclosures)} period-{n} centers; "
                          f"pass an index or bracket")
    return _center_oracle(enclosures[idx], n,
                          f"superstable:{n}" + (f":{idx}" if isinstance(selector, int) else ""))


def _center_oracle(enc: Interval, n: int, spec: str) -> ParamOracle:
    pad = enc.width()
    if pad == ZERO:
        pad = Dyadic(1, -48)
    bracket = Interval(dy_max(enc.lo - pad, PARAM_LO),
                       dy_min(enc.hi + pad, PARAM_HI))
    o = IntervalNewtonOracle(
        lambda x, pr: critical_value_eval(x, n, pr), bracket, spec=spec)
    o.known_critical_period = n
    return o


def _float_roots(n: int, lo: float, hi: float, grid: int = 4096) -> list:
    """Float sign-scan seeds for roots of Q_n on [lo, hi]."""
    if n == 1:
        return [0.0] if lo <= 0.0 <= hi else []
    out = []
    step = (hi - lo) / grid
    prev_c, prev_v = lo, _q_float(lo, n)
    for i in range(1, grid + 1):
        c = lo + i * step
        v = _q_float(c, n)
        if prev_v == 0.0:
            out.append(prev_c)
        elif v * prev_v < 0.0:
            a, b, va = prev_c, c, prev_v
            for _ in range(80):
                m = 0.5 * (a + b)
                vm = _q_float(m, n)
                if vm == 0.0 or b - a < 1e-15:
                    break
                if vm * va < 0.0:
                    b = m
                else:
                    a, va = m, vm
            out.append(0.5 * (a + b))
        prev_c, prev_v = c, v
    return out


# ---------------------------------------------------------------------------
# Window endpoints

@dataclass
class RenormWindow:
    period: int
    left: Interval
    right: Interval
    tau: CombinatorialType | None


def _system_eval(c: Interval, w: Interval, n: int, p: int):
    """Over a (c, w) box: (P^n(w), dP^n/dw, dP^n/dc, d2/dwdw, d2/dwdc)."""
    x = w
    u = Interval.point(ONE)   # dx/dw
    v = Interval.point(ZERO)  # dx/dc
    uw = Interval.point(ZERO)  # du/dw
    uc = Interval.point(ZERO)  # du/dc
    one = Interval.point(ONE)
    for _ in range(n):
        uw = ((u * u + x * uw).scale2(1)).round_out(p)
        uc = ((u * v + x * uc).scale2(1)).round_out(p)
        u = (x * u).scale2(1).round_out(p)
        v = ((x * v).scale2(1) + one).round_out(p)
        x = (x.square() + c).round_out(p)
    return x, u, v, uw, uc


def _parabolic_refine(n: int, c0: float, w0: float, target_exp: int,
                      mult: int = 1, p: int = 64,
                      p_cap: int | None = None) -> tuple | None:
    """Certified (c, w) box for P^n(w) = w, (P^n)'(w) = mult.

    Two-variable interval Newton; returns (c_enclosure, w_enclosure) with
    the c side refined below 2^-target_exp, or None.
    """
    p_cap = p_cap or precision_cap()
    seed = _parabolic_float(n, c0, w0, mult)
    if seed is None:
        return None
    c0, w0 = seed
    radius = 1e-4
    tgt = Interval.point(Dyadic(mult))
    target = Dyadic(1, -target_exp)
    while p <= p_cap:
        r = Dyadic.from_float(radius).round(min(p, 128), UP)
        cm = Dyadic.from_float(c0).round(min(p, 128))
        wm = Dyadic.from_float(w0).round(min(p, 128))
        cbox, wbox = Interval(cm - r, cm + r), Interval(wm - r, wm + r)
        certified = False
        for _ in range(400):
            cmid, wmid = cbox.mid(), wbox.mid()
            x, u, _, _, _ = _system_eval(Interval.point(cmid),
                                         Interval.point(wmid), n, p)
            f1 = x - Interval.point(wmid)
            f2 = u - tgt
            _, ub, vb, uwb, ucb = _system_eval(cbox, wbox, n, p)
            j11, j12 = vb, ub - Interval.point(ONE)
            j21, j22 = ucb, uwb
            det = (j11 * j22 - j12 * j21).round_out(p)
            if det.contains_zero():
                break
            dc = (f1 * j22 - f2 * j12).divide(det, p)
            dw = (f2 * j11 - f1 * j21).divide(det, p)
            nc = Interval(cmid - dc.hi, cmid - dc.lo)
            nw = Interval(wmid - dw.hi, wmid - dw.lo)
            if cbox.strictly_contains(nc) and wbox.strictly_contains(nw):
                certified = True
            ic, iw = nc.intersect(cbox), nw.intersect(wbox)
            if ic is None or iw is None:
                return None
            if ic.width() >= cbox.width() and iw.width() >= wbox.width():
                break
            cbox, wbox = ic, iw
            if certified and cbox.width() < target:
                return cbox, wbox
        if certified and cbox.width() < target:
            return cbox, wbox
        p *= 2
    return None


def _parabolic_float(n: int, c: float, w: float, mult: int,
                     iters: int = 200) -> tuple | None:
    for _ in range(iters):
        x, u, v, uw, uc = w, 1.0, 0.0, 0.0, 0.0
        for _ in range(n):
            uw = 2.0 * (u * u + x * uw)
            uc = 2.0 * (u * v + x * uc)
            u = 2.0 * x * u
            v = 2.0 * x * v + 1.0
            x = x * x + c
        f1, f2 = x - w, u - mult
        det = v * uw - (u - 1.0) * uc
        if det == 0.0:
            return None
        dc = (f1 * uw - f2 * (u - 1.0)) / det
        dw = (f2 * v - f1 * uc) / det
        c, w = c - dc, w - dw
        if abs(dc) < 1e-14 and abs(dw) < 1e-14:
            return c, w
    return None


def _left_endpoint(n: int, guess: float, target_exp: int,
                   p: int = 64, p_cap: int | None = None) -> Interval | None:
    """Certified bracket of the root of Q_{3n}(c) - Q_{2n}(c) near guess."""
    p_cap = p_cap or precision_cap()

    def h_float(c: float) -> float:
        return _q_float(c, 3 * n) - _q_float(c, 2 * n)

    a, b = guess - 1e-3, guess + 1e-3
    va, vb = h_float(a), h_float(b)
    if va * vb > 0.0:  # widen until the seed brackets
        for _ in range(20):
            a, b = a - 2e-3, b + 2e-3
            va, vb = h_float(a), h_float(b)
            if va * vb < 0.0:
                break
        else:
            return None

    def h_iv(x: Interval, pr: int) -> Interval:
        v3, _ = critical_value_eval(x, 3 * n, pr)
        v2, _ = critical_value_eval(x, 2 * n, pr)
        return v3 - v2

    lo, hi = Dyadic.from_float(a), Dyadic.from_float(b)
    target = Dyadic(1, -target_exp)
    while p <= p_cap:
        sa = _iv_sign(h_iv(Interval.point(lo), p))
        sb = _iv_sign(h_iv(Interval.point(hi), p))
        if sa != 0 and sb != 0 and sa != sb:
            while hi - lo >= target:
                mid = Interval(lo, hi).mid()
                sm = _iv_sign(h_iv(Interval.point(mid), p))
                if sm == 0:
                    break
                if sm == sa:
                    lo = mid
                else:
                    hi = mid
            if hi - lo < target:
                return Interval(lo, hi)
        p *= 2
    return None


def _iv_sign(v: Interval) -> int:
    if v.lo > ZERO:
        return 1
    if v.hi < ZERO:
        return -1
    return 0


def window_endpoints(n: int, center_hint=None, width_exp: int = 34,
                     with_tau: bool = True) -> RenormWindow:
    """Certified endpoint enclosures of the period-n renormalization window.

    Left endpoint from Eq. (left) P^{2n}(0) = P^{3n}(0) by certified sign
    bisection; right endpoint from the parabolic system P^n(w) = w,
    (P^n)'(w) = 1 by two-variable interval Newton.  n = 2 is degenerate
    (the parabolic point is a triple root, the window cusp coincides with
    the fixed point's doubling), so its right endpoint is the exact -3/4
    from the closed-form 2-cycle multiplier 4(c+1) = 1.
    """
    if n < 2:
        raise ValueError("windows have period >= 2")
    center = superstable_center(n, center_hint)
    c_star = float(center.query(53))
    right = _right_endpoint(n, c_star, width_exp)
    if right is None:
        raise OracleFault(f"right endpoint of period {n} did not certify")
    guess = _left_guess(n, c_star, float(right.lo))
    left = _left_endpoint(n, guess, width_exp)
    if left is None:
        raise OracleFault(f"left endpoint of period {n} did not certify")
    if not (left.hi < right.lo and float(left.hi) < c_star < float(right.lo)):
        raise OracleFault("window endpoints out of order")
    tau = None
    if with_tau:
        cert = detect_renormalization(center, n)
        tau = cert.tau if cert is not None else None
    return RenormWindow(n, left, right, tau)


def _right_endpoint(n: int, c_star: float, width_exp: int) -> Interval | None:
    """Certified right-endpoint enclosure of the period-n window at c_star.

    A primitive window ends in a saddle-node of the n-cycle: multiplier +1.
    A period-doubling window (n even, nested in a period-n/2 window) ends
    where the parent n/2-cycle has multiplier -1; there the n-cycle system
    is a triple root and the saddle-node solve is singular, so the parent
    system is used instead.  Seeds are the superstable cycle points.
    """
    seeds = [0.0]
    x = 0.0
    for _ in range(n - 1):
        x = x * x + c_star
        seeds.append(x)
    for q, mult in ((n, 1),) + (((n // 2, -1),) if n % 2 == 0 else ()):
        for w0 in seeds:
            sol = _parabolic_refine(q, c_star, w0, width_exp, mult=mult,
                                    p_cap=1024)
            if sol is None:
                continue
            r = float(sol[0].lo)
            if c_star < r <= 0.25 and r - c_star < 1.0:
                return sol[0]
    return None


def _left_guess(n: int, center: float, right: float) -> float:
    """Float hunt for the window's left endpoint below the center."""
    h = lambda c: _q_float(c, 3 * n) - _q_float(c, 2 * n)
    width0 = max(right - center, 1e-4)
    prev_c = center - 1e-9
    prev_v = h(prev_c)
    step = width0 / 64.0
    c = prev_c
    for _ in range(100000):
        c -= step
        if c < -2.0:
            break
        v = h(c)
        if v == 0.0 or v * prev_v < 0.0:
            a, b, va = c, prev_c, v
            for _ in range(80):
                m = 0.5 * (a + b)
                vm = h(m)
                if vm == 0.0:
                    return m
                if vm * va < 0.0:
                    b = m
                else:
                    a, va = m, vm
            return 0.5 * (a + b)
        prev_c, prev_v = c, v
    raise OracleFault(f"no left endpoint seed for period {n}")


# ---------------------------------------------------------------------------
# The eps_n family near the cusp -7/4

def epsilon_family(n: int) -> ParamOracle:
    """Oracle for c = -7/4 + eps_n, the n-th essentially-bounded center.

    These are the superstable parameters whose critical orbit shadows the
    parabolic period-3 orbit n times, escapes through I^1_1, and closes up.
    The critical period is 3n + 2: the escape itinerary is
    f^{3i}(0) in I^1 (i <= n-1), f^{3n}(0) in I^1_1, and then two more
    steps (I^1_1 returns to I^0 under f^2) reach 0.  The constraints are
    certified on the delivered oracle's own nest.
    """
    if n < 1:
        raise ValueError("family index must be >= 1")
    q = 3 * n + 2
    enc = _epsilon_enclosure(n, q)
    o = _center_oracle(enc, q, f"eps-family:{n}")
    _check_epsilon_itinerary(o, n)
    return o


def _epsilon_enclosure(n: int, q: int) -> Interval:
    base = -1.75
    for scale in (0.1246 if n == 1 else 0.166, 0.14, 0.19, 0.11, 0.23):
        guess = base + scale / (n * n)
        root = _q_newton_float(guess, q)
        if root is None or not base < root < base + 0.3:
            continue
        if not _epsilon_float_itinerary(root, n):
            continue
        enc = _contract_root(root, q, 1e-7)
        if enc is not None:
            return enc
    raise OracleFault(f"eps-family index {n}: no certified center")


def _epsilon_float_itinerary(c: float, n: int) -> bool:
    alpha = (1.0 - (1.0 - 4.0 * c) ** 0.5) / 2.0
    x = 0.0
    pts = [0.0]
    for _ in range(3 * n + 2):
        x = x * x + c
        pts.append(x)
    for i in range(1, n):
        if not abs(pts[3 * i]) < 0.6 * abs(alpha):
            return False
    if not alpha < pts[3 * n] < 0.5 * alpha:
        return False
    return abs(pts[3 * n + 2]) < 1e-9


def _check_epsilon_itinerary(o: ParamOracle, n: int):
    """Certify the defining constraints on the oracle's own nest."""
    nest = principal_nest(o, 1)
    if nest.depth < 1:
        raise OracleFault("eps-family: nest level I^1 unavailable")
    i0, i1 = nest.levels[0], nest.levels[1]
    c = nest.param_enclosure
    p = nest.precision
    from .dyadic import iv_quad_step
    x = Interval.point(ZERO)
    orbit = [x]
    for _ in range(3 * n + 1):
        x = iv_quad_step(x, c, p)
        orbit.append(x)
    for i in range(1, n):
        if not i1.certainly_contains_iv(orbit[3 * i]):
            raise OracleFault(f"eps-family: f^{3 * i}(0) not certified in I^1")
    y = orbit[3 * n]
    # I^1_1 = (alpha, -b_1): the non-central component touching alpha
    if not (i0.lo.hi < y.lo and y.hi < i1.lo.lo):
        raise OracleFault(f"eps-family: f^{3 * n}(0) not certified in I^1_1")


class _WindowEndpointOracle(ParamOracle):
    """Oracle for one endpoint of a renormalization window, refined on demand."""

    def __init__(self, period: int, side: str):
        super().__init__()
        if side not in ("left", "right"):
            raise ValueError("side must be left or right")
        self.period = period
        self.side = side
        self.spec = f"window-{side}:{period}"
        self._enc: Interval | None = None

    def _answer(self, m: int) -> Dyadic:
        if self._enc is None or self._enc.width() > Dyadic(1, -(m + 2)):
            win = window_endpoints(self.period, width_exp=m + 2,
                                   with_tau=False)
            self._enc = win.left if self.side == "left" else win.right
        return self._enc.mid().round(m)


def window_endpoint_oracle(period: int, side: str) -> ParamOracle:
    return _WindowEndpointOracle(period, side)


# ---------------------------------------------------------------------------
# Period-doubling limit

class FeigenbaumOracle(ParamOracle):
    """Oracle for the period-doubling limit via center agreement.

    Answers at precision m from the superstable period-2^k center once the
    k-th and (k+1)-th centers agree within 2^-(m+3); the Feigenbaum
    contraction delta ~ 4.669 makes the center-to-limit distance about
    1.27x the successive-center gap, so agreement at m+3 meets the
    contract with margin.
    """

    def __init__(self, depth_cap: int = 14):
        super().__init__()
        if depth_cap < 2:
            raise ValueError("depth cap must be >= 2")
        self.depth_cap = depth_cap
        self.spec = "feigenbaum"
        self._centers: list = []  # certified enclosures of a_k, k = 1, 2, ...

    def _extend(self):
        k = len(self._centers) + 1
        if k > self.depth_cap:
            raise OracleFault("feigenbaum depth cap reached")
        if k == 1:
            self._centers.append(Interval.point(Dyadic(-1)))
            return
        prev = float(self._centers[-1].mid())
        if len(self._centers) >= 3:
            p2 = float(self._centers[-2].mid())
            p3 = float(self._centers[-3].mid())
            delta = abs((p3 - p2) / (p2 - prev))  # empirical Feigenbaum ratio
        elif len(self._centers) == 2:
            p2 = float(self._centers[-2].mid())
            delta = 4.669201609
        else:
            p2, delta = None, None
        if p2 is None:
            guess, radius = -1.3107026, 1e-3
            box = radius
        else:
            gap = abs(prev - p2) / delta  # predicted next center gap
            guess = prev - gap if p2 > prev else prev + gap
            radius = 0.25 * gap  # extrapolation slack
            box = None
        enc = None
        for shrink in (1.0, 0.4, 0.15, 0.05):
            b = box if box is not None else 0.05 * gap * shrink
            enc = _contract_root(guess, 1 << k, radius, box_radius=b)
            if enc is not None or box is not None:
                break
        if enc is None:
            raise OracleFault(f"period 2^{k} center did not certify")
        self._centers.append(enc)

    def _answer(self, m: int) -> Dyadic:
        # ladder cost doubles per level; refuse plainly-infeasible queries
        # up front instead of walking the whole ladder first
        predicted = int((m + 5) / 2.22) + 1  # log2(delta) = 2.2234
        if predicted - 2 > self.depth_cap:
            raise OracleFault(
                f"precision {m} needs about depth {predicted}, "
                f"beyond the cap {self.depth_cap}")
        need = Dyadic(1, -(m + 3))
        while True:
            while len(self._centers) < 2:
                self._extend()
            a, b = self._centers[-2], self._centers[-1]
            gap = abs(a.mid() - b.mid()) + a.width() + b.width()
            if gap < need:
                return b.mid().round(m)
            self._extend()


def feigenbaum_limit(depth: int = 14) -> ParamOracle:
    return FeigenbaumOracle(depth)


# ---------------------------------------------------------------------------
# Window location for an oracle parameter

def window_locate(o: ParamOracle, max_period: int,
                  ledger: QueryLedger | None = None,
                  m_cap: int = 256) -> RenormWindow | None:
    """Smallest-period window (period <= max_period) certified to contain c.

    Containment and exclusion are decided by refining the oracle bracket
    against certified endpoint enclosures; undecidable proximity at the
    budget raises OracleFault (reported distinctly from a certified none).
    A certified attracting cycle of period q restricts candidate window
    periods to divisors of q (an attracting fixed point settles none
    immediately).
    """
    from .dynamics import certify_attracting_cycle
    periods = range(2, max_period + 1)
    cert = certify_attracting_cycle(o, max_period, ledger=ledger)
    if cert is not None and cert.kind in ("attracting", "superattracting"):
        periods = [d for d in range(2, max_period + 1)
                   if cert.period % d == 0]
        if not periods:
            return None
    m = 16
    bracket = o.enclosure(m, ledger)
    for period in periods:
        for win in _windows_near(period, bracket):
            while True:
                if win.left.hi < bracket.lo and bracket.hi < win.right.lo:
                    return win
                outside = bracket.hi < win.left.lo or bracket.lo > win.right.hi
                if outside:
                    break
                if m >= m_cap:
                    raise OracleFault(
                        f"parameter undecidably close to the period-{period} "
                        f"window boundary at precision cap")
                m *= 2
                bracket = o.enclosure(m, ledger)
    return None


def _windows_near(period: int, bracket: Interval) -> list:
    """Windows of the given period whose center lies near the bracket."""
    lo = max(float(bracket.lo) - 1.0, -2.0)
    hi = min(float(bracket.hi) + 1.0, 0.25)
    out = []
    for seed in _float_roots(period, lo, hi):
        enc = _contract_root(seed, period, 1e-6 + 1e-3 / period)
        if enc is None:
            continue
        if not _is_primitive(enc, period, 64):
            continue
        try:
            win = window_endpoints(period, enc, with_tau=True)
        except OracleFault:
            continue
        out.append(win)
    out.sort(key=lambda w: float(w.left.lo))
    return out
