"""Renormalization combinatorics for P_c(x) = x^2 + c.

Kneading data, certified renormalization intervals with their combinatorial
type, the principal nest, central/saddle-node cascades, and the essential
period.  Every combinatorial statement is certified from interval enclosures;
anything the current precision cannot decide surfaces as an explicit unknown
(never a guess), and callers escalate precision where that makes sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dyadic import ZERO, Dyadic, Interval, iv_quad_step
from .dynamics import (TrackedInterval, check_param,
                       isolate_periodic_points, iter_eval, precision_cap)
from .oracle import ParamOracle, QueryLedger

ONE = Dyadic(1)


class _Undecided(Exception):
    """Internal: current working precision cannot decide a required test."""


# ---------------------------------------------------------------------------
# Kneading sequences

@dataclass
class KneadingSequence:
    symbols: str  # over {L, R, C, ?}; index k describes P_c^k(0)
    certified_length: int

    def __str__(self):
        return self.symbols


def kneading(o: ParamOracle, length: int, ledger: QueryLedger | None = None,
             p_cap: int | None = None) -> KneadingSequence:
    """Certified itinerary of the critical orbit relative to 0.

    C appears at index 0 and, when the oracle's construction guarantees
    P^q(0) = 0, at multiples of q; everything else is decided from orbit
    enclosures, escalating precision while '?' remain.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    p_cap = p_cap or precision_cap()
    q = o.known_critical_period
    best = "?" * length
    p = 64
    while p <= p_cap:
        c = o.enclosure(p, ledger)
        syms = []
        x = Interval.point(ZERO)
        for k in range(length):
            if k == 0 or (q is not None and k % q == 0):
                syms.append("C")
            elif x.hi < ZERO:
                syms.append("L")
            elif x.lo > ZERO:
                syms.append("R")
            else:
                syms.append("?")
            x = iv_quad_step(x, c, p)
        s = "".join(syms)
        if "?" not in s:
            return KneadingSequence(s, length)
        if s.count("?") < best.count("?"):
            best = s
        p *= 2
    cert = best.index("?") if "?" in best else length
    return KneadingSequence(best, cert)


# ---------------------------------------------------------------------------
# Renormalization detection and combinatorial type

@dataclass(frozen=True)
class CombinatorialType:
    """Permutation of the renormalization cycle in real-line order.

    Intervals are indexed 1..n in descending real order (rightmost = 1);
    perm[i-1] is the index of the interval that interval i maps into.
    """

    period: int
    perm: tuple

    def is_single_cycle(self) -> bool:
        seen, i = set(), 1
        for _ in range(self.period):
            if i in seen:
                return False
            seen.add(i)
            i = self.perm[i - 1]
        return i == 1 and len(seen) == self.period


@dataclass
class RenormCert:
    period: int
    J: Interval  # outer enclosure of the symmetric renormalization interval
    images: list  # TrackedInterval, images[k] = f^k(J), k = 0..period
    tau: CombinatorialType
    precision: int


def _rank_descending(tracked: list) -> list | None:
    """1-based descending real-order ranks, or None if order uncertified."""
    order = sorted(range(len(tracked)),
                   key=lambda i: -float(tracked[i].outer().mid()))
    for a, b in zip(order, order[1:]):
        if not tracked[b].certainly_precedes(tracked[a]):
            return None
    ranks = [0] * len(tracked)
    for r, i in enumerate(order):
        ranks[i] = r + 1
    return ranks


def _tau_of_images(images: list) -> CombinatorialType | None:
    n = len(images) - 1
    ranks = _rank_descending(images[:n])
    if ranks is None:
        return None
    perm = [0] * n
    for i in range(n):
        perm[ranks[i] - 1] = ranks[(i + 1) % n]
    return CombinatorialType(n, tuple(perm))


def _certify_renorm_period(o: ParamOracle, n: int, p: int,
                           ledger) -> RenormCert | None:
    c = o.enclosure(p, ledger)
    candidates = []
    for k in range(1, n + 1):
        if n % k:
            continue
        for pp in isolate_periodic_points(o, k, p, ledger):
            base = pp.enclosure.mig()
            if base > ZERO:
                candidates.append(base)
    candidates.sort(key=float)
    for base in candidates:
        for s in range(3, max(4, p // 2), 2):
            j = base - base.scale2(-s)
            if not j > ZERO:
                continue
            imgs = [TrackedInterval.from_exact(-j, j)]
            ok = True
            for _ in range(n):
                imgs.append(imgs[-1].image(c, p))
                if imgs[-1].outer().mag() > Dyadic(4):
                    ok = False
                    break
            if not ok:
                continue
            last = imgs[n]
            if not (-j < last.lo.lo and last.hi.hi < j):
                continue
            if any(not imgs[a].interiors_certainly_disjoint(imgs[b])
                   for a in range(n) for b in range(a + 1, n)):
                continue
            tau = _tau_of_images(imgs)
            if tau is None or not tau.is_single_cycle():
                continue
            return RenormCert(n, Interval(-j, j), imgs, tau, p)
    return None


def detect_renormalization(o: ParamOracle, max_period: int,
                           ledger: QueryLedger | None = None,
                           p_start: int = 64,
                           p_cap: int = 512) -> RenormCert | None:
    """Smallest certified renormalization of period <= max_period.

    Certificate: a symmetric dyadic interval J around 0 whose boundary sits
    just inside a periodic point, with f^n(J) strictly inside J and the n
    images pairwise disjoint in their interiors.  None when nothing
    certifies up to the precision cap.
    """
    check_param(o, ledger)
    for n in range(2, max_period + 1):
        p = p_start
        while p <= p_cap:
            cert = _certify_renorm_period(o, n, p, ledger)
            if cert is not None:
                return cert
            p *= 2
    return None


def recheck_renormalization(cert: RenormCert, o: ParamOracle) -> bool:
    """Post-hoc verification of the certificate at doubled precision."""
    p = 2 * cert.precision
    c = o.enclosure(p)
    imgs = [TrackedInterval.from_exact(cert.J.lo, cert.J.hi)]
    for _ in range(cert.period):
        imgs.append(imgs[-1].image(c, p))
    last = imgs[cert.period]
    if not (cert.J.lo < last.lo.lo and last.hi.hi < cert.J.hi):
        return False
    n = cert.period
    return all(imgs[a].interiors_certainly_disjoint(imgs[b])
               for a in range(n) for b in range(a + 1, n))


# ---------------------------------------------------------------------------
# Principal nest

@dataclass
class NestRecord:
    levels: list  # TrackedInterval, levels[0] = I^0 = [alpha, -alpha]
    return_iterates: list  # return_iterates[m] realizes g_m; [0] is None
    noncentral_levels: list
    closed: bool  # first-return construction closed (renormalization reached)
    truncated: bool  # stopped by precision/budget rather than by the dynamics
    precision: int
    param_enclosure: Interval | None = None

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def _membership(enc: Interval, t: TrackedInterval) -> int:
    """+1 certainly inside, -1 certainly outside, 0 undecided."""
    if t.certainly_contains_iv(enc):
        return 1
    if t.certainly_excludes_iv(enc):
        return -1
    return 0


def _orbit(c: Interval, length: int, p: int) -> list:
    xs = [Interval.point(ZERO)]
    for _ in range(length):
        xs.append(iv_quad_step(xs[-1], c, p))
    return xs


def _smallest_root(c: Interval, k: int, beta: Interval, domain: Interval,
                   p: int):
    """Leftmost solution of P^k(x) = beta on domain, with a clean-ness flag.

    Returns (enclosure, clean) where clean means: a certified sign change
    brackets the enclosure and no surviving box lies to its left (so it
    really is the smallest root).  (None, True) means certified no root.
    """
    min_width = Dyadic(1, -max(16, p // 2))
    queue = [domain]
    boxes = []
    while queue:
        x = queue.pop()
        v, _ = iter_eval(x, c, k, p)
        h = v - beta
        if not h.contains_zero():
            continue
        if x.width() <= min_width:
            boxes.append(x)
            continue
        mid = x.mid()
        queue.append(Interval(x.lo, mid))
        queue.append(Interval(mid, x.hi))
    if not boxes:
        return None, True
    boxes.sort(key=lambda b: float(b.lo))
    merged = [boxes[0]]
    for b in boxes[1:]:
        if merged[-1].hi >= b.lo:
            merged[-1] = merged[-1].hull(b)
        else:
            merged.append(b)

    def sign_at(x: Dyadic) -> int:
        v, _ = iter_eval(Interval.point(x), c, k, p)
        h = v - beta
        if h.lo > ZERO:
            return 1
        if h.hi < ZERO:
            return -1
        return 0

    cur = sign_at(domain.lo)
    if cur == 0:
        return merged[0], False
    for idx, box in enumerate(merged):
        probe = box.hi if idx + 1 == len(merged) else \
            (box.hi + merged[idx + 1].lo).half()
        s = sign_at(probe)
        if s == 0:
            return box, False
        if s != cur:
            return box, idx == 0
        # no crossing through this box: a root here could only be tangential
    # only tangential candidates: report the leftmost, uncertified
    return merged[0], False


class _NestStop(Exception):
    """Level construction terminated by the dynamics (no deeper level)."""


def _build_level(o: ParamOracle, c: Interval, p: int, prev: TrackedInterval,
                 orbit: list, max_return: int):
    """One nest level: (return iterate t, I^m, central flag, closed flag)."""
    t = None
    for k in range(1, min(max_return, len(orbit) - 1) + 1):
        m = _membership(orbit[k], prev)
        if m == 1:
            t = k
            break
        if m == 0:
            raise _Undecided(f"return membership at step {k}")
    if t is None:
        raise _NestStop
    root = None
    clean = True
    domain = Interval(ZERO, prev.hi.hi)
    for k in range(1, t + 1):
        for beta in (prev.lo, prev.hi):
            enc, ok = _smallest_root(c, k, beta, domain, p)
            if enc is None:
                continue
            if root is None or enc.hi < root.lo:
                root, clean = enc, ok
            elif not enc.disjoint(root):
                root = root.hull(enc)
                clean = clean and ok
            elif enc.lo > root.hi:
                continue
    q = o.known_critical_period
    strict = root is not None and root.hi < prev.hi.lo and root.lo > ZERO
    if strict and clean:
        level = TrackedInterval(Interval(-root.hi, -root.lo), root)
        if q is not None and t == q:
            return t, level, True, True
        m = _membership(orbit[t], level)
        if m == 0:
            raise _Undecided("centrality test")
        return t, level, m == 1, False
    at_boundary = root is None or not root.hi < prev.hi.lo
    if q is not None and t == q and at_boundary:
        # closure with the root at (or uncertifiably near) the boundary:
        # the central component fills prev up to enclosure slack, and the
        # return realizes the renormalization itself
        return t, prev, True, True
    if not clean:
        raise _Undecided("uncertified leftmost boundary root")
    raise _NestStop


def principal_nest(o: ParamOracle, max_depth: int,
                   ledger: QueryLedger | None = None,
                   p_start: int = 64, p_cap: int | None = None,
                   max_return: int = 256) -> NestRecord:
    """Principal nest I^0 of [alpha, -alpha] and its first-return levels.

    Levels are built until max_depth, until the construction closes on a
    renormalization, or until the dynamics admits no deeper central
    component.  Precision escalates on undecided tests; running out marks
    the record truncated.
    """
    check_param(o, ledger)
    p_cap = p_cap or precision_cap()
    p = p_start
    record = None
    while p <= p_cap:
        try:
            return _nest_at_precision(o, max_depth, p, ledger, max_return)
        except _Undecided:
            p *= 2
    if record is None:
        record = NestRecord([], [None], [], False, True, p_cap)
    return record


def _nest_at_precision(o: ParamOracle, max_depth: int, p: int, ledger,
                       max_return: int) -> NestRecord:
    c = o.enclosure(p, ledger)
    alpha = None
    for pp in isolate_periodic_points(o, 1, p, ledger):
        if pp.enclosure.hi < ZERO:
            alpha = pp.enclosure
    if alpha is None:
        return NestRecord([], [None], [], False, False, p, c)
    i0 = TrackedInterval(alpha, Interval(-alpha.hi, -alpha.lo))
    levels, returns, noncentral = [i0], [None], []
    orbit = _orbit(c, max_return, p)
    closed = False
    for m in range(1, max_depth + 1):
        try:
            t, level, central, closed = _build_level(
                o, c, p, levels[-1], orbit, max_return)
        except _NestStop:
            break
        levels.append(level)
        returns.append(t)
        if not central:
            noncentral.append(m)
        if closed:
            break
    return NestRecord(levels, returns, noncentral, closed, False, p, c)


# ---------------------------------------------------------------------------
# Cascades

@dataclass
class CascadeInfo:
    start_level: int  # m(k)
    end_level: int  # m(k+1)
    saddle_node: bool | None  # None = undecided at this precision
    depth_bound: int | None  # d_k; None when a membership was undecided
    neglectable_levels: range = field(default_factory=lambda: range(0))

    @property
    def length(self) -> int:
        return self.end_level - self.start_level


def cascades(nest: NestRecord, postcritical: list) -> list:
    """Cascade decomposition of the nest with certified saddle-node flags.

    postcritical: orbit enclosures of 0 (index i holds P^i(0)); it must be
    long enough that every first return used below stays in range.
    """
    if nest.depth <= 0:
        return []
    c = nest.param_enclosure
    p = nest.precision
    ms = [0] + list(nest.noncentral_levels)
    out = []
    for k in range(len(ms) - 1):
        mk, mk1 = ms[k], ms[k + 1]
        inner = nest.levels[mk + 1]
        t = nest.return_iterates[mk + 1]
        img = inner
        for _ in range(t):
            img = img.image(c, p)
        if img.certainly_excludes_point(ZERO):
            sn = True
        elif img.certainly_contains_point(ZERO):
            sn = False
        else:
            sn = None
        dk = _depth_bound(nest, postcritical, mk, mk1)
        negl = range(0)
        if sn and dk is not None and mk + dk + 1 < mk1 - dk:
            negl = range(mk + dk + 1, mk1 - dk)
        out.append(CascadeInfo(mk, mk1, sn, dk, negl))
    return out


def _depth_bound(nest: NestRecord, postcritical: list, mk: int,
                 mk1: int) -> int | None:
    """d_k = max depth d(x) over postcritical x in I^{m(k)} \\ I^{m(k)+1}."""
    best = 0
    for i in range(1, len(postcritical)):
        x = postcritical[i]
        in_outer = _membership(x, nest.levels[mk])
        in_inner = _membership(x, nest.levels[mk + 1])
        if in_inner == 1 or in_outer == -1:
            continue  # certainly not in the annulus
        if in_outer == 0 or in_inner == 0:
            return None  # might be in the annulus: flag unknown

        # first return of x to I^{m(k)}
        s = None
        for step in range(1, len(postcritical) - i):
            m = _membership(postcritical[i + step], nest.levels[mk])
            if m == 1:
                s = step
                break
            if m == 0:
                return None
        if s is None:
            return None
        y = postcritical[i + s]
        j = mk
        for l in range(mk + 1, min(mk1, nest.depth) + 1):
            m = _membership(y, nest.levels[l])
            if m == 1:
                j = l
            elif m == -1:
                break
            else:
                return None
        best = max(best, max(0, min(j - mk, mk1 - j)))
    return best


# ---------------------------------------------------------------------------
# Essential period

@dataclass
class EssentialData:
    period: int  # p: period of J = I^{m(kappa)+1}
    essential_period: int
    neglectable: list  # bool per J_i
    reduced: CombinatorialType  # permutation after deleting neglectable J_i
    full: CombinatorialType | None
    cascade_list: list
    nest: NestRecord


def essential_structure(o: ParamOracle, ledger: QueryLedger | None = None,
                        max_depth: int = 64,
                        p_start: int = 64,
                        p_cap: int | None = None) -> EssentialData | None:
    """Renormalization cycle of J = I^{m(kappa)+1} with neglectability data.

    Neglectability follows the cascade rule: an interval certified inside a
    neglectable annulus I^l \\ I^{l+1} of a saddle-node cascade is
    neglectable, and intervals between two consecutive nest visits inherit
    the assignment of the visit that starts their block (the orbit transport
    of the annulus).  Returns None when anything stays undecided at the cap.
    """
    p_cap = p_cap or precision_cap()
    p = p_start
    while p <= p_cap:
        try:
            return _essential_at(o, ledger, max_depth, p)
        except _Undecided:
            p *= 2
    return None


def _essential_at(o: ParamOracle, ledger, max_depth: int,
                  p: int) -> EssentialData | None:
    nest = principal_nest(o, max_depth, ledger, p_start=p, p_cap=p)
    if nest.truncated:
        raise _Undecided("nest truncated")
    if not nest.closed:
        return None
    c = nest.param_enclosure
    mker = nest.noncentral_levels[-1] if nest.noncentral_levels else 0
    J = nest.levels[mker + 1]
    q = o.known_critical_period
    # period of J: smallest k with f^k(J) containing 0
    limit = q if q is not None else 4096
    imgs = [J]
    period = None
    for k in range(1, limit + 1):
        imgs.append(imgs[-1].image(c, p))
        if imgs[-1].certainly_contains_point(ZERO):
            period = k
            break
        if q is not None and k == q:
            period = k
            break
        if not imgs[-1].certainly_excludes_point(ZERO):
            raise _Undecided("period of J")
    if period is None:
        return None
    cycle = imgs[:period]
    postcritical = _orbit(c, 2 * period + 2, p)
    casc = cascades(nest, postcritical)
    if any(ci.saddle_node is None or ci.depth_bound is None for ci in casc):
        raise _Undecided("cascade flags")
    negl_levels = set()
    for ci in casc:
        if ci.saddle_node:
            negl_levels.update(ci.neglectable_levels)
    # own annulus assignment per cycle interval, then block inheritance
    own = [None] * period  # "center", annulus level int, or None (inherit)
    own[0] = "center"
    for i in range(1, period):
        lvl = None
        ambiguous = False
        for l in range(nest.depth + 1):
            if cycle[i].certainly_inside(nest.levels[l]):
                lvl = l
            else:
                # not certified inside; if also not certainly apart, the
                # annulus could be l-1 or deeper
                ambiguous = not cycle[i].interiors_certainly_disjoint(
                    nest.levels[l])
                break
        if ambiguous and negl_levels:
            # escalate unless every unresolved depth agrees on
            # neglectability; otherwise the answer could depend on it
            lo = lvl if lvl is not None else 0
            stats = {m in negl_levels for m in range(lo, nest.depth + 1)}
            if lvl is None or len(stats) > 1:
                raise _Undecided(f"annulus assignment of J_{i}")
        if lvl is not None:
            own[i] = lvl
    negl = [False] * period
    carry = "center"
    for i in range(period):
        if own[i] is not None:
            carry = own[i]
        negl[i] = isinstance(carry, int) and carry in negl_levels
    survivors = [i for i in range(period) if not negl[i]]
    reduced = _cycle_type([cycle[i] for i in survivors])
    full = _cycle_type(cycle)
    if reduced is None:
        raise _Undecided("reduced ranking")
    return EssentialData(period, len(survivors), negl, reduced, full,
                         casc, nest)


def _cycle_type(tracked: list) -> CombinatorialType | None:
    """Type of the cycle J_{i0} -> J_{i1} -> ... -> J_{i0} in real order."""
    n = len(tracked)
    ranks = _rank_descending(tracked)
    if ranks is None:
        return None
    perm = [0] * n
    for i in range(n):
        perm[ranks[i] - 1] = ranks[(i + 1) % n]
    return CombinatorialType(n, tuple(perm))


def essential_period(o: ParamOracle, ledger: QueryLedger | None = None,
                     max_depth: int = 64) -> int | None:
    """p_e(f): non-neglectable intervals in the renormalization cycle."""
    data = essential_structure(o, ledger, max_depth)
    return None if data is None else data.essential_period


def essentially_equivalent(a: EssentialData, b: EssentialData) -> bool:
    """Same permutation after removing neglectable intervals from both."""
    return (a.reduced.period == b.reduced.period
            and a.reduced.perm == b.reduced.perm)
