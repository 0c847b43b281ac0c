"""Exact dyadic-rational arithmetic and outward-rounded interval arithmetic.

Every certified computation in this package bottoms out here: a Dyadic is an
exact binary rational m * 2^e with unbounded integer mantissa, and an Interval
is a pair of Dyadics enclosing a real value.  Ring operations on Dyadics are
exact; rounding only ever happens when explicitly requested, always to a
stated absolute granule 2^-m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DOWN = "down"
UP = "up"
NEAREST = "nearest"


@dataclass(frozen=True)
class Precision:
    """Absolute rounding granule 2^-bits."""

    bits: int

    def __post_init__(self):
        if self.bits < 1:
            raise ValueError("precision must be at least 1 bit")


def _bits(p) -> int:
    return p.bits if isinstance(p, Precision) else int(p)


class Dyadic:
    """Exact binary rational: value = man * 2^exp, man odd or zero.

    Canonical form (odd mantissa, zero has exponent 0) makes equality
    structural, so Dyadics are hashable and comparisons in hot loops stay
    cheap.
    """

    __slots__ = ("man", "exp")

    def __init__(self, man: int, exp: int = 0):
        if man == 0:
            exp = 0
        else:
            tz = (man & -man).bit_length() - 1
            if tz:
                man >>= tz
                exp += tz
        object.__setattr__(self, "man", man)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, *a):
        raise AttributeError("Dyadic is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_float(cls, x: float) -> "Dyadic":
        n, d = float(x).as_integer_ratio()
        return cls(n, -(d.bit_length() - 1))

    @classmethod
    def from_fraction_rounded(cls, q: Fraction, m: int, mode: str = NEAREST) -> "Dyadic":
        """Nearest/directed element of D_m to an arbitrary rational."""
        scaled = q * (1 << m) if m >= 0 else q / (1 << -m)
        n, d = scaled.numerator, scaled.denominator
        quo, rem = divmod(n, d)
        if rem == 0:
            return cls(quo, -m)
        if mode == DOWN:
            pass
        elif mode == UP:
            quo += 1
        elif mode == NEAREST:
            if 2 * rem > d or (2 * rem == d and quo & 1):
                quo += 1
        else:
            raise ValueError(f"bad rounding mode {mode!r}")
        return cls(quo, -m)

    @classmethod
    def parse(cls, s: str) -> "Dyadic":
        """Parse 'm*2^e', an integer, or an exactly-dyadic decimal ('-1.75')."""
        s = s.strip()
        if "*2^" in s:
            man, exp = s.split("*2^")
            return cls(int(man), int(exp))
        if "." in s or "e" in s or "E" in s:
            q = Fraction(s)
            d = cls.from_fraction_rounded(q, 64)
            if d.as_fraction() != q:
                raise ValueError(f"{s!r} is not exactly dyadic at 64 bits; "
                                 f"use m*2^e syntax or pre-round explicitly")
            return d
        return cls(int(s))

    # -- exact ring operations --------------------------------------------

    def __add__(self, other: "Dyadic") -> "Dyadic":
        a, b = self, other
        if a.man == 0:
            return b
        if b.man == 0:
            return a
        e = min(a.exp, b.exp)
        return Dyadic((a.man << (a.exp - e)) + (b.man << (b.exp - e)), e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.man, self.exp)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.man * other.man, self.exp + other.exp)

    def __abs__(self) -> "Dyadic":
        return Dyadic(abs(self.man), self.exp)

    def half(self) -> "Dyadic":
        return Dyadic(self.man, self.exp - 1)

    def scale2(self, k: int) -> "Dyadic":
        """Exact multiplication by 2^k."""
        return Dyadic(self.man, self.exp + k)

    # -- comparison (exact) ------------------------------------------------

    def _cmp(self, other: "Dyadic") -> int:
        d = self - other
        return (d.man > 0) - (d.man < 0)

    def __lt__(self, o):
        return self._cmp(o) < 0

    def __le__(self, o):
        return self._cmp(o) <= 0

    def __gt__(self, o):
        return self._cmp(o) > 0

    def __ge__(self, o):
        return self._cmp(o) >= 0

    def __eq__(self, o):
        return isinstance(o, Dyadic) and self.man == o.man and self.exp == o.exp

    def __hash__(self):
        return hash((self.man, self.exp))

    @property
    def sign(self) -> int:
        return (self.man > 0) - (self.man < 0)

    # -- rounding ----------------------------------------------------------

    def round(self, m, mode: str = NEAREST) -> "Dyadic":
        """Round to the grid D_m (granule 2^-m).

        Directed modes bracket the value; nearest lands within 2^-(m+1),
        ties to even.
        """
        m = _bits(m)
        shift = -(self.exp + m)
        if shift <= 0 or self.man == 0:
            return self
        quo, rem = divmod(self.man, 1 << shift)
        if rem == 0:
            return Dyadic(quo, -m)
        if mode == DOWN:
            pass
        elif mode == UP:
            quo += 1
        elif mode == NEAREST:
            half = 1 << (shift - 1)
            if rem > half or (rem == half and quo & 1):
                quo += 1
        else:
            raise ValueError(f"bad rounding mode {mode!r}")
        return Dyadic(quo, -m)

    def in_grid(self, m: int) -> bool:
        """True iff self is an element of D_m."""
        return self.man == 0 or self.exp >= -m

    def floor_int(self) -> int:
        if self.exp >= 0:
            return self.man << self.exp
        return self.man >> -self.exp

    def ceil_int(self) -> int:
        return -(-self).floor_int()

    # -- conversion / rendering --------------------------------------------

    def as_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man << self.exp)
        return Fraction(self.man, 1 << -self.exp)

    def __float__(self) -> float:
        # Round to 53 bits first so huge mantissas never overflow float().
        r = self.round(64)
        try:
            return r.man * 2.0 ** r.exp
        except OverflowError:
            return float("inf") if r.man > 0 else float("-inf")

    def __str__(self) -> str:
        return f"{self.man}*2^{self.exp}"

    def __repr__(self) -> str:
        return f"Dyadic({self.man}, {self.exp})"

    def decimal(self, digits: int = 12) -> str:
        """Decimal rendering with an explicit error statement when inexact."""
        q = self.as_fraction()
        scaled = q * 10**digits
        n = scaled.numerator // scaled.denominator
        exact = scaled.denominator == 1
        sign = "-" if n < 0 else ""
        n = abs(n)
        whole, frac = divmod(n, 10**digits)
        out = f"{sign}{whole}.{str(frac).zfill(digits)}"
        return out if exact else out + f" (+/- 1e-{digits})"


ZERO = Dyadic(0)
ONE = Dyadic(1)
TWO = Dyadic(2)


def dy_add(a: Dyadic, b: Dyadic) -> Dyadic:
    return a + b


def dy_mul(a: Dyadic, b: Dyadic) -> Dyadic:
    return a * b


def dy_round(a: Dyadic, m, direction: str = NEAREST) -> Dyadic:
    return a.round(m, direction)


def dy_min(a: Dyadic, b: Dyadic) -> Dyadic:
    return a if a <= b else b


def dy_max(a: Dyadic, b: Dyadic) -> Dyadic:
    return a if a >= b else b


class Interval:
    """Closed interval [lo, hi] with exact dyadic endpoints.

    All operations are sound over-enclosures; operations taking a precision
    outward-round each endpoint to the granule 2^-p.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Dyadic, hi: Dyadic):
        if lo > hi:
            raise ValueError(f"interval endpoints out of order: {lo} > {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, *a):
        raise AttributeError("Interval is immutable")

    @classmethod
    def point(cls, d: Dyadic) -> "Interval":
        return cls(d, d)

    @classmethod
    def from_floats(cls, lo: float, hi: float) -> "Interval":
        return cls(Dyadic.from_float(lo), Dyadic.from_float(hi))

    # -- geometry ----------------------------------------------------------

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def mid(self) -> Dyadic:
        return (self.lo + self.hi).half()

    def rad(self) -> Dyadic:
        return (self.hi - self.lo).half()

    def mag(self) -> Dyadic:
        """sup |x| over the interval."""
        return dy_max(abs(self.lo), abs(self.hi))

    def mig(self) -> Dyadic:
        """inf |x| over the interval (0 if the interval straddles 0)."""
        if self.contains_zero():
            return ZERO
        return dy_min(abs(self.lo), abs(self.hi))

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Dyadic) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= ZERO <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_contains(self, other: "Interval") -> bool:
        return self.lo < other.lo and other.hi < self.hi

    def disjoint(self, other: "Interval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def interiors_disjoint(self, other: "Interval") -> bool:
        return self.hi <= other.lo or other.hi <= self.lo

    def intersect(self, other: "Interval") -> "Interval | None":
        lo, hi = dy_max(self.lo, other.lo), dy_min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def hull(self, other: "Interval") -> "Interval":
        return Interval(dy_min(self.lo, other.lo), dy_max(self.hi, other.hi))

    # -- arithmetic (exact unless a precision is given) ---------------------

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return self + (-other)

    def __mul__(self, other: "Interval") -> "Interval":
        cands = [self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi]
        lo = hi = cands[0]
        for c in cands[1:]:
            if c < lo:
                lo = c
            if c > hi:
                hi = c
        return Interval(lo, hi)

    def square(self) -> "Interval":
        """Exact {x^2 : x in self}; tighter than self*self when 0 is inside."""
        a2, b2 = self.lo * self.lo, self.hi * self.hi
        if self.contains_zero():
            return Interval(ZERO, dy_max(a2, b2))
        return Interval(dy_min(a2, b2), dy_max(a2, b2))

    def scale2(self, k: int) -> "Interval":
        return Interval(self.lo.scale2(k), self.hi.scale2(k))

    def round_out(self, p) -> "Interval":
        m = _bits(p)
        return Interval(self.lo.round(m, DOWN), self.hi.round(m, UP))

    def divide(self, other: "Interval", p) -> "Interval":
        """Enclosure of self/other; other must not contain 0."""
        if other.contains_zero():
            raise ZeroDivisionError("interval divisor contains zero")
        m = _bits(p)
        quots = [_dy_div(a, b, m) for a in (self.lo, self.hi)
                 for b in (other.lo, other.hi)]
        lo = min(q[0] for q in quots)
        hi = max(q[1] for q in quots)
        return Interval(lo, hi)

    def __eq__(self, o):
        return isinstance(o, Interval) and self.lo == o.lo and self.hi == o.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def _dy_div(a: Dyadic, b: Dyadic, m: int) -> tuple[Dyadic, Dyadic]:
    """Directed-rounded quotient bracket: returns (floor, ceil) in D_m."""
    # a/b * 2^m = (a.man / b.man) * 2^(a.exp - b.exp + m)
    num, den = a.man, b.man
    if den < 0:
        num, den = -num, -den
    e = a.exp - b.exp + m
    if e >= 0:
        num <<= e
    else:
        den <<= -e
    quo, rem = divmod(num, den)
    lo = Dyadic(quo, -m)
    hi = lo if rem == 0 else Dyadic(quo + 1, -m)
    return lo, hi


def iv_quad_step(x: Interval, c: Interval, p) -> Interval:
    """Outward enclosure of {v^2 + w : v in x, w in c} at precision p."""
    return (x.square() + c).round_out(p)


def iv_deriv_enclosure(x: Interval, p=None) -> Interval:
    """Enclosure of the map derivative 2v over x (exact)."""
    return x.scale2(1)
