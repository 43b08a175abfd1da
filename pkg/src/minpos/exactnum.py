"""Exact rationals and rational-endpoint interval arithmetic.

Rationals are :class:`fractions.Fraction` values; every irrational quantity in
the package is carried as an :class:`Interval` whose endpoints are exact
rationals, so containment of the true value is never lost to rounding.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import DomainError, ParseError

Rational = Fraction

_DECIMAL_RE = re.compile(
    r"""
    \s*
    (?P<sign>[-+])?
    (?:
        (?P<num>\d+)\s*/\s*(?P<den>\d+)
      |
        (?P<int>\d*)(?:\.(?P<frac>\d*))?(?:[eE](?P<exp>[-+]?\d+))?
    )
    \s*\Z
    """,
    re.VERBOSE,
)


def parse_decimal(text: str) -> Fraction:
    """Parse a decimal numeral (``"0.25"``, ``"-3"``, ``"1e-30"``) or ``"p/q"`` exactly.

    Binary floats are never involved, so ``"0.1"`` is exactly one tenth.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected text, got {type(text).__name__}")
    m = _DECIMAL_RE.match(text)
    if m is None:
        raise ParseError(f"malformed numeral: {text!r}")
    sign = -1 if m.group("sign") == "-" else 1
    if m.group("num") is not None:
        den = int(m.group("den"))
        if den == 0:
            raise DomainError(f"zero denominator in {text!r}")
        return sign * Fraction(int(m.group("num")), den)
    int_part = m.group("int") or ""
    frac_part = m.group("frac") or ""
    if not int_part and not frac_part:
        raise ParseError(f"malformed numeral: {text!r}")
    digits = int(int_part + frac_part or "0")
    exp = int(m.group("exp") or 0) - len(frac_part)
    if exp >= 0:
        value = Fraction(digits * 10**exp)
    else:
        value = Fraction(digits, 10**-exp)
    return sign * value


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and numeral strings to Fraction; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_decimal(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def floor_to_bits(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction((x.numerator * scale) // x.denominator, scale)


def ceil_to_bits(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-((-x.numerator * scale) // x.denominator), scale)


def bits_for_width(width: Fraction) -> int:
    """Smallest k >= 0 with ``2**-k <= width``."""
    if width <= 0:
        raise DomainError("width must be positive")
    num, den = width.numerator, width.denominator
    k = max(0, den.bit_length() - num.bit_length())
    while (num << k) < den:
        k += 1
    while k > 0 and (num << (k - 1)) >= den:
        k -= 1
    return k


@dataclass(frozen=True)
class Precision:
    """Absolute width requested for an enclosure."""

    target_width: Fraction

    def __post_init__(self):
        w = as_rational(self.target_width)
        if w <= 0:
            raise DomainError("target_width must be positive")
        object.__setattr__(self, "target_width", w)

    @classmethod
    def of(cls, width) -> "Precision":
        if isinstance(width, Precision):
            return width
        return cls(as_rational(width))

    def scaled(self, factor) -> "Precision":
        return Precision(self.target_width * as_rational(factor))

    @property
    def bits(self) -> int:
        return bits_for_width(self.target_width)


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "Interval":
        x = as_rational(x)
        return cls(x, x)

    @staticmethod
    def coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        return Interval.point(x)

    # -- queries -------------------------------------------------------
    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = as_rational(x)
        return self.lo <= x <= self.hi

    __contains__ = contains

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        if not self.overlaps(other):
            raise DomainError(f"disjoint intervals {self} and {other}")
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def positive(self) -> bool:
        return self.lo > 0

    def negative(self) -> bool:
        return self.hi < 0

    def mag(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    # -- outward rounding ----------------------------------------------
    def round_out(self, bits: int) -> "Interval":
        """Widen endpoints to the grid of multiples of ``2**-bits``."""
        return Interval(floor_to_bits(self.lo, bits), ceil_to_bits(self.hi, bits))

    # -- arithmetic ----------------------------------------------------
    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __add__(self, other):
        o = Interval.coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = Interval.coerce(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        o = Interval.coerce(other)
        if o.is_point():
            c = o.lo
            return Interval(self.lo * c, self.hi * c) if c >= 0 else Interval(self.hi * c, self.lo * c)
        if self.lo >= 0 and o.lo >= 0:
            return Interval(self.lo * o.lo, self.hi * o.hi)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise DomainError(f"division by interval containing zero: {self}")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        o = Interval.coerce(other)
        if o.is_point():
            if o.lo == 0:
                raise DomainError("division by zero")
            return self * Interval.point(1 / o.lo)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return Interval.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("only non-negative integer powers are supported")
        if k == 0:
            return Interval.point(1)
        if self.lo >= 0:
            return Interval(self.lo**k, self.hi**k)
        if self.hi <= 0:
            a, b = self.hi**k, self.lo**k
            return Interval(a, b) if k % 2 == 0 else Interval(-abs(b), -abs(a))
        if k % 2:
            return Interval(self.lo**k, self.hi**k)
        return Interval(0, max(self.lo**k, self.hi**k))

    def square(self) -> "Interval":
        return self**2

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


def interval_arith(x: Interval, y: Interval, op: str) -> Interval:
    """Apply one of ``+ - * /`` (``×``/``÷``/``−`` also accepted) to two intervals."""
    x, y = Interval.coerce(x), Interval.coerce(y)
    if op == "+":
        return x + y
    if op in ("-", "−"):
        return x - y
    if op in ("*", "×"):
        return x * y
    if op in ("/", "÷"):
        return x / y
    raise DomainError(f"unknown interval operation {op!r}")


def _exact_sqrt(x: Fraction):
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_enclosure(x, prec) -> Interval:
    """Enclose ``sqrt(x)`` with width at most ``prec.target_width``.

    The bracket comes from an integer square root of ``x`` scaled by ``4**k``,
    so ``lo**2 <= x <= hi**2`` holds by construction.
    """
    x = as_rational(x)
    prec = Precision.of(prec)
    if x < 0:
        raise DomainError(f"square root of negative number {x}")
    exact = _exact_sqrt(x)
    if exact is not None:
        return Interval.point(exact)
    k = prec.bits
    scaled = (x.numerator << (2 * k)) // x.denominator
    s = math.isqrt(scaled)
    return Interval(Fraction(s, 1 << k), Fraction(s + 1, 1 << k))


def _atanh_series(u: Fraction, bits: int, upward: bool) -> Fraction:
    """Bound ``2*atanh(u) = 2*sum u**(2j+1)/(2j+1)`` for ``0 <= u <= 1/2``.

    Fixed-point terms at ``bits + 8`` bits are rounded in one direction; the
    upward variant also adds the geometric tail.
    """
    if u == 0:
        return Fraction(0)
    b = bits + 8
    one = 1 << b
    if upward:
        U = -((-u.numerator * one) // u.denominator)
    else:
        U = (u.numerator * one) // u.denominator
    U2 = U * U
    power, total, j = U, 0, 0
    while True:
        if upward:
            total += -((-2 * power) // (2 * j + 1))
        else:
            total += (2 * power) // (2 * j + 1)
        j += 1
        power = -((-power * U2) // (one * one)) if upward else (power * U2) // (one * one)
        # tail <= 2*u^(2j+1)/((2j+1)(1-u^2)) <= 3*power/(2j+1) for u <= 1/2
        if 3 * power // (2 * j + 1) < (one >> (bits + 2)) or power == 0:
            break
    if upward:
        total += -((-3 * power) // (2 * j + 1)) + 1
    return Fraction(total, one)


def _ln_bounds(v: Fraction, bits: int):
    """(lower, upper) for ln(v), v > 0, via ln v = m ln 2 + ln(v / 2**m)."""
    if v == 1:
        return Fraction(0), Fraction(0)
    if v < 1:
        lo, hi = _ln_bounds(1 / v, bits)
        return -hi, -lo
    m = v.numerator.bit_length() - v.denominator.bit_length()
    while v < (1 << m):
        m -= 1
    while v >= (1 << (m + 1)):
        m += 1
    r = v / (1 << m)
    extra = max(1, m).bit_length()
    ln2_lo = _atanh_series(Fraction(1, 3), bits + extra, upward=False)
    ln2_hi = _atanh_series(Fraction(1, 3), bits + extra, upward=True)
    u = (r - 1) / (r + 1)
    return (
        _atanh_series(u, bits, upward=False) + m * ln2_lo,
        _atanh_series(u, bits, upward=True) + m * ln2_hi,
    )


def log_enclosure(x, prec) -> Interval:
    """Enclose the natural logarithm of a positive rational or interval."""
    prec = Precision.of(prec)
    x = Interval.coerce(x)
    if x.lo <= 0:
        raise DomainError("logarithm of non-positive value")
    bits = prec.bits + 4
    return Interval(_ln_bounds(x.lo, bits)[0], _ln_bounds(x.hi, bits)[1])


def render_decimal(x, digits: int) -> str:
    """Render with exactly ``digits`` significant digits, rounding half to even.

    Plain notation is used for moderate magnitudes and ``1.23E+5`` style
    otherwise (the rules of :class:`decimal.Decimal`'s ``str``).
    """
    from decimal import Decimal

    if digits < 1:
        raise DomainError("digits must be at least 1")
    x = as_rational(x)
    if x == 0:
        return "0"
    sign = 1 if x < 0 else 0
    ax = abs(x)
    e = len(str(ax.numerator)) - len(str(ax.denominator))
    while Fraction(10) ** e > ax:
        e -= 1
    while Fraction(10) ** (e + 1) <= ax:
        e += 1
    scaled = ax * Fraction(10) ** (digits - 1 - e)
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r > scaled.denominator or (2 * r == scaled.denominator and q % 2):
        q += 1
    if q == 10**digits:
        q //= 10
        e += 1
    return str(Decimal((sign, tuple(int(ch) for ch in str(q)), e - digits + 1)))
