"""Closed forms for the recurrence, all returned as rigorous enclosures.

Notation used below:

* ``a_low < 1 < a_high`` are the zeros of ``mu X^2 - q X + lambda``;
* ``c = 1 / sqrt(q^2 - 4 lambda mu)``;
* ``Phi_n(z) = sum_{k>=0} z^k / (n + k)``;
* ``ahat = (xi / lambda) (Phi_n(a_low) - 1/n)`` is the threshold initial value.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .errors import DomainError, PrecisionError
from .exactnum import (
    Interval,
    Precision,
    as_rational,
    ceil_to_bits,
    log_enclosure,
    sqrt_enclosure,
)
from .recurrence import ModelParams

_MAX_REFINE = 40


@dataclass(frozen=True)
class Roots:
    a_low: Interval
    a_high: Interval
    c: Interval


@dataclass(frozen=True)
class SeriesValue:
    value: Interval
    terms_used: int
    tail_bound: Fraction
    # only filled in by phi_tail
    lower_bound: Optional[Fraction] = None
    integral_bound: Optional[Fraction] = None


def _refine(compute: Callable[[Precision], Interval], prec: Precision):
    """Call ``compute`` at tightening working widths until the result is narrow enough.

    ``compute`` may return an Interval or an object with a ``value`` Interval.
    """
    target = prec.target_width
    work = target / 16
    best = None
    for _ in range(_MAX_REFINE):
        out = compute(Precision(work))
        iv = out.value if isinstance(out, SeriesValue) else out
        if iv.width <= target:
            return out
        best = out
        work *= min(Fraction(1, 256), target / (iv.width * 64))
    raise PrecisionError(f"could not reach width {target}", best=best)


def _pow_out(x: Interval, k: int, bits: int) -> Interval:
    """``x**k`` for ``x >= 0``, rounding outward to ``2**-bits`` after each product."""
    if x.lo < 0:
        raise DomainError("_pow_out needs a non-negative base")
    result = Interval.point(1)
    base = x
    while k:
        if k & 1:
            result = (result * base).round_out(bits)
        k >>= 1
        if k:
            base = (base * base).round_out(bits)
    return result


# -- characteristic polynomial --------------------------------------------------

@functools.lru_cache(maxsize=256)
def _roots_at(params: ModelParams, sqrt_width: Fraction) -> Roots:
    s = sqrt_enclosure(params.discriminant, Precision(sqrt_width))
    q = params.q
    # 2*lambda/(q + s) avoids subtracting nearly equal numbers for a_low
    a_low = Interval.point(2 * params.lam) / (s + q)
    a_high = (s + q) / (2 * params.mu)
    return Roots(a_low, a_high, s.reciprocal())


def solve_characteristic(params: ModelParams, prec) -> Roots:
    """Enclose both zeros of ``mu X^2 - q X + lambda`` and ``c``, each within the target width."""
    prec = Precision.of(prec)
    target = prec.target_width
    w = target / 4
    for _ in range(_MAX_REFINE):
        r = _roots_at(params, w)
        widths = (r.a_low.width, r.a_high.width, r.c.width)
        if (max(widths) <= target and r.a_low.lo > 0 and r.a_low.hi < 1
                and r.a_high.lo > 1):
            return r
        w /= 1 << 16
    raise PrecisionError("root enclosure did not converge")


# -- Lerch-type series ------------------------------------------------------------

def _lerch_fixed(z: Fraction, m: int, bits: int, upward: bool, terms: Optional[int] = None,
                 tol: Optional[Fraction] = None):
    """Fixed-point bound on ``sum_{j>=0} z^j / (m + j)`` for rational ``0 <= z < 1``.

    Returns ``(bound, terms, tail)``.  The upward bound includes the geometric
    tail ``z^K / ((m + K)(1 - z))``; the downward bound is a plain partial sum.
    """
    one = 1 << bits
    if upward:
        Z = -((-z.numerator * one) // z.denominator)
    else:
        Z = (z.numerator * one) // z.denominator
    P = one
    total = 0
    j = 0
    while True:
        if terms is not None and j >= terms:
            break
        if upward:
            total += -((-P) // (m + j))
        else:
            total += P // (m + j)
        j += 1
        P = -((-P * Z) // one) if upward else (P * Z) // one
        if terms is None:
            tail = Fraction(P, one) / ((m + j) * (1 - z))
            if tail <= tol or P == 0:
                break
    tail = Fraction(0)
    if upward:
        tail = ceil_to_bits(Fraction(P, one) / ((m + j) * (1 - z)), bits)
        total_frac = Fraction(total, one) + tail
    else:
        total_frac = Fraction(total, one)
    return total_frac, j, tail


def _phi_at(n: int, z: Interval, work: Precision) -> SeriesValue:
    if z.hi == 0:
        return SeriesValue(Interval.point(Fraction(1, n)), 1, Fraction(0))
    tol = work.target_width / 4
    bits = work.bits + 8
    while True:
        hi, k, tail = _lerch_fixed(z.hi, n, bits, upward=True, tol=tol)
        # k rounding errors of at most 2**-bits each on the downward pass
        if Fraction(k, 1 << bits) <= tol:
            break
        bits += k.bit_length() + 2
    lo, _, _ = _lerch_fixed(z.lo, n, bits, upward=False, terms=k)
    return SeriesValue(Interval(lo, hi), k, tail)


def _check_series_arg(z: Interval):
    if z.lo < 0:
        raise DomainError("series argument must be non-negative")
    if z.hi >= 1:
        raise DomainError("series diverges for z >= 1")


def phi(n: int, z, prec) -> SeriesValue:
    """Enclose ``Phi_n(z) = sum_{k>=0} z^k / (n+k)`` for ``0 <= z < 1``.

    The series is increasing in ``z``, so the enclosure is the partial sum at
    ``z.lo`` rounded down up to the partial sum at ``z.hi`` plus its tail.
    """
    if n < 1:
        raise DomainError("n must be a positive integer")
    z = Interval.coerce(z)
    _check_series_arg(z)
    # for a non-degenerate z only the truncation part of the width is controlled
    return _phi_at(n, z, Precision.of(prec))


def phi_tail(n: int, z, i: int, prec) -> SeriesValue:
    """Enclose ``T_i = sum_{k>=i} z^k / (n+k)``, computed as ``z^i * Phi_{n+i}(z)``.

    Also reports the rational sandwich ``z^i/(n+i) <= T_i <= z^i/(n+i) * (1 + 1/(-ln z))``
    (the second from comparing the tail with an integral).
    """
    z = Interval.coerce(z)
    _check_series_arg(z)
    if not z.hi > 0:
        raise DomainError("phi_tail needs z > 0")
    if i < 1:
        raise DomainError("tail index must be at least 1")
    prec = Precision.of(prec)

    def compute(work: Precision) -> SeriesValue:
        inner = _phi_at(n + i, z, work)
        zi = _pow_out(z, i, work.bits + 8)
        return SeriesValue(zi * inner.value, inner.terms_used, inner.tail_bound)

    if z.is_point():
        out = _refine(compute, prec)
    else:
        out = compute(prec.scaled(Fraction(1, 16)))

    lower = _pow_out(Interval.point(z.lo), i, prec.bits + 64).lo / (n + i)
    neg_log = -log_enclosure(z.hi, Fraction(1, 1 << 40))
    if neg_log.lo > 0:
        zi_hi = _pow_out(Interval.point(z.hi), i, prec.bits + 64).hi
        integral = zi_hi / (n + i) * (1 + 1 / neg_log.lo)
    else:
        integral = None
    return SeriesValue(out.value, out.terms_used, out.tail_bound, lower, integral)


# -- threshold and solution formulas -------------------------------------------------

def _series_sum(params: ModelParams, work: Precision) -> Interval:
    """Enclose ``S = sum_{k>=1} a_low^k / (k+n) = Phi_n(a_low) - 1/n``."""
    roots = solve_characteristic(params, work.scaled(Fraction(1, 8)))
    return phi_tail(params.offset, roots.a_low, 1, work.scaled(Fraction(1, 2))).value


def threshold_series(params: ModelParams, prec) -> Interval:
    """Enclose the threshold ``ahat = (xi/lambda) (Phi_n(a_low) - 1/n)``."""
    prec = Precision.of(prec)
    if params.xi == 0:
        return Interval.point(0)
    factor = params.xi / params.lam
    return _refine(lambda w: _series_sum(params, w.scaled(1 / factor)) * factor, prec)


def explicit_value(params: ModelParams, x, i: int, prec) -> Interval:
    """Evaluate the explicit solution formula for ``a_i`` with ``a_1 = x``.

    The two exponential branches ``a_low^-i`` and ``a_high^-i`` nearly cancel
    for ``x`` close to the threshold, so root enclosures are tightened until
    the result fits the requested width; cost grows linearly with ``i``.
    """
    if i < 1:
        raise DomainError("index must be at least 1")
    x = as_rational(x)
    prec = Precision.of(prec)
    lam, xi, n = params.lam, params.xi, params.offset

    def compute(work: Precision) -> Interval:
        r = solve_characteristic(params, work)
        bits = work.bits + 8
        inv_low = r.a_low.reciprocal().round_out(bits)
        inv_high = r.a_high.reciprocal().round_out(bits)
        diffs = [Interval.point(0)]
        p_low, p_high = Interval.point(1), Interval.point(1)
        for _ in range(i):
            p_low = (p_low * inv_low).round_out(bits)
            p_high = (p_high * inv_high).round_out(bits)
            diffs.append(p_low - p_high)
        total = r.c * diffs[i] * (lam * x)
        acc = Interval.point(0)
        for k in range(1, i):
            acc = acc + diffs[i - k] / (k + n)
        return total - r.c * acc * xi

    return _refine(compute, prec)


def _ahigh_weighted_partial(r: Roots, n: int, i: int, bits: int, tol: Fraction) -> Interval:
    """Enclose ``a_high^-i * b_i = sum_{j=1}^{i-1} a_high^-j / (i - j + n)``."""
    ratio = r.a_high.reciprocal().round_out(bits)
    acc = Interval.point(0)
    p = Interval.point(1)
    for j in range(1, i):
        p = (p * ratio).round_out(bits)
        acc = acc + Interval(p.lo / (i - j + n), p.hi / (i - j + n))
        bound = p.hi * ratio.hi / ((n + 1) * (1 - ratio.hi))
        if bound <= tol and j < i - 1:
            return acc + Interval(0, ceil_to_bits(bound, bits))
    return acc


def minimal_value(params: ModelParams, i: int, prec) -> Interval:
    """Enclose ``a_i`` of the minimal positive solution without cancellation.

    Regrouping the explicit formula at ``x = ahat`` gives

        a_i = c xi [Phi_{n+i}(a_low) + a_high^-i b_i - a_high^-i S]

    with ``b_i = sum_{k=1}^{i-1} a_high^k/(k+n)`` and ``S = Phi_n(a_low) - 1/n``.
    The first term is ``a_low^-i * sum_{k>=i} a_low^k/(k+n)`` with the
    exponential factor folded into the series; every term is a positive,
    geometrically decaying sum.
    """
    if params.xi <= 0:
        raise DomainError("minimal solution needs xi > 0")
    if i < 1:
        raise DomainError("index must be at least 1")
    prec = Precision.of(prec)
    n = params.offset
    scale = 64 * (1 + params.xi)

    def compute(work: Precision) -> Interval:
        inner = work.scaled(1 / scale)
        r = solve_characteristic(params, inner)
        bits = inner.bits + 8
        head = _phi_at(n + i, r.a_low, inner).value
        mid = _ahigh_weighted_partial(r, n, i, bits, inner.target_width)
        s = phi_tail(n, r.a_low, 1, inner).value
        decay = _pow_out(r.a_high.reciprocal().round_out(bits), i, bits)
        return r.c * (head + mid - decay * s) * params.xi

    return _refine(compute, prec)


def generating_function(params: ModelParams, x, z, prec) -> Interval:
    """Enclose ``E(z) = sum_i a_i z^i`` through its closed form.

    ``E(z) = z (lambda x - xi sum_{k>=1} z^k/(k+n)) / (lambda + mu z^2 - q z)``,
    valid for ``0 <= z < a_low``.
    """
    x = as_rational(x)
    z = Interval.coerce(z)
    prec = Precision.of(prec)
    if z.lo < 0:
        raise DomainError("z must be non-negative")
    r = solve_characteristic(params, Fraction(1, 1 << 64))
    if z.hi >= r.a_low.lo:
        r = solve_characteristic(params, prec.scaled(Fraction(1, 1024)))
        if z.hi >= r.a_low.lo:
            raise DomainError("z lies outside the radius of convergence")
    if z.hi == 0:
        return Interval.point(0)
    lam, mu, q, xi = params.lam, params.mu, params.q, params.xi

    def compute(work: Precision) -> Interval:
        series = phi_tail(params.offset, z, 1, work.scaled(1 / (1 + xi))).value
        numer = z * (lam * x - series * xi)
        denom = lam - z * (q - z * mu)
        return numer / denom

    if z.is_point():
        return _refine(compute, prec)
    return compute(prec.scaled(Fraction(1, 16)))
