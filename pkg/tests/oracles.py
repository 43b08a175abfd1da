"""Reference computations that share no code with the package.

mpmath is used at high working precision; nothing here calls into ``minpos``
except to read parameter values.
"""
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

DPS = 80


def mpq(x):
    x = Fraction(x)
    return mpf(x.numerator) / x.denominator


def roots(lam, mu, gamma):
    """(a_low, a_high, c) from mpmath's polynomial root finder."""
    with mp.workdps(DPS):
        lam, mu, gamma = mpq(lam), mpq(mu), mpq(gamma)
        q = lam + mu + gamma
        r = sorted(mpmath.polyroots([mu, -q, lam], maxsteps=200, extraprec=200))
        return r[0], r[1], 1 / (mu * (r[1] - r[0]))


def lerch(n, z):
    """Phi_n(z) = sum z^k/(n+k) through mpmath's Lerch transcendent."""
    with mp.workdps(DPS):
        return mpmath.lerchphi(mpq(z) if not isinstance(z, mpf) else z, 1, n)


def threshold(lam, mu, gamma, xi, n):
    with mp.workdps(DPS):
        a_low = roots(lam, mu, gamma)[0]
        return mpq(xi) / mpq(lam) * (mpmath.lerchphi(a_low, 1, n) - mpf(1) / n)


def miller_minimal(lam, mu, gamma, xi, n, i, extra=400):
    """a_i of the bounded solution with a_0 = 0, by backward recurrence.

    Iterating backwards damps the a_low^-i mode; the a_high^-i mode is removed
    by subtracting a backward homogeneous solution so that a_0 = 0.  That
    subtraction cancels about N*log10(a_high) digits, so the working precision
    grows with N.
    """
    N = i + extra
    with mp.workdps(DPS):
        a_high = roots(lam, mu, gamma)[1]
        lost = int(N * mpmath.log10(a_high)) + 20
    with mp.workdps(DPS + lost):
        lam, mu, gamma, xi = map(mpq, (lam, mu, gamma, xi))
        q = lam + mu + gamma
        y = {N + 1: xi / (gamma * (N + 1 + n)), N: xi / (gamma * (N + n))}
        h = {N + 1: mpf(0), N: mpf(1)}
        for k in range(N, 0, -1):
            y[k - 1] = (q * y[k] - lam * y[k + 1] - xi / (k + n)) / mu
            h[k - 1] = (q * h[k] - lam * h[k + 1]) / mu
        t = y[0] / h[0]
        return y[i] - t * h[i]


def sqrt_bisect(x: Fraction, width: Fraction):
    """Rational bracket of sqrt(x) by plain bisection."""
    lo, hi = Fraction(0), max(Fraction(1), x)
    while hi - lo > width:
        m = (lo + hi) / 2
        if m * m <= x:
            lo = m
        else:
            hi = m
    return lo, hi
