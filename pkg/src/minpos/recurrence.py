"""Exact forward iteration of the affine-coefficient recurrence.

With coefficients ``lambda*(i+n)``, ``mu*(i+n)``, ``gamma*(i+n)`` the recurrence

    lambda_i a[i+1] = -xi + (lambda_i + mu_i + gamma_i) a[i] - mu_i a[i-1]

reduces, after dividing by ``(i+n)``, to

    a[i+1] = ((lambda+mu+gamma) a[i] - mu a[i-1] - xi/(i+n)) / lambda.

Everything here is exact rational arithmetic.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .errors import DomainError, ResourceError
from .exactnum import as_rational

DEFAULT_MAX_ITER = 100_000
DEFAULT_BIT_CAP = 1_000_000


@dataclass(frozen=True)
class ModelParams:
    lam: Fraction
    mu: Fraction
    gamma: Fraction
    xi: Fraction
    offset: int = 1

    def __post_init__(self):
        for name in ("lam", "mu", "gamma", "xi"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if isinstance(self.offset, bool) or not isinstance(self.offset, int):
            off = as_rational(self.offset)
            if off.denominator != 1:
                raise DomainError(f"offset must be an integer, got {off}")
            object.__setattr__(self, "offset", int(off))
        if self.lam <= 0 or self.mu <= 0 or self.gamma <= 0:
            raise DomainError("lambda, mu and gamma must be positive")
        if self.xi < 0:
            raise DomainError("xi must be non-negative")
        if self.offset < 1:
            raise DomainError("offset must be at least 1")
        if self.discriminant <= 0:
            raise DomainError("characteristic discriminant must be positive")

    @property
    def q(self) -> Fraction:
        return self.lam + self.mu + self.gamma

    @property
    def discriminant(self) -> Fraction:
        return self.q * self.q - 4 * self.lam * self.mu

    def lambda_i(self, i: int) -> Fraction:
        return self.lam * (i + self.offset)

    def mu_i(self, i: int) -> Fraction:
        return self.mu * (i + self.offset)

    def gamma_i(self, i: int) -> Fraction:
        return self.gamma * (i + self.offset)

    def with_xi(self, xi) -> "ModelParams":
        return replace(self, xi=as_rational(xi))

    def as_pairs(self):
        return [
            ("lambda", self.lam),
            ("mu", self.mu),
            ("gamma", self.gamma),
            ("xi", self.xi),
            ("offset", self.offset),
        ]


class Verdict(enum.Enum):
    DIVERGES_MINUS = "DivergesMinus"
    DIVERGES_PLUS = "DivergesPlus"
    UNDECIDED = "Undecided"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    decided_at: Optional[int] = None

    @property
    def definite(self) -> bool:
        return self.verdict is not Verdict.UNDECIDED


@dataclass(frozen=True)
class Trajectory:
    params: ModelParams
    values: tuple

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    @property
    def steps(self) -> int:
        return len(self.values) - 1

    def residuals(self):
        """Exact residuals of the un-simplified recurrence; all zero for a valid trajectory."""
        p = self.params
        a = self.values
        return [
            p.lambda_i(i) * a[i + 1] + p.xi + p.mu_i(i) * a[i - 1]
            - (p.lambda_i(i) + p.mu_i(i) + p.gamma_i(i)) * a[i]
            for i in range(1, len(a) - 1)
        ]


def step(params: ModelParams, i: int, a_i, a_im1) -> Fraction:
    """Return ``a[i+1]`` given ``a[i]`` and ``a[i-1]``."""
    if i < 1:
        raise DomainError("recurrence index must be at least 1")
    a_i, a_im1 = as_rational(a_i), as_rational(a_im1)
    p = params
    return (p.q * a_i - p.mu * a_im1 - p.xi / (i + p.offset)) / p.lam


def _check_size(x: Fraction, cap: int, i: int):
    if x.numerator.bit_length() > cap or x.denominator.bit_length() > cap:
        raise ResourceError(
            f"a[{i}] exceeds {cap} bits; switch to interval evaluation"
        )


def iterate(params: ModelParams, a, steps: int, bit_cap: int = DEFAULT_BIT_CAP) -> Trajectory:
    """Exact ``a[0..steps]`` from ``(a[0], a[1]) = (0, a)``."""
    if steps < 1:
        raise DomainError("steps must be at least 1")
    a = as_rational(a)
    values = [Fraction(0), a]
    for i in range(1, steps):
        nxt = step(params, i, values[i], values[i - 1])
        _check_size(nxt, bit_cap, i + 1)
        values.append(nxt)
    return Trajectory(params, tuple(values))


def ratio_sequence(params: ModelParams, steps: int) -> list:
    """Exact ``z_i = a_i / a_{i+1}`` of the homogeneous recurrence, ``i = 1..steps``.

    The ratio obeys ``z_1 = lambda/q`` and ``z_i = lambda / (q - mu z_{i-1})``,
    independently of the initial value and of ``xi``.
    """
    if steps < 1:
        raise DomainError("steps must be at least 1")
    lam, mu, q = params.lam, params.mu, params.q
    z = lam / q
    out = [z]
    for _ in range(1, steps):
        z = lam / (q - mu * z)
        out.append(z)
    return out


def classify(params: ModelParams, a, max_iter: int = DEFAULT_MAX_ITER,
             bit_cap: int = DEFAULT_BIT_CAP) -> Classification:
    """Decide the divergence direction of the trajectory started at ``a``.

    Two absorbing conditions are checked while iterating exactly:

    * some ``a_i < 0``: the trajectory then decreases to ``-inf``;
    * ``a_i >= a_{i-1} >= 0`` with ``gamma_i a_i > xi``: every later step is a
      strict increase and the trajectory goes to ``+inf``.

    Both are certain, so any verdict other than ``Undecided`` is a proof.
    """
    p = params
    if p.xi <= 0:
        raise DomainError("classification needs xi > 0")
    if max_iter < 2:
        raise DomainError("max_iter must be at least 2")
    prev, cur = Fraction(0), as_rational(a)
    for i in range(1, max_iter + 1):
        if cur < 0:
            return Classification(Verdict.DIVERGES_MINUS, i)
        if cur >= prev >= 0 and p.gamma_i(i) * cur > p.xi:
            return Classification(Verdict.DIVERGES_PLUS, i)
        if i == max_iter:
            break
        prev, cur = cur, step(p, i, cur, prev)
        _check_size(cur, bit_cap, i + 1)
    return Classification(Verdict.UNDECIDED)
