"""Two independent routes to the threshold initial value ``ahat``.

Bisection asks the exact classifier which way a trajectory diverges; the
series route evaluates the closed form.  Agreement of the two enclosures is
the main end-to-end check of the package.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .closedform import threshold_series
from .errors import BracketFailure, DomainError, InconsistencyError, PrecisionError
from .exactnum import Interval, Precision, bits_for_width
from .recurrence import DEFAULT_MAX_ITER, ModelParams, Verdict, classify

DEFAULT_WIDTH = Fraction(1, 10**30)
MAX_RETRIES = 3
_BRACKET_LIMIT = 1 << 64


class Method(enum.Enum):
    BISECTION = "Bisection"
    SERIES = "Series"
    BOTH = "Both"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ThresholdResult:
    enclosure: Interval
    method: Method
    classify_calls: int = 0
    deepest_iteration: int = 0
    agreement: Optional[Fraction] = None


class _Counter:
    def __init__(self, params, max_iter):
        self.params = params
        self.max_iter = max_iter
        self.calls = 0
        self.deepest = 0

    def __call__(self, a, budget):
        budget = max(2, min(budget, self.max_iter))
        self.calls += 1
        verdict = classify(self.params, a, budget)
        self.deepest = max(self.deepest, verdict.decided_at or budget)
        return verdict


def bracket(params: ModelParams, max_iter: int = DEFAULT_MAX_ITER, _counter=None):
    """Return ``(0, hi)`` with ``hi`` the first power of two classified ``DivergesPlus``."""
    if params.xi <= 0:
        raise DomainError("threshold search needs xi > 0")
    run = _counter or _Counter(params, max_iter)
    hi = Fraction(1)
    while hi <= _BRACKET_LIMIT:
        if run(hi, max_iter).verdict is Verdict.DIVERGES_PLUS:
            return Fraction(0), hi
        hi *= 2
    raise BracketFailure(f"no DivergesPlus initial value up to 2**64 for {params}")


def _budget(width: Fraction) -> int:
    return 200 + 10 * bits_for_width(width)


def bisect_threshold(params: ModelParams, prec=DEFAULT_WIDTH,
                     max_iter: int = DEFAULT_MAX_ITER) -> ThresholdResult:
    """Bisect on exact dyadic midpoints until the bracket is narrower than the target.

    Only certain verdicts move the bracket.  An ``Undecided`` midpoint is retried
    with a doubled iteration budget, at most ``MAX_RETRIES`` times.
    """
    prec = Precision.of(prec)
    run = _Counter(params, max_iter)
    lo, hi = bracket(params, max_iter, run)
    if run(lo, max_iter).verdict is not Verdict.DIVERGES_MINUS:
        raise InconsistencyError("a = 0 did not diverge to -inf")
    while hi - lo > prec.target_width:
        mid = (lo + hi) / 2
        budget = _budget(hi - lo)
        for _ in range(MAX_RETRIES + 1):
            verdict = run(mid, budget).verdict
            if verdict is not Verdict.UNDECIDED:
                break
            budget *= 2
        else:
            raise PrecisionError(
                f"classification of {mid} stayed undecided",
                best=Interval(lo, hi),
            )
        if verdict is Verdict.DIVERGES_MINUS:
            lo = mid
        else:
            hi = mid
    return ThresholdResult(Interval(lo, hi), Method.BISECTION, run.calls, run.deepest)


def series_threshold(params: ModelParams, prec=DEFAULT_WIDTH) -> ThresholdResult:
    return ThresholdResult(threshold_series(params, prec), Method.SERIES)


def cross_validate(params: ModelParams, prec=DEFAULT_WIDTH,
                   max_iter: int = DEFAULT_MAX_ITER) -> ThresholdResult:
    """Compute both enclosures and return their intersection.

    Raises InconsistencyError if they are disjoint; that would mean either a
    bug or a wrong closed form, and is never silenced.
    """
    if params.xi <= 0:
        raise DomainError("threshold search needs xi > 0")
    prec = Precision.of(prec)
    series = threshold_series(params, prec)
    bis = bisect_threshold(params, prec, max_iter)
    if not series.overlaps(bis.enclosure):
        raise InconsistencyError(
            f"series enclosure {series} and bisection enclosure {bis.enclosure} are disjoint"
        )
    return ThresholdResult(
        series.intersect(bis.enclosure),
        Method.BOTH,
        bis.classify_calls,
        bis.deepest_iteration,
        abs(series.mid - bis.enclosure.mid),
    )
