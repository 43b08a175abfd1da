from fractions import Fraction

import pytest
from hypothesis import given, settings

from minpos import (
    DomainError,
    InconsistencyError,
    ModelParams,
    PrecisionError,
    Verdict,
    bisect_threshold,
    bracket,
    classify,
    cross_validate,
)
from minpos import threshold as th
from minpos.closedform import threshold_series

from conftest import FIG1_AHAT, UNIT_AHAT, model_params


def test_bracket_figure1(fig1):
    assert bracket(fig1) == (0, 1)


def test_bracket_grows_with_xi(fig1):
    lo, hi = bracket(fig1.with_xi(10))
    assert (lo, hi) == (0, 16)
    assert classify(fig1.with_xi(10), hi).verdict is Verdict.DIVERGES_PLUS
    assert classify(fig1.with_xi(10), hi / 2).verdict is not Verdict.DIVERGES_PLUS


def test_bracket_needs_xi(fig1):
    with pytest.raises(DomainError):
        bracket(fig1.with_xi(0))


def test_bisect_figure1(fig1):
    res = bisect_threshold(fig1, Fraction(1, 10**12))
    assert res.enclosure.width <= Fraction(1, 10**12)
    assert FIG1_AHAT in res.enclosure
    assert res.classify_calls > 40
    assert res.deepest_iteration > 0


def test_bisect_endpoints_are_certified(fig1):
    res = bisect_threshold(fig1, Fraction(1, 10**10))
    assert classify(fig1, res.enclosure.lo).verdict is Verdict.DIVERGES_MINUS
    assert classify(fig1, res.enclosure.hi).verdict is Verdict.DIVERGES_PLUS


def test_cross_validate_unit(unit):
    res = cross_validate(unit, Fraction(1, 10**15))
    assert UNIT_AHAT in res.enclosure
    assert res.agreement <= Fraction(1, 10**15)
    assert str(res.method) == "Both"


@given(model_params(max_offset=4))
@settings(max_examples=8)
def test_cross_validate_random(params):
    res = cross_validate(params, Fraction(1, 10**8))
    assert res.enclosure.width <= Fraction(1, 10**8)


def test_threshold_is_linear_in_xi(fig1):
    w = Fraction(1, 10**12)
    one = bisect_threshold(fig1, w).enclosure
    three = bisect_threshold(fig1.with_xi(3), w).enclosure
    assert three.overlaps(one * 3)


def test_threshold_invariant_under_common_scaling(fig1):
    w = Fraction(1, 10**12)
    k = Fraction(7, 3)
    scaled = ModelParams(fig1.lam * k, fig1.mu * k, fig1.gamma * k, fig1.xi * k, fig1.offset)
    assert bisect_threshold(scaled, w).enclosure.overlaps(bisect_threshold(fig1, w).enclosure)


def test_undecided_retries_exhausted(fig1):
    with pytest.raises(PrecisionError) as info:
        bisect_threshold(fig1, Fraction(1, 10**12), max_iter=5)
    assert info.value.best is not None


def test_disjoint_enclosures_raise(fig1, monkeypatch):
    shifted = lambda params, prec: threshold_series(params, prec) + Fraction(1, 1000)
    monkeypatch.setattr(th, "threshold_series", shifted)
    with pytest.raises(InconsistencyError):
        cross_validate(fig1, Fraction(1, 10**10))
