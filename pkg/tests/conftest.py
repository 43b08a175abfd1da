from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from minpos import ModelParams

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# Reference values frozen from tests/oracles.py (mpmath at 80 digits):
# roots via polyroots, Phi via lerchphi, minimal solution via backward recurrence.
FIG1_A_LOW = Fraction("0.2239320287153807997022998")
FIG1_A_HIGH = Fraction("7.442734637951285866964367")
FIG1_C = Fraction("4.617570965396101322342474")
FIG1_PHI5 = Fraction("0.2462394420549437203307768")
FIG1_AHAT = Fraction("0.924788841098874406615536827079")
FIG1_SCALED_DECAY = {
    100: Fraction("6.34146847369891028719414409035"),
    1000: Fraction("6.63262283712069435589577194269"),
    10000: Fraction("6.66324623696573606807030690563"),
}
FIG1_SLOPE = Fraction("1.5387366518227500164")
UNIT_AHAT = Fraction("0.2598289137944102198584299")  # lambda=mu=gamma=xi=n=1


@pytest.fixture
def fig1():
    return ModelParams(Fraction("0.05"), Fraction("0.03"), Fraction("0.15"), Fraction(1), 5)


@pytest.fixture
def unit():
    return ModelParams(1, 1, 1, 1, 1)


def small_rationals(lo, hi, max_den=20):
    return st.builds(
        Fraction, st.integers(1, hi * max_den), st.integers(1, max_den)
    ).filter(lambda x: lo <= x <= hi)


@st.composite
def model_params(draw, xi_positive=True, max_offset=8):
    lam = draw(small_rationals(Fraction(1, 20), 3))
    mu = draw(small_rationals(Fraction(1, 20), 3))
    gamma = draw(small_rationals(Fraction(1, 20), 3))
    xi = draw(small_rationals(Fraction(1, 20), 3)) if xi_positive else Fraction(0)
    offset = draw(st.integers(1, max_offset))
    return ModelParams(lam, mu, gamma, xi, offset)


# Acceptance criteria append "criterion N: PASS/FAIL ..." lines here.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
