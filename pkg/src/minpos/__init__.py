"""Exact and interval computations for the minimal positive solution of an
affine-coefficient second-order recurrence."""
from .closedform import (
    Roots,
    SeriesValue,
    explicit_value,
    generating_function,
    minimal_value,
    phi,
    phi_tail,
    solve_characteristic,
    threshold_series,
)
from .errors import (
    BracketFailure,
    DomainError,
    InconsistencyError,
    MinposError,
    ParseError,
    PrecisionError,
    ResourceError,
)
from .exactnum import Interval, Precision, interval_arith, parse_decimal, sqrt_enclosure
from .recurrence import (
    Classification,
    ModelParams,
    Trajectory,
    Verdict,
    classify,
    iterate,
    ratio_sequence,
    step,
)
from .threshold import ThresholdResult, bisect_threshold, bracket, cross_validate

__version__ = "0.1.0"
