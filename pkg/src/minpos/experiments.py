"""Reproducible studies built on the exact and interval machinery.

Each study returns plain records; rendering to text happens only in the CLI.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .closedform import minimal_value, solve_characteristic, threshold_series
from .errors import DomainError, InconsistencyError, PrecisionError
from .exactnum import Interval, Precision, as_rational, log_enclosure, render_decimal
from .recurrence import (
    DEFAULT_MAX_ITER,
    Classification,
    ModelParams,
    classify,
    iterate,
    ratio_sequence,
)

FIGURE1_PARAMS = ModelParams(
    lam=Fraction("0.05"), mu=Fraction("0.03"), gamma=Fraction("0.15"), xi=Fraction(1), offset=5
)

FIGURE1_A_VALUES = tuple(
    Fraction(s)
    for s in (
        "0.914788841098104",
        "0.917011063320326",
        "0.919233285542548",
        "0.921455507764771",
        "0.923677729986993",
        "0.925899952209215",
        "0.928122174431437",
        "0.93034439665366",
        "0.932566618875882",
        "0.934788841098104",
    )
)

# (i, a_i) for i = 1..9 as plotted, one tuple per initial value above
FIGURE1_PLOTTED = (
    ("0.914788841098104", "0.874695335717945", "0.617582382500826", "-0.183938241926967",
     "-3.43888756458677", "-17.7085198519429", "-81.2140405983673", "-364.62614150799",
     "-1630.0902881162"),
    ("0.917011063320326", "0.884917557940167", "0.663271271389717", "0.0200973136285952",
     "-2.52773734236451", "-13.6396501630539", "-63.0439301628111", "-283.484955317766",
     "-1267.7428979025"),
    ("0.919233285542548", "0.895139780162389", "0.708960160278604", "0.224132869184144",
     "-1.61658712014232", "-9.57078047416517", "-44.8738197272562", "-202.343769127546",
     "-905.395507688819"),
    ("0.921455507764771", "0.905362002384612", "0.754649049167495", "0.428168424739708",
     "-0.705436897920064", "-5.50191078527612", "-26.7037092916999", "-121.202582937321",
     "-543.048117475117"),
    ("0.923677729986993", "0.915584224606834", "0.800337938056381", "0.632203980295252",
     "0.20571332430211", "-1.43304109638744", "-8.53359885614532", "-40.0613967471027",
     "-180.700727261447"),
    ("0.925899952209215", "0.925806446829055", "0.846026826945269", "0.836239535850802",
     "1.1168635465243", "2.63582859250132", "9.63651157940967", "41.079789443117",
     "181.646662952231"),
    ("0.928122174431437", "0.936028669051278", "0.891715715834159", "1.04027509140636",
     "2.02801376874656", "6.70469828139035", "27.8066220149659", "122.220975633342",
     "543.994053165933"),
    ("0.93034439665366", "0.946250891273501", "0.93740460472305", "1.24431064696193",
     "2.93916399096881", "10.7735679702794", "45.976732450522", "203.362161823567",
     "906.341443379633"),
    ("0.932566618875882", "0.956473113495722", "0.983093493611936", "1.44834620251747",
     "3.85031421319099", "14.8424376591681", "64.1468428860767", "284.503348013785",
     "1268.68883359331"),
    ("0.934788841098104", "0.966695335717945", "1.02878238250083", "1.65238175807304",
     "4.76146443541325", "18.9113073480571", "82.316953321633", "365.644534204011",
     "1631.03622380701"),
)


@dataclass(frozen=True)
class SweepRecord:
    """One labelled table: ``series`` rows are ``(index, values...)``.

    Values are Fractions or Intervals; they are turned into text only when
    serialized.
    """

    label: str
    inputs: tuple
    columns: tuple
    series: tuple

    def __post_init__(self):
        idx = [row[0] for row in self.series]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise DomainError("record indices must be strictly increasing")


@dataclass(frozen=True)
class PrecisionRecord:
    digits: int
    perturbed_a: Fraction
    verdict: Classification

    @property
    def divergence_index(self) -> Optional[int]:
        return self.verdict.decided_at


def _inputs(params: ModelParams, **extra):
    return tuple(params.as_pairs()) + tuple(extra.items())


def figure1_sweep(params: ModelParams = FIGURE1_PARAMS,
                  a_values: Sequence = FIGURE1_A_VALUES, steps: int = 9) -> list:
    """Exact trajectories ``a_0..a_steps`` for each initial value."""
    if steps < 1:
        raise DomainError("steps must be at least 1")
    records = []
    for a in a_values:
        a = as_rational(a)
        traj = iterate(params, a, steps)
        records.append(SweepRecord(
            label=f"a={render_decimal(a, 15)}",
            inputs=_inputs(params, a=a),
            columns=("value",),
            series=tuple((i, v) for i, v in enumerate(traj.values)),
        ))
    return records


def _error_bound(z: Fraction, a_low: Interval) -> Fraction:
    return max(abs(z - a_low.lo), abs(z - a_low.hi))


def ratio_limit_study(params: ModelParams, steps: int, prec) -> SweepRecord:
    """Rows ``(i, z_i, bound on |z_i - a_low|)``; the bound column must strictly decrease.

    The root enclosure is tightened until it is narrow enough to resolve the
    last step, which is always possible because ``z_i < a_low`` strictly.
    """
    if steps < 2:
        raise DomainError("steps must be at least 2")
    prec = Precision.of(prec)
    zs = ratio_sequence(params, steps)
    width = prec.target_width
    for _ in range(64):
        roots = solve_characteristic(params, width)
        errs = [_error_bound(z, roots.a_low) for z in zs]
        if all(b < a for a, b in zip(errs, errs[1:])):
            break
        width /= 1 << 32
    else:
        raise InconsistencyError("ratio error column is not strictly decreasing")
    return SweepRecord(
        label="ratio_limit",
        inputs=_inputs(params, steps=steps),
        columns=("z", "error_bound"),
        series=tuple((i + 1, z, e) for i, (z, e) in enumerate(zip(zs, errs))),
    )


def decay_bounds(params: ModelParams, prec=Fraction(1, 10**20)):
    """Rational ``(low, high)`` such that ``i * a_i`` of the minimal solution lies between them.

    ``low = c xi / 2`` and ``high = 1.5 c xi (1 + 1/(-ln a_low))``, both
    evaluated conservatively from enclosures.
    """
    roots = solve_characteristic(params, prec)
    neg_log = -log_enclosure(roots.a_low, prec)
    low = roots.c.hi * params.xi / 2
    high = Fraction(3, 2) * roots.c.lo * params.xi * (1 + 1 / neg_log.hi)
    return low, high


def decay_study(params: ModelParams, indices: Sequence[int], prec,
                sandwich_from: int = 100) -> SweepRecord:
    """Rows ``(i, a_i, i * a_i)`` for the minimal positive solution, as enclosures.

    Positivity is checked at every index; the ``decay_bounds`` sandwich only
    from ``sandwich_from`` on, since it describes asymptotic behaviour.
    """
    if params.xi <= 0:
        raise DomainError("decay study needs xi > 0")
    prec = Precision.of(prec)
    low, high = decay_bounds(params)
    rows = []
    for i in sorted(set(indices)):
        v = minimal_value(params, i, prec)
        scaled = v * i
        if not v.lo > 0:
            raise InconsistencyError(f"minimal solution enclosure at i={i} is not positive: {v}")
        if i >= sandwich_from and not (low <= scaled.lo and scaled.hi <= high):
            raise InconsistencyError(f"i*a_i at i={i} outside [{low}, {high}]: {scaled}")
        rows.append((i, v, scaled))
    return SweepRecord(
        label="decay",
        inputs=_inputs(params),
        columns=("value", "scaled"),
        series=tuple(rows),
    )


def round_half_even(x: Fraction, digits: int) -> Fraction:
    """Round to ``digits`` decimal places, ties to even."""
    scale = 10**digits
    v = x * scale
    q, r = divmod(v.numerator, v.denominator)
    twice = 2 * r
    if twice > v.denominator or (twice == v.denominator and q % 2):
        q += 1
    return Fraction(q, scale)


@dataclass(frozen=True)
class SweepCheck:
    definite: bool
    nondecreasing: bool
    slope: Optional[Fraction]
    expected_slope: Interval
    violations: tuple = field(default=())

    @property
    def slope_ok(self) -> bool:
        if self.slope is None:
            return False
        return (Fraction(3, 4) * self.expected_slope.hi <= self.slope
                and self.slope <= Fraction(5, 4) * self.expected_slope.lo)

    @property
    def ok(self) -> bool:
        return self.definite and self.nondecreasing and self.slope_ok


def least_squares_slope(xs, ys) -> Optional[Fraction]:
    n = len(xs)
    if n < 2:
        return None
    mx = Fraction(sum(xs), n)
    my = Fraction(sum(ys), n)
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return None
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def check_precision_sweep(params: ModelParams, records: Sequence[PrecisionRecord]) -> SweepCheck:
    """Evaluate the sweep against the predicted slope ``ln 10 / ln(1/a_low)``."""
    roots = solve_characteristic(params, Fraction(1, 10**20))
    ln10 = log_enclosure(Fraction(10), Fraction(1, 10**20))
    expected = ln10 / -log_enclosure(roots.a_low, Fraction(1, 10**20))
    definite = all(r.verdict.definite for r in records)
    ordered = sorted(records, key=lambda r: r.digits)
    violations = tuple(
        (a.digits, a.divergence_index, b.digits, b.divergence_index)
        for a, b in zip(ordered, ordered[1:])
        if a.divergence_index is not None and b.divergence_index is not None
        and b.divergence_index < a.divergence_index
    )
    pts = [(r.digits, r.divergence_index) for r in ordered if r.divergence_index is not None]
    slope = least_squares_slope([p[0] for p in pts], [p[1] for p in pts])
    return SweepCheck(definite, not violations, slope, expected, violations)


def precision_sweep(params: ModelParams, digit_list: Sequence[int],
                    max_iter: int = DEFAULT_MAX_ITER, prec=Fraction(1, 10**40),
                    check: bool = True) -> list:
    """Round ``ahat`` to each digit count, feed it back, and record where it diverges.

    With ``check`` set, a sweep that is not definite, not monotone in the digit
    count, or (for five or more digit counts) off the predicted slope by more
    than 25% raises InconsistencyError.
    """
    if params.xi <= 0:
        raise DomainError("precision sweep needs xi > 0")
    digit_list = list(digit_list)
    if not digit_list or min(digit_list) < 1:
        raise DomainError("digit counts must be at least 1")
    prec = Precision.of(prec)
    ahat = threshold_series(params, prec)
    records = []
    for d in digit_list:
        if ahat.width > Fraction(1, 10 ** (d + 2)):
            raise PrecisionError(f"ahat enclosure too wide for {d} digits", best=ahat)
        rounded = round_half_even(ahat.mid, d)
        if rounded != round_half_even(ahat.lo, d) or rounded != round_half_even(ahat.hi, d):
            raise PrecisionError(f"ahat enclosure straddles a {d}-digit rounding boundary", best=ahat)
        records.append(PrecisionRecord(d, rounded, classify(params, rounded, max_iter)))
    if check:
        report = check_precision_sweep(params, records)
        problems = []
        if not report.definite:
            problems.append("undecided verdicts")
        if not report.nondecreasing:
            problems.append(f"divergence index decreases at {report.violations}")
        if len(set(digit_list)) >= 5 and not report.slope_ok:
            problems.append(f"slope {report.slope} outside 25% of {report.expected_slope}")
        if problems:
            raise InconsistencyError("; ".join(problems))
    return records


def homogeneous_growth_study(params: ModelParams, a, steps: int) -> SweepRecord:
    """Rows ``(i, a_i, a_i / (1 + gamma/lambda)^(i-1))`` for the ``xi = 0`` recurrence."""
    a = as_rational(a)
    if a <= 0:
        raise DomainError("initial value must be positive")
    hom = params.with_xi(0)
    traj = iterate(hom, a, steps)
    rate = 1 + hom.gamma / hom.lam
    rows = []
    prev_norm = None
    for i in range(1, len(traj)):
        v = traj[i]
        if i + 1 < len(traj) and traj[i + 1] < rate * v:
            raise InconsistencyError(f"growth bound fails at i={i}")
        norm = v / rate ** (i - 1)
        if norm < a or (prev_norm is not None and norm < prev_norm):
            raise InconsistencyError(f"normalized growth column decreases at i={i}")
        prev_norm = norm
        rows.append((i, v, norm))
    return SweepRecord(
        label="homogeneous_growth",
        inputs=_inputs(hom, a=a, steps=steps),
        columns=("value", "normalized"),
        series=tuple(rows),
    )
