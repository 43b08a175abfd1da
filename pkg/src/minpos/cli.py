"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain/precondition error,
3 internal inconsistency (for example disjoint threshold enclosures).
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

from . import closedform, experiments, recurrence, threshold
from .errors import InconsistencyError, MinposError, ParseError
from .exactnum import Interval, Precision, parse_decimal
from .recurrence import ModelParams
from .report import serialize, to_table, with_inputs

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INCONSISTENT = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    lam: str = "0.05"
    mu: str = "0.03"
    gamma: str = "0.15"
    xi: str = "1"
    offset: str = "5"
    output_digits: int = 15
    output_format: str = "csv"
    width: str = "1e-30"
    max_iter: int = 100_000

    def params(self) -> ModelParams:
        return ModelParams(
            parse_decimal(self.lam), parse_decimal(self.mu), parse_decimal(self.gamma),
            parse_decimal(self.xi), parse_decimal(self.offset),
        )

    def precision(self) -> Precision:
        return Precision(parse_decimal(self.width))


_CONFIG_KEYS = {
    "lambda": "lam", "lam": "lam", "mu": "mu", "gamma": "gamma", "xi": "xi",
    "offset": "offset", "output_digits": "output_digits", "digits": "output_digits",
    "output_format": "output_format", "format": "output_format",
    "width": "width", "max_iter": "max_iter",
}


def _coerce(field_name: str, raw: str):
    if field_name in ("output_digits", "max_iter"):
        try:
            value = int(raw)
        except ValueError:
            raise UsageError(f"{field_name} must be an integer, got {raw!r}") from None
        if value < 1:
            raise UsageError(f"{field_name} must be at least 1")
        return value
    if field_name == "output_format":
        if raw not in ("csv", "json"):
            raise UsageError(f"output_format must be csv or json, got {raw!r}")
        return raw
    try:
        parse_decimal(raw)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    return raw


def load_config(path) -> dict:
    """Read a flat ``key = value`` file; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        name = _CONFIG_KEYS[key]
        values[name] = _coerce(name, value)
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _digit_range(text: str):
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return [int(v) for v in text.split(",")]
        return list(range(int(lo), int(hi) + 1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi or a comma list, got {text!r}") from None


def _int_list(text: str):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _decimal(text: str):
    try:
        return parse_decimal(text)
    except MinposError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _global_options(parser, suppress: bool, skip=()):
    default = argparse.SUPPRESS if suppress else None
    g = parser.add_argument_group("model and output options")
    g.add_argument("--lambda", dest="lam", default=default, metavar="DEC")
    g.add_argument("--mu", default=default, metavar="DEC")
    g.add_argument("--gamma", default=default, metavar="DEC")
    g.add_argument("--xi", default=default, metavar="DEC")
    g.add_argument("--offset", default=default, metavar="INT")
    g.add_argument("--format", dest="output_format", choices=("csv", "json"), default=default)
    if "--digits" not in skip:
        g.add_argument("--digits", dest="output_digits", default=default, metavar="N")
    g.add_argument("--width", default=default, metavar="DEC")
    g.add_argument("--max-iter", dest="max_iter", default=default, metavar="N")
    g.add_argument("--config", default=default, metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="minpos",
        description="Exact and interval experiments on the minimal positive solution "
                    "of a second-order recurrence with affine coefficients.",
    )
    _global_options(parser, suppress=False)
    common = _Parser(add_help=False)
    _global_options(common, suppress=True)
    # precision-sweep uses --digits for its digit range
    common_no_digits = _Parser(add_help=False)
    _global_options(common_no_digits, suppress=True, skip=("--digits",))
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, help_text, parent=common):
        return sub.add_parser(name, help=help_text, parents=[parent])

    p = add("trace", "exact trajectory a_0..a_steps")
    p.add_argument("--a", type=_decimal, required=True)
    p.add_argument("--steps", type=int, default=9)
    p = add("classify", "divergence verdict for an initial value")
    p.add_argument("--a", type=_decimal, required=True)
    add("roots", "characteristic roots and c")
    p = add("phi", "Lerch-type series Phi_n(z)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", type=_decimal, required=True)
    p = add("threshold", "enclosure of the threshold initial value")
    p.add_argument("--method", choices=("bisect", "series", "both"), default="both")
    p = add("explicit", "explicit formula for a_i")
    p.add_argument("--a", type=_decimal, required=True)
    p.add_argument("--i", type=int, required=True)
    p = add("minimal", "a_i of the minimal positive solution")
    p.add_argument("--i", type=int, required=True)
    p = add("ratio", "ratio sequence a_i/a_{i+1} and its distance to a_low")
    p.add_argument("--steps", type=int, default=10)
    add("figure1", "the ten reference trajectories, side by side")
    p = add("decay", "decay of the minimal positive solution")
    p.add_argument("--indices", type=_int_list, default=[100, 1000, 10000])
    p = add("precision-sweep", "round the threshold to d digits and classify", common_no_digits)
    p.add_argument("--digits", dest="digit_range", type=_digit_range, default=list(range(5, 31)))
    p = add("growth", "homogeneous (xi = 0) growth")
    p.add_argument("--a", type=_decimal, required=True)
    p.add_argument("--steps", type=int, default=20)
    return parser


def resolve_config(args) -> CliConfig:
    """Merge built-in defaults, the config file, and command-line flags (in that order)."""
    cfg = CliConfig()
    path = getattr(args, "config", None)
    if path:
        cfg = replace(cfg, **load_config(path))
    overrides = {}
    for f in fields(CliConfig):
        raw = getattr(args, f.name, None)
        if raw is not None:
            overrides[f.name] = _coerce(f.name, raw)
    return replace(cfg, **overrides)


def _dispatch(args, cfg: CliConfig, stderr=None):
    params = cfg.params()
    prec = cfg.precision()
    cmd = args.command
    inputs = params.as_pairs()
    if cmd == "trace":
        return recurrence.iterate(params, args.a, args.steps)
    if cmd == "classify":
        return with_inputs(to_table(recurrence.classify(params, args.a, cfg.max_iter)),
                           inputs + [("a", args.a)])
    if cmd == "roots":
        return with_inputs(to_table(closedform.solve_characteristic(params, prec)), inputs)
    if cmd == "phi":
        out = closedform.phi(args.n, Interval.point(args.z), prec)
        return with_inputs(to_table(out), [("n", args.n), ("z", args.z)])
    if cmd == "threshold":
        if args.method == "bisect":
            res = threshold.bisect_threshold(params, prec, cfg.max_iter)
        elif args.method == "series":
            res = threshold.series_threshold(params, prec)
        else:
            res = threshold.cross_validate(params, prec, cfg.max_iter)
        return with_inputs(to_table(res), inputs)
    if cmd == "explicit":
        v = closedform.explicit_value(params, args.a, args.i, prec)
        return with_inputs(to_table(_single(args.i, v)), inputs + [("a", args.a)])
    if cmd == "minimal":
        v = closedform.minimal_value(params, args.i, prec)
        return with_inputs(to_table(_single(args.i, v)), inputs)
    if cmd == "ratio":
        return experiments.ratio_limit_study(params, args.steps, prec)
    if cmd == "figure1":
        return experiments.figure1_sweep(params)
    if cmd == "decay":
        return experiments.decay_study(params, args.indices, prec)
    if cmd == "precision-sweep":
        digits = args.digit_range
        sweep_prec = min(prec.target_width, Fraction(1, 10 ** (max(digits) + 4)))
        records = experiments.precision_sweep(params, digits, cfg.max_iter, sweep_prec, check=False)
        report = experiments.check_precision_sweep(params, records)
        if not report.nondecreasing:
            print(f"warning: divergence index decreases at {report.violations}",
                  file=stderr or sys.stderr)
        return with_inputs(to_table(records), inputs)
    if cmd == "growth":
        return experiments.homogeneous_growth_study(params, args.a, args.steps)
    raise UsageError(f"unknown command {cmd!r}")


def _single(i, value):
    return experiments.SweepRecord("value", (), ("value",), ((i, value),))


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
    except UsageError as exc:
        print(exc, file=stderr)
        parser.print_help(stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        result = _dispatch(args, cfg, stderr)
        text = serialize(result, cfg.output_format, cfg.output_digits)
    except InconsistencyError as exc:
        print(f"inconsistency: {exc}", file=stderr)
        return EXIT_INCONSISTENT
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except MinposError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_DOMAIN
    stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
