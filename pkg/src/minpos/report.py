"""CSV and JSON rendering of study results.

Numbers are always written as decimal text with a fixed count of significant
digits (round half to even); JSON never contains float tokens.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import singledispatch

from .closedform import Roots, SeriesValue
from .errors import DomainError
from .exactnum import Interval, render_decimal
from .experiments import PrecisionRecord, SweepRecord
from .recurrence import Classification, Trajectory
from .threshold import ThresholdResult


@dataclass(frozen=True)
class Table:
    inputs: tuple
    columns: tuple
    rows: tuple


def _cell(value, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return render_decimal(value, digits)
    return str(value)


@singledispatch
def to_table(obj) -> Table:
    raise TypeError(f"no tabular form for {type(obj).__name__}")


@to_table.register
def _(obj: Table) -> Table:
    return obj


def _expand_columns(record: SweepRecord):
    names = []
    for pos, name in enumerate(record.columns, start=1):
        is_interval = any(isinstance(row[pos], Interval) for row in record.series)
        if not is_interval:
            names.append(name)
        elif len(record.columns) == 1:
            names.extend(("lo", "hi"))
        else:
            names.extend((f"{name}_lo", f"{name}_hi"))
    return names


def _flatten(row):
    out = []
    for v in row:
        if isinstance(v, Interval):
            out.extend((v.lo, v.hi))
        else:
            out.append(v)
    return tuple(out)


@to_table.register
def _(obj: SweepRecord) -> Table:
    return Table(
        obj.inputs,
        ("i", *_expand_columns(obj)),
        tuple(_flatten(row) for row in obj.series),
    )


@to_table.register
def _(obj: list) -> Table:
    if not obj:
        return Table((), (), ())
    if all(isinstance(r, PrecisionRecord) for r in obj):
        return Table(
            (),
            ("digits", "perturbed_a", "verdict", "divergence_index"),
            tuple((r.digits, r.perturbed_a, r.verdict.verdict, r.divergence_index) for r in obj),
        )
    if all(isinstance(r, SweepRecord) for r in obj):
        if len(obj) == 1:
            return to_table(obj[0])
        return _wide(obj)
    raise TypeError("mixed record list")


def _wide(records) -> Table:
    """Side-by-side table: one column per record, rows keyed by index."""
    index = [row[0] for row in records[0].series]
    for r in records:
        if (len(r.columns) != 1 or [row[0] for row in r.series] != index
                or any(isinstance(row[1], Interval) for row in r.series)):
            raise DomainError("records cannot be laid out side by side")
    shared = tuple(
        pair for pair in records[0].inputs
        if all(pair in r.inputs for r in records[1:])
    )
    rows = tuple((i, *(r.series[k][1] for r in records)) for k, i in enumerate(index))
    return Table(shared, ("i", *(r.label for r in records)), rows)


@to_table.register
def _(obj: Trajectory) -> Table:
    return Table(
        tuple(obj.params.as_pairs()),
        ("i", "value"),
        tuple(enumerate(obj.values)),
    )


@to_table.register
def _(obj: Classification) -> Table:
    return Table((), ("verdict", "decided_at"), ((obj.verdict, obj.decided_at),))


@to_table.register
def _(obj: Roots) -> Table:
    return Table(
        (),
        ("name", "lo", "hi"),
        tuple((name, iv.lo, iv.hi) for name, iv in
              (("a_low", obj.a_low), ("a_high", obj.a_high), ("c", obj.c))),
    )


@to_table.register
def _(obj: SeriesValue) -> Table:
    return Table(
        (),
        ("lo", "hi", "terms_used", "tail_bound"),
        ((obj.value.lo, obj.value.hi, obj.terms_used, obj.tail_bound),),
    )


@to_table.register
def _(obj: ThresholdResult) -> Table:
    return Table(
        (),
        ("method", "lo", "hi", "classify_calls", "deepest_iteration", "agreement"),
        ((obj.method, obj.enclosure.lo, obj.enclosure.hi, obj.classify_calls,
          obj.deepest_iteration, obj.agreement),),
    )


def with_inputs(table: Table, inputs) -> Table:
    return Table(tuple(inputs), table.columns, table.rows)


def serialize(obj, fmt: str = "csv", digits: int = 15) -> str:
    """Render a result as CSV (LF line endings) or JSON (numbers as strings)."""
    if digits < 1:
        raise DomainError("digits must be at least 1")
    table = to_table(obj)
    rows = [[_cell(v, digits) for v in row] for row in table.rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "inputs": [{"name": k, "value": _cell(v, digits)} for k, v in table.inputs],
            "columns": list(table.columns),
            "rows": rows,
        }
        return json.dumps(doc, indent=2) + "\n"
    raise DomainError(f"unknown output format {fmt!r}")
