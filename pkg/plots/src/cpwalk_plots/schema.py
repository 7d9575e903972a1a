"""Readers for the simulator's file interfaces.

This package lives entirely on the consumer side of the CSV/JSON boundary:
it re-implements no simulation logic and talks to the toolkit only through
the documented schemas below.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

# trace CSV schema, exact names in exact order
TRACE_COLUMNS = (
    "t_s",
    "com_x_m",
    "com_y_m",
    "vel_x_mps",
    "vel_y_mps",
    "cp_x_m",
    "cp_y_m",
    "cmd_vx_mps",
    "cmd_vy_mps",
    "stance",
    "foot_x_m",
    "foot_y_m",
    "thrust_n",
    "qp_status",
    "qp_iterations",
)

_TEXT_COLUMNS = {"stance", "qp_status"}
_INT_COLUMNS = {"qp_iterations"}


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class TraceFrame:
    """Columns of one trace CSV, parsed and type-checked."""

    path: str
    columns: dict

    def __getitem__(self, name):
        return self.columns[name]

    def __len__(self):
        return len(self.columns["t_s"])


def load_trace(path) -> TraceFrame:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("%s: empty file" % path) from None
        if tuple(header) != TRACE_COLUMNS:
            missing = [c for c in TRACE_COLUMNS if c not in header]
            extra = [c for c in header if c not in TRACE_COLUMNS]
            detail = []
            if missing:
                detail.append("missing column(s): %s" % ", ".join(missing))
            if extra:
                detail.append("unexpected column(s): %s" % ", ".join(extra))
            if not detail:
                detail.append("columns are out of order")
            raise SchemaError("%s: header does not match the trace schema (%s)"
                              % (path, "; ".join(detail)))
        columns = {name: [] for name in TRACE_COLUMNS}
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(TRACE_COLUMNS):
                raise SchemaError("%s: line %d has %d fields, expected %d"
                                  % (path, lineno, len(row), len(TRACE_COLUMNS)))
            for name, value in zip(TRACE_COLUMNS, row):
                if name in _TEXT_COLUMNS:
                    columns[name].append(value)
                elif name in _INT_COLUMNS:
                    columns[name].append(int(value))
                else:
                    columns[name].append(float(value))
    if not columns["t_s"]:
        raise SchemaError("%s: no data rows" % path)
    return TraceFrame(path=str(path), columns=columns)


def load_sweep_summary(path) -> dict:
    path = Path(path)
    with open(path) as fh:
        summary = json.load(fh)
    for key in ("rows", "gain_factor_strictly_increasing",
                "natural_frequency_strictly_decreasing"):
        if key not in summary:
            raise SchemaError("%s: missing key %r in sweep summary" % (path, key))
    for row in summary["rows"]:
        if "thrust_n" not in row or "status" not in row:
            raise SchemaError("%s: malformed sweep row %r" % (path, row))
    return summary


def bound_from_manifest(trace_path) -> float | None:
    """Velocity-command bound from the run manifest next to a trace file."""
    manifest = Path(trace_path).parent / "manifest.json"
    if not manifest.exists():
        return None
    try:
        data = json.loads(manifest.read_text())
        return float(data["config_resolved"]["weights"]["u_bound_mps"])
    except (KeyError, TypeError, ValueError, json.JSONDecodeError):
        return None
