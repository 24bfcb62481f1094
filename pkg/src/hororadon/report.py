"""Report assembly and serialization.

Reports are canonical JSON (sorted keys, fixed indentation) or flat CSV.  They
carry no wall-clock data, so one configuration always produces the same bytes;
timings go to stderr instead.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable

from .suites import PRNG_NAME, CheckRecord, RunConfig

SCHEMA_VERSION = 1
CSV_COLUMNS = ("suite", "name", "anchor", "lhs", "rhs", "residual", "tolerance", "passed")


def _finite(v):
    """Replace non-finite floats by strings so the JSON stays standard."""
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, dict):
        return {k: _finite(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_finite(x) for x in v]
    return v


def record_row(suite: str, r: CheckRecord) -> dict:
    return {
        "suite": suite,
        "name": r.name,
        "anchor": r.anchor,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "residual": r.residual,
        "tolerance": r.tolerance,
        "passed": r.passed,
    }


def build_report(command: str, config: RunConfig, results: dict[str, list[CheckRecord]],
                 calibration: dict | None = None, diagnostics: dict | None = None) -> dict:
    rows = [record_row(suite, r) for suite in sorted(results) for r in results[suite]]
    rows.sort(key=lambda row: (row["suite"], row["name"]))
    failed = [f'{row["suite"]}/{row["name"]}' for row in rows if not row["passed"]]
    per_suite = {
        suite: {"passed": sum(r.passed for r in recs), "total": len(recs)}
        for suite, recs in sorted(results.items())
    }
    return _finite({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed": config.seed,
        "prng": PRNG_NAME,
        "environment": config.environment(),
        "calibration": calibration or {},
        "records": rows,
        "diagnostics": diagnostics or {},
        "summary": {
            "all_passed": not failed,
            "failed": failed,
            "passed": len(rows) - len(failed),
            "per_suite": per_suite,
            "total": len(rows),
        },
    })


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cell(v) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in report["records"]:
        w.writerow([_cell(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def serialize(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError(f"unknown format {fmt!r}")


def table_to_csv(columns: dict[str, str], rows: Iterable[Iterable], header: dict | None = None) -> str:
    """CSV whose leading '#' lines document each column."""
    buf = io.StringIO()
    for k, v in sorted((header or {}).items()):
        buf.write(f"# {k}: {v}\n")
    for name, doc in columns.items():
        buf.write(f"# column {name}: {doc}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(columns))
    for row in rows:
        w.writerow([_cell(float(x)) if isinstance(x, (int, float)) and not isinstance(x, bool) else _cell(x) for x in row])
    return buf.getvalue()


def table_to_json(columns: dict[str, str], rows: Iterable[Iterable], header: dict | None = None) -> str:
    data = {name: [] for name in columns}
    for row in rows:
        for name, x in zip(columns, row):
            data[name].append(x)
    doc = {"schema_version": SCHEMA_VERSION, "columns": columns, "data": data, **(header or {})}
    return json.dumps(_finite(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"
