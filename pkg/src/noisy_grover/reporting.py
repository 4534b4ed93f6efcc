"""Deterministic CSV/JSON emission of trajectory reports.

Floats are printed with 17 significant digits so output round-trips
exactly and identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
import math

from .analysis import TrajectoryReport

__all__ = ["CSV_HEADER", "report_rows", "rows_to_csv", "rows_to_json"]

CSV_HEADER = (
    "chi,n,w,m,p_success,f_paper,f_closed,cos_gamma_sim,cos_gamma_closed,"
    "bloch_norm,entropy_nats,majorized_by_prev,majorized_by_init"
)

_COLUMNS = CSV_HEADER.split(",")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def report_rows(report: TrajectoryReport) -> list:
    """One ordered dict per iteration, matching the CSV schema."""
    inst = report.instance
    rows = []
    for k, point in enumerate(report.points):
        rows.append(
            {
                "chi": float(inst.chi),
                "n": inst.n,
                "w": inst.w,
                "m": point.m,
                "p_success": point.p_success,
                "f_paper": point.f_paper,
                "f_closed": report.f_closed[k],
                "cos_gamma_sim": point.cos_gamma,
                "cos_gamma_closed": report.cos_gamma_closed[k],
                "bloch_norm": point.bloch_norm,
                "entropy_nats": report.entropies[k],
                "majorized_by_prev": bool(report.majorized_by_prev[k]),
                "majorized_by_init": bool(report.majorized_by_init[k]),
            }
        )
    return rows


def rows_to_csv(rows: list) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in _COLUMNS))
    return "\n".join(lines) + "\n"


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def rows_to_json(rows: list, discrepancies: list) -> str:
    payload = {
        "rows": [{k: _json_safe(v) for k, v in row.items()} for row in rows],
        "discrepancies": [d.to_dict() for d in discrepancies],
    }
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"
