"""Stable output rendering shared by the CLI and the HTTP service.

Scores always carry exactly four decimal places in machine-readable output
while being computed at full precision, so every consumer sees the same
digits. The JSON emitter below exists solely to pin that float formatting;
everything else matches the standard compact encoding.
"""

from __future__ import annotations

import json
from typing import Any

from .model import Snapshot
from .risk import OperationId, RiskReport

SCORE_DECIMALS = 4


def format_score(value: float) -> str:
    return f"{value:.{SCORE_DECIMALS}f}"


def to_json(value: Any) -> str:
    """Compact JSON with floats rendered at four decimal places."""
    parts: list[str] = []
    _emit(value, parts)
    return "".join(parts)


def _emit(value: Any, parts: list[str]) -> None:
    if value is None:
        parts.append("null")
    elif value is True:
        parts.append("true")
    elif value is False:
        parts.append("false")
    elif isinstance(value, float):
        parts.append(format_score(value))
    elif isinstance(value, int):
        parts.append(str(value))
    elif isinstance(value, str):
        parts.append(json.dumps(value))
    elif isinstance(value, dict):
        parts.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                parts.append(",")
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            parts.append(json.dumps(key))
            parts.append(":")
            _emit(item, parts)
        parts.append("}")
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for i, item in enumerate(value):
            if i:
                parts.append(",")
            _emit(item, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot render {type(value).__name__} as JSON")


def report_doc(report: RiskReport) -> dict:
    return {
        "mode": report.mode.value,
        "total": float(report.total),
        "clamped": report.clamped,
        "per_path": [
            {"path": path_id, "contribution": contribution}
            for path_id, contribution in report.per_path
        ],
        "per_branch": [
            {"branch": hit.branch, "op": hit.op, "contribution": hit.contribution}
            for hit in report.per_branch
        ],
        "unmatched": list(report.unmatched),
    }


def report_table(report: RiskReport) -> str:
    lines = [
        f"mode      {report.mode.value}",
        f"total     {format_score(report.total)}",
        f"clamped   {'yes' if report.clamped else 'no'}",
    ]
    for path_id, contribution in report.per_path:
        lines.append(f"path {path_id:<4} {format_score(contribution)}")
    if report.unmatched:
        lines.append("unmatched " + ",".join(report.unmatched))
    return "\n".join(lines) + "\n"


def sweep_doc(mode: str, results: list[tuple[OperationId, float]]) -> dict:
    return {
        "mode": mode,
        "results": [{"op": op.label, "score": score} for op, score in results],
    }


def sweep_csv(results: list[tuple[OperationId, float]]) -> str:
    lines = ["operation,score"]
    lines.extend(f"{op.label},{format_score(score)}" for op, score in results)
    return "\n".join(lines) + "\n"


def snapshot_summary_doc(snapshot: Snapshot) -> dict:
    """Everything a client needs to draw the topology and pick operations."""
    return {
        "entry_label": snapshot.entry_label,
        "grand_total": snapshot.grand_total,
        "services": list(snapshot.services),
        "operations": [
            {"label": label, "service": op.service, "name": op.name}
            for label, op in sorted(snapshot.operations.items())
        ],
        "paths": [
            {
                "id": path.id,
                "root": path.root.label,
                "weight": path.weight,
                "branches": {key: path.counts[key] for key in sorted(path.counts)},
            }
            for path in snapshot.paths
        ],
    }
