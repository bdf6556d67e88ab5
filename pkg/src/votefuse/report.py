"""Deterministic serialization of tables, sweeps, group results, and plot data.

Identical inputs and options always produce byte-identical output: structured
reports are canonical JSON (sorted keys, no insignificant whitespace, UTF-8),
delimited reports are comma-separated with a header row and `\\n` line
endings. Accuracies are rendered with exactly four decimal places, rounded
half-to-even. Timestamps are excluded unless explicitly requested.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Any, Union

from .errors import UnsupportedKindFormat
from .grouping import GroupReport
from .metrics import MetricsBundle
from .model import LabelSet, PredictionRun, RunSet
from .sweep import BestPerSize, SweepReport

KINDS = ("individual-table", "sweep", "best-per-size", "groups", "fuse")
FORMATS = ("structured", "delimited")


def fmt_accuracy(value: float) -> str:
    """Exactly four decimal places, half-to-even on the shortest decimal form."""
    return str(Decimal(repr(float(value))).quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


def render_members(runs: RunSet, mask_indices: tuple[int, ...]) -> list[str]:
    """Run ids of the masked members, sorted lexicographically."""
    return sorted(runs.run_ids[i] for i in mask_indices)


@dataclass(frozen=True)
class ReportMeta:
    manifest: str | None = None
    tie_policy: str | None = None
    alignment_mode: str | None = None
    timestamp: str | None = None  # excluded unless the caller opts in

    def as_dict(self) -> dict[str, str]:
        out = {}
        for key in ("manifest", "tie_policy", "alignment_mode", "timestamp"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


@dataclass(frozen=True)
class ReportDocument:
    kind: str
    metadata: ReportMeta
    payload: dict[str, Any]


def _metrics_payload(metrics: MetricsBundle) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "accuracy": fmt_accuracy(metrics.accuracy),
        "tie_count": metrics.tie_count,
        "abstain_count": metrics.abstain_count,
        "per_class": [
            {
                "precision": fmt_accuracy(m.precision),
                "recall": fmt_accuracy(m.recall),
                "f1": fmt_accuracy(m.f1),
            }
            for m in metrics.per_class
        ],
        "confusion": [list(row) for row in metrics.confusion.counts],
    }
    if metrics.confusion.abstain is not None:
        payload["confusion_abstain"] = list(metrics.confusion.abstain)
    return payload


def individual_table_document(
    table: list[tuple[str, float]], meta: ReportMeta = ReportMeta()
) -> ReportDocument:
    rows = [{"run_id": run_id, "accuracy": fmt_accuracy(acc)} for run_id, acc in table]
    return ReportDocument("individual-table", meta, {"rows": rows})


def sweep_document(
    report: SweepReport, runs: RunSet, meta: ReportMeta = ReportMeta()
) -> ReportDocument:
    rows = [
        {
            "rank": rank,
            "members": render_members(runs, entry.spec.indices),
            "accuracy": fmt_accuracy(entry.accuracy),
            "tie_count": entry.tie_count,
        }
        for rank, entry in enumerate(report.ranking, start=1)
    ]
    payload = {
        "size": report.size,
        "total_combinations": report.total_combinations,
        "rows": rows,
    }
    return ReportDocument("sweep", meta, payload)


def best_per_size_document(
    best: BestPerSize, runs: RunSet, meta: ReportMeta = ReportMeta()
) -> ReportDocument:
    rows = [
        {
            "size": size,
            "members": render_members(runs, entry.spec.indices),
            "accuracy": fmt_accuracy(entry.accuracy),
            "tie_count": entry.tie_count,
        }
        for size, entry in best.entries
    ]
    return ReportDocument("best-per-size", meta, {"rows": rows})


def groups_document(report: GroupReport, meta: ReportMeta = ReportMeta()) -> ReportDocument:
    rows = []
    for group in report.groups:
        row: dict[str, Any] = {"tag": group.tag, "members": sorted(group.member_run_ids)}
        row.update(_metrics_payload(group.metrics))
        rows.append(row)
    return ReportDocument("groups", meta, {"key": report.key, "rows": rows})


def fuse_document(
    member_run_ids: list[str], metrics: MetricsBundle, meta: ReportMeta = ReportMeta()
) -> ReportDocument:
    payload: dict[str, Any] = {"members": sorted(member_run_ids)}
    payload.update(_metrics_payload(metrics))
    return ReportDocument("fuse", meta, payload)


def _delimited(header: list[str], rows: list[list[str]]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def _structured(doc: ReportDocument) -> bytes:
    obj = {"kind": doc.kind, "metadata": doc.metadata.as_dict(), "payload": doc.payload}
    return (json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n").encode(
        "utf-8"
    )


def emit(doc: ReportDocument, format: str = "delimited") -> bytes:
    """Serialize a report document; output order is fully deterministic."""
    if doc.kind not in KINDS or format not in FORMATS:
        raise UnsupportedKindFormat(doc.kind, format)
    if format == "structured":
        return _structured(doc)

    if doc.kind == "individual-table":
        rows = [[r["run_id"], r["accuracy"]] for r in doc.payload["rows"]]
        return _delimited(["run_id", "accuracy"], rows)
    if doc.kind == "sweep":
        rows = [
            [str(r["rank"]), "+".join(r["members"]), r["accuracy"]] for r in doc.payload["rows"]
        ]
        return _delimited(["rank", "members", "accuracy"], rows)
    if doc.kind == "best-per-size":
        rows = [
            [str(r["size"]), "+".join(r["members"]), r["accuracy"]] for r in doc.payload["rows"]
        ]
        return _delimited(["size", "members", "accuracy"], rows)
    if doc.kind == "groups":
        rows = [
            [r["tag"], "+".join(r["members"]), r["accuracy"]] for r in doc.payload["rows"]
        ]
        return _delimited(["tag", "members", "accuracy"], rows)
    # fuse
    return _delimited(["label", "accuracy"], [["ensemble", doc.payload["accuracy"]]])


PlotSource = Union[SweepReport, BestPerSize, GroupReport]


def emit_plot_data(report: PlotSource, runs: RunSet | None = None) -> bytes:
    """Bar-chart data: one `label,accuracy` row per bar, in report order."""
    rows: list[list[str]] = []
    if isinstance(report, SweepReport):
        if runs is None:
            raise ValueError("sweep plot data needs the run set to render member labels")
        for entry in report.ranking:
            rows.append(
                ["+".join(render_members(runs, entry.spec.indices)), fmt_accuracy(entry.accuracy)]
            )
    elif isinstance(report, BestPerSize):
        for size, entry in report.entries:
            rows.append([f"k={size}", fmt_accuracy(entry.accuracy)])
    else:
        for group in report.groups:
            rows.append([group.tag, fmt_accuracy(group.metrics.accuracy)])
    return _delimited(["label", "accuracy"], rows)


def emit_run_file(
    run: PredictionRun, labels: LabelSet, metadata: dict[str, Any] | None = None
) -> bytes:
    """Canonical run-file bytes; predictions sorted by sample_id for stability."""
    predictions = []
    for sample_id in sorted(run.predictions):
        row: dict[str, Any] = {
            "sample_id": sample_id,
            "label": labels.name_of(run.predictions[sample_id]),
        }
        if run.confidences is not None:
            row["confidence"] = list(run.confidences[sample_id])
        predictions.append(row)
    doc: dict[str, Any] = {"run_id": run.run_id, "predictions": predictions}
    if metadata is not None:
        doc["metadata"] = metadata
    return (json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n").encode(
        "utf-8"
    )
