"""Parsing and validation of manifests, ground-truth files, and run files.

File formats (all UTF-8):

* Manifest: JSON object `{"version": 1, "labels": [...], "truth": "truth.csv",
  "runs": [{"id", "family", "representation", "file"}, ...]}`. Paths resolve
  relative to the manifest's directory. Unknown top-level keys are rejected.
* Truth: delimited text with header `sample_id,label`, one row per sample;
  row order defines the canonical sample order.
* Run: JSON object `{"run_id": ..., "metadata"?: {...}, "predictions":
  [{"sample_id", "label", "confidence"?}, ...]}`. `confidence` is a length-C
  probability vector; it is optional per run but all-or-none within a run,
  must sum to 1 within 1e-6, and its argmax must equal the hard label.

Label strings are matched exactly against the manifest's label list; no
normalization is applied. Violations raise a distinct error each, never a
silent fix-up.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from .errors import (
    ConfidenceMismatch,
    EmptyIntersection,
    DuplicateRunId,
    DuplicateSampleId,
    EmptyFile,
    ExtraSamples,
    MissingSamples,
    ParseError,
    SchemaError,
    UnknownLabel,
    UnsupportedVersion,
    VotefuseError,
)
from .model import (
    FAMILY_TAGS,
    REPRESENTATION_TAGS,
    GroundTruth,
    LabelSet,
    PredictionRun,
    RunSet,
    align,
)

CONFIDENCE_SUM_TOLERANCE = 1e-6

_MANIFEST_KEYS = {"version", "labels", "truth", "runs"}
_RUN_ENTRY_KEYS = {"id", "family", "representation", "file"}
_RUN_FILE_KEYS = {"run_id", "metadata", "predictions"}
_PREDICTION_KEYS = {"sample_id", "label", "confidence"}

ErrorSink = Callable[[VotefuseError], None]


def _raise(err: VotefuseError) -> None:
    raise err


@dataclass(frozen=True)
class RunEntry:
    id: str
    family: str
    representation: str
    file: str


@dataclass(frozen=True)
class Manifest:
    version: int
    labels: LabelSet
    truth: str
    runs: tuple[RunEntry, ...]
    base_dir: Path

    @property
    def truth_path(self) -> Path:
        return self.base_dir / self.truth

    def run_path(self, entry: RunEntry) -> Path:
        return self.base_dir / entry.file


def _load_json(path: Path) -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(path), f"cannot read: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def load_manifest(path: str | Path) -> Manifest:
    """Parse and validate a manifest file."""
    path = Path(path)
    doc = _load_json(path)
    where = str(path)
    if not isinstance(doc, dict):
        raise SchemaError(where, "manifest must be a JSON object")
    unknown = set(doc) - _MANIFEST_KEYS
    if unknown:
        raise SchemaError(where, f"unknown top-level field(s): {sorted(unknown)}")
    missing = _MANIFEST_KEYS - set(doc)
    if missing:
        raise SchemaError(where, f"missing required field(s): {sorted(missing)}")
    if doc["version"] != 1:
        raise UnsupportedVersion(doc["version"])
    labels_raw = doc["labels"]
    if not isinstance(labels_raw, list) or not all(isinstance(x, str) for x in labels_raw):
        raise SchemaError(where, "labels must be a list of strings")
    if not isinstance(doc["truth"], str):
        raise SchemaError(where, "truth must be a path string")
    if not isinstance(doc["runs"], list) or not doc["runs"]:
        raise SchemaError(where, "runs must be a non-empty list")

    entries = []
    seen_ids: set[str] = set()
    for i, raw in enumerate(doc["runs"]):
        ctx = f"{where}: runs[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(ctx, "run entry must be an object")
        if set(raw) != _RUN_ENTRY_KEYS:
            raise SchemaError(ctx, f"run entry must have exactly the keys {sorted(_RUN_ENTRY_KEYS)}")
        if not all(isinstance(raw[k], str) for k in _RUN_ENTRY_KEYS):
            raise SchemaError(ctx, "run entry values must be strings")
        if raw["id"] in seen_ids:
            raise DuplicateRunId(raw["id"])
        seen_ids.add(raw["id"])
        if raw["family"] not in FAMILY_TAGS:
            raise SchemaError(ctx, f"family must be one of {list(FAMILY_TAGS)}, got {raw['family']!r}")
        if raw["representation"] not in REPRESENTATION_TAGS:
            raise SchemaError(
                ctx,
                f"representation must be one of {list(REPRESENTATION_TAGS)}, got {raw['representation']!r}",
            )
        entries.append(RunEntry(raw["id"], raw["family"], raw["representation"], raw["file"]))

    return Manifest(
        version=1,
        labels=LabelSet(tuple(labels_raw)),
        truth=doc["truth"],
        runs=tuple(entries),
        base_dir=path.parent,
    )


def load_truth(path: str | Path, labels: LabelSet, on_error: ErrorSink = _raise) -> GroundTruth:
    """Parse a ground-truth file; entries keep file order."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(path), f"cannot read: {exc}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        raise EmptyFile(str(path))
    if rows[0] != ["sample_id", "label"]:
        raise SchemaError(str(path), f"expected header sample_id,label, got {','.join(rows[0])!r}")
    if len(rows) == 1:
        raise EmptyFile(str(path))

    entries: list[tuple[str, int]] = []
    seen: set[str] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        where = f"{path}:{lineno}"
        if len(row) != 2:
            on_error(SchemaError(where, f"expected 2 columns, got {len(row)}"))
            continue
        sample_id, label_name = row
        if sample_id in seen:
            on_error(DuplicateSampleId(where, sample_id))
            continue
        seen.add(sample_id)
        try:
            label = labels.index_of(label_name, where)
        except UnknownLabel as exc:
            on_error(exc)
            continue
        entries.append((sample_id, label))
    return GroundTruth(tuple(entries))


def _argmax(vector: list[float]) -> int:
    best = 0
    for i in range(1, len(vector)):
        if vector[i] > vector[best]:
            best = i
    return best


def load_run(
    path: str | Path,
    entry: RunEntry,
    labels: LabelSet,
    on_error: ErrorSink = _raise,
) -> PredictionRun:
    """Parse and validate one run file against its manifest entry."""
    path = Path(path)
    doc = _load_json(path)
    where = str(path)
    if not isinstance(doc, dict):
        raise SchemaError(where, "run file must be a JSON object")
    unknown = set(doc) - _RUN_FILE_KEYS
    if unknown:
        raise SchemaError(where, f"unknown top-level field(s): {sorted(unknown)}")
    if "run_id" not in doc or "predictions" not in doc:
        raise SchemaError(where, "run file must have run_id and predictions")
    if doc["run_id"] != entry.id:
        raise SchemaError(where, f"run_id {doc['run_id']!r} does not match manifest id {entry.id!r}")
    if "metadata" in doc and not isinstance(doc["metadata"], dict):
        raise SchemaError(where, "metadata must be an object")
    if not isinstance(doc["predictions"], list):
        raise SchemaError(where, "predictions must be a list")

    predictions: dict[str, int] = {}
    confidences: dict[str, tuple[float, ...]] = {}
    with_confidence = 0
    for i, raw in enumerate(doc["predictions"]):
        ctx = f"{where}: predictions[{i}]"
        if not isinstance(raw, dict) or not set(raw) <= _PREDICTION_KEYS:
            on_error(SchemaError(ctx, "prediction must be an object with sample_id, label[, confidence]"))
            continue
        if "sample_id" not in raw or "label" not in raw:
            on_error(SchemaError(ctx, "prediction must have sample_id and label"))
            continue
        sample_id = raw["sample_id"]
        if not isinstance(sample_id, str) or not isinstance(raw["label"], str):
            on_error(SchemaError(ctx, "sample_id and label must be strings"))
            continue
        if sample_id in predictions:
            on_error(DuplicateSampleId(ctx, sample_id))
            continue
        try:
            label = labels.index_of(raw["label"], f"{ctx} (sample {sample_id!r})")
        except UnknownLabel as exc:
            on_error(exc)
            continue
        predictions[sample_id] = label

        if "confidence" in raw:
            vector = raw["confidence"]
            if not isinstance(vector, list) or not all(isinstance(c, (int, float)) for c in vector):
                on_error(SchemaError(ctx, "confidence must be a list of numbers"))
                continue
            vector = [float(c) for c in vector]
            if len(vector) != labels.count:
                on_error(
                    ConfidenceMismatch(sample_id, f"length {len(vector)}, expected {labels.count}")
                )
                continue
            total = sum(vector)
            if abs(total - 1.0) > CONFIDENCE_SUM_TOLERANCE:
                on_error(ConfidenceMismatch(sample_id, f"sums to {total!r}, expected 1"))
                continue
            if _argmax(vector) != label:
                on_error(
                    ConfidenceMismatch(
                        sample_id,
                        f"argmax index {_argmax(vector)} disagrees with hard label index {label}",
                    )
                )
                continue
            confidences[sample_id] = tuple(vector)
            with_confidence += 1

    if with_confidence and with_confidence != len(predictions):
        on_error(
            SchemaError(
                where,
                f"confidence present on {with_confidence} of {len(predictions)} predictions; "
                "must be all-or-none within a run",
            )
        )
    return PredictionRun(
        run_id=entry.id,
        family=entry.family,
        representation=entry.representation,
        predictions=predictions,
        confidences=confidences if with_confidence == len(predictions) and with_confidence else None,
    )


@dataclass(frozen=True)
class Experiment:
    """Everything loaded from one manifest, aligned and ready to evaluate."""

    manifest: Manifest
    labels: LabelSet
    truth: GroundTruth
    runs: RunSet


def load_experiment(manifest_path: str | Path, mode: str = "strict") -> Experiment:
    """Load a manifest and everything it references; raises on the first violation."""
    manifest = load_manifest(manifest_path)
    truth = load_truth(manifest.truth_path, manifest.labels)
    runs = [load_run(manifest.run_path(e), e, manifest.labels) for e in manifest.runs]
    run_set = align(runs, truth, mode=mode, class_count=manifest.labels.count)
    return Experiment(manifest=manifest, labels=manifest.labels, truth=truth, runs=run_set)


def validate_tree(manifest_path: str | Path, mode: str = "strict") -> tuple[list[str], Experiment | None]:
    """Collect every violation reachable from a manifest instead of stopping at the first.

    Returns (diagnostics, experiment); experiment is None when anything failed.
    """
    diagnostics: list[str] = []

    def sink(err: VotefuseError) -> None:
        diagnostics.append(str(err))

    try:
        manifest = load_manifest(manifest_path)
    except VotefuseError as exc:
        return [str(exc)], None

    truth = None
    try:
        truth = load_truth(manifest.truth_path, manifest.labels, on_error=sink)
    except VotefuseError as exc:
        sink(exc)

    runs: list[PredictionRun] = []
    for entry in manifest.runs:
        try:
            runs.append(load_run(manifest.run_path(entry), entry, manifest.labels, on_error=sink))
        except VotefuseError as exc:
            sink(exc)

    if truth is None or len(truth) == 0:
        if truth is not None and len(truth) == 0:
            diagnostics.append(str(EmptyFile(str(manifest.truth_path))))
        return diagnostics, None

    # Coverage is checked per run even after earlier file-level violations,
    # so one bad file does not mask alignment problems elsewhere.
    if mode == "strict":
        truth_ids = frozenset(truth.sample_ids)
        for run in runs:
            run_ids = set(run.predictions)
            if truth_ids - run_ids:
                sink(MissingSamples(run.run_id, len(truth_ids - run_ids)))
            if run_ids - truth_ids:
                sink(ExtraSamples(run.run_id, len(run_ids - truth_ids)))
    else:
        common = set(truth.sample_ids)
        for run in runs:
            common &= set(run.predictions)
        if not common:
            sink(EmptyIntersection())

    if diagnostics:
        return diagnostics, None

    try:
        run_set = align(runs, truth, mode=mode, class_count=manifest.labels.count)
    except VotefuseError as exc:
        sink(exc)
        return diagnostics, None

    return [], Experiment(manifest=manifest, labels=manifest.labels, truth=truth, runs=run_set)
