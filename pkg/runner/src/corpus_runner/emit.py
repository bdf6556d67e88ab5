"""Run-file, truth, and manifest emission in the evaluation engine's formats.

Every run file is self-validated before it lands: confidence vectors must
sum to 1 within 1e-6 and their argmax must equal the hard label. Writes are
atomic (temp file, then rename).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .corpus import CorpusExample
from .errors import SchemaError
from .pairs import PairedExample
from .training import TrainedModel, Prediction, predict

CONFIDENCE_SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class RunFileSpec:
    run_id: str
    family: str
    representation: str
    file: str  # path relative to the manifest


def _write_atomic(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _normalized(probabilities: Sequence[float]) -> list[float]:
    total = float(sum(probabilities))
    if total <= 0:
        raise SchemaError(f"non-positive probability mass {total!r}")
    return [float(p) / total for p in probabilities]


def _validate_predictions(
    predictions: list[Prediction], label_names: tuple[str, ...], run_id: str
) -> list[dict[str, Any]]:
    rows = []
    seen: set[str] = set()
    for pred in predictions:
        if pred.sample_id in seen:
            raise SchemaError(f"run {run_id!r}: duplicate sample_id {pred.sample_id!r}")
        seen.add(pred.sample_id)
        if pred.label not in label_names:
            raise SchemaError(f"run {run_id!r}: label {pred.label!r} outside the label set")
        vector = _normalized(pred.probabilities)
        if len(vector) != len(label_names):
            raise SchemaError(
                f"run {run_id!r}: confidence length {len(vector)} != {len(label_names)} classes"
            )
        if abs(sum(vector) - 1.0) > CONFIDENCE_SUM_TOLERANCE:
            raise SchemaError(f"run {run_id!r}: confidence sums to {sum(vector)!r}")
        if label_names[vector.index(max(vector))] != pred.label:
            raise SchemaError(
                f"run {run_id!r}: confidence argmax disagrees with hard label for "
                f"sample {pred.sample_id!r}"
            )
        rows.append({"sample_id": pred.sample_id, "label": pred.label, "confidence": vector})
    return rows


def write_run_file(
    predictions: list[Prediction],
    run_id: str,
    label_names: tuple[str, ...],
    out_path: str | Path,
    metadata: dict[str, Any] | None = None,
) -> Path:
    out_path = Path(out_path)
    rows = _validate_predictions(predictions, label_names, run_id)
    doc: dict[str, Any] = {"run_id": run_id, "predictions": rows}
    if metadata is not None:
        doc["metadata"] = metadata
    _write_atomic(out_path, (json.dumps(doc, ensure_ascii=False, indent=1) + "\n").encode("utf-8"))
    return out_path


def predict_and_emit(
    handle: TrainedModel,
    eval_pairs: list[PairedExample],
    family: str,
    representation: str,
    out_path: str | Path,
    run_id: str | None = None,
) -> RunFileSpec:
    """Run inference over the evaluation pairs and emit a validated run file."""
    run_id = run_id or f"{family}_{representation}"
    predictions = predict(handle, eval_pairs)
    metadata = {
        "seed": handle.seed,
        "checkpoint": handle.checkpoint,
        "epochs": handle.hyperparams.epochs,
    }
    path = write_run_file(predictions, run_id, handle.label_names, out_path, metadata)
    return RunFileSpec(run_id=run_id, family=family, representation=representation, file=path.name)


def write_truth(examples: list[CorpusExample], out_path: str | Path) -> Path:
    out_path = Path(out_path)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sample_id", "label"])
    for example in examples:
        writer.writerow([example.sample_id, example.label])
    _write_atomic(out_path, buf.getvalue().encode("utf-8"))
    return out_path


def write_manifest(
    label_names: Sequence[str],
    truth_file: str,
    runs: list[RunFileSpec],
    out_path: str | Path,
    run_dir: str = "runs",
) -> Path:
    out_path = Path(out_path)
    doc = {
        "version": 1,
        "labels": list(label_names),
        "truth": truth_file,
        "runs": [
            {
                "id": spec.run_id,
                "family": spec.family,
                "representation": spec.representation,
                "file": f"{run_dir}/{spec.file}",
            }
            for spec in runs
        ],
    }
    _write_atomic(out_path, (json.dumps(doc, ensure_ascii=False, indent=1) + "\n").encode("utf-8"))
    return out_path
