from __future__ import annotations

import json
import subprocess
import sys

import pytest

from conftest import SEVEN_LABELS, synthetic_corpus
from corpus_runner.emit import (
    predict_and_emit,
    write_manifest,
    write_run_file,
    write_truth,
)
from corpus_runner.errors import SchemaError
from corpus_runner.pairs import build_pairs
from corpus_runner.preprocess import PreprocessMode
from corpus_runner.training import Hyperparams, Prediction, finetune


def votefuse_validate(manifest_path):
    return subprocess.run(
        [sys.executable, "-m", "votefuse.cli", "validate", "--manifest", str(manifest_path)],
        capture_output=True,
        text=True,
    )


@pytest.fixture(scope="module")
def emitted(tmp_path_factory, tiny_checkpoint):
    out = tmp_path_factory.mktemp("emit")
    examples = synthetic_corpus(8)
    pairs = build_pairs(examples, {}, PreprocessMode.NONE)
    handle = finetune(tiny_checkpoint, pairs, SEVEN_LABELS, Hyperparams(epochs=0), seed=13)
    spec = predict_and_emit(
        handle, pairs, family="camelbert", representation="post",
        out_path=out / "runs" / "camelbert_post.json",
    )
    write_truth(examples, out / "truth.csv")
    write_manifest(SEVEN_LABELS, "truth.csv", [spec], out / "manifest.json")
    return out, spec


def test_emitted_run_passes_strict_validation(emitted):
    out, _ = emitted
    proc = votefuse_validate(out / "manifest.json")
    assert proc.returncode == 0, proc.stderr
    assert "1 runs, 8 samples, 7 labels" in proc.stdout


def test_emitted_confidences_sum_to_one(emitted):
    out, spec = emitted
    doc = json.loads((out / "runs" / spec.file).read_text(encoding="utf-8"))
    assert len(doc["predictions"]) == 8
    for row in doc["predictions"]:
        assert abs(sum(row["confidence"]) - 1.0) <= 1e-6
        top = row["confidence"].index(max(row["confidence"]))
        assert SEVEN_LABELS[top] == row["label"]


def test_emitted_metadata_records_seed_and_checkpoint(emitted, tiny_checkpoint):
    out, spec = emitted
    doc = json.loads((out / "runs" / spec.file).read_text(encoding="utf-8"))
    assert doc["metadata"]["seed"] == 13
    assert doc["metadata"]["checkpoint"] == tiny_checkpoint
    assert doc["run_id"] == "camelbert_post"


def test_self_validation_rejects_inconsistent_argmax(tmp_path):
    bad = [Prediction(sample_id="q1", label=SEVEN_LABELS[0], probabilities=(0.1, 0.9) + (0.0,) * 5)]
    with pytest.raises(SchemaError):
        write_run_file(bad, "run", SEVEN_LABELS, tmp_path / "bad.json")


def test_self_validation_rejects_wrong_vector_length(tmp_path):
    bad = [Prediction(sample_id="q1", label=SEVEN_LABELS[0], probabilities=(1.0,))]
    with pytest.raises(SchemaError):
        write_run_file(bad, "run", SEVEN_LABELS, tmp_path / "bad.json")


def test_self_validation_rejects_duplicate_samples(tmp_path):
    row = Prediction(sample_id="q1", label=SEVEN_LABELS[0], probabilities=(1.0,) + (0.0,) * 6)
    with pytest.raises(SchemaError):
        write_run_file([row, row], "run", SEVEN_LABELS, tmp_path / "bad.json")
