from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # oracles/synth helpers

from votefuse.model import GroundTruth, LabelSet, PredictionRun, align

FIXTURES = Path(__file__).parent / "fixtures"
TWELVE_MANIFEST = FIXTURES / "twelve" / "manifest.json"
ARABIC_MANIFEST = FIXTURES / "arabic" / "manifest.json"


def make_run(run_id, labels_by_sample, family="other", representation="other", confidences=None):
    return PredictionRun(run_id, family, representation, dict(labels_by_sample), confidences)


@pytest.fixture
def abc_labels():
    return LabelSet(("alpha", "beta", "gamma"))


@pytest.fixture
def small_truth():
    return GroundTruth((("s1", 0), ("s2", 1), ("s3", 2), ("s4", 1)))


@pytest.fixture
def small_runset(small_truth):
    r0 = make_run("r0", {"s1": 0, "s2": 1, "s3": 2, "s4": 0})
    r1 = make_run("r1", {"s1": 0, "s2": 2, "s3": 2, "s4": 1})
    r2 = make_run("r2", {"s1": 1, "s2": 2, "s3": 2, "s4": 0})
    return align([r0, r1, r2], small_truth, class_count=3)
