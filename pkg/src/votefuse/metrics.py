"""Scoring of fused or individual predictions against ground truth.

An abstained prediction never matches: it scores as incorrect for accuracy
and lands in a dedicated abstain column of the confusion matrix. Degenerate
precision/recall/F1 ratios (0/0) are defined as 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import EmptyInput, LengthMismatch
from .model import GroundTruth

Labels = Union[GroundTruth, Sequence[int]]


def _truth_vector(truth: Labels) -> Sequence[int]:
    return truth.labels if isinstance(truth, GroundTruth) else truth


def _checked(pred: Sequence[int | None], truth: Labels) -> Sequence[int]:
    t = _truth_vector(truth)
    if len(pred) == 0 and len(t) == 0:
        raise EmptyInput()
    if len(pred) != len(t):
        raise LengthMismatch(len(pred), len(t))
    return t


@dataclass(frozen=True)
class ConfusionMatrix:
    """Count grid: rows are true classes, columns predicted classes.

    When any abstentions occurred, `abstain` holds the per-true-class abstain
    counts (the appended column); otherwise it is None.
    """

    counts: tuple[tuple[int, ...], ...]
    abstain: tuple[int, ...] | None = None

    @property
    def class_count(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(map(sum, self.counts)) + (sum(self.abstain) if self.abstain else 0)

    @property
    def trace(self) -> int:
        return sum(self.counts[c][c] for c in range(self.class_count))

    def row_total(self, c: int) -> int:
        return sum(self.counts[c]) + (self.abstain[c] if self.abstain else 0)

    def col_total(self, c: int) -> int:
        return sum(row[c] for row in self.counts)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricsBundle:
    accuracy: float
    per_class: tuple[ClassMetrics, ...]
    confusion: ConfusionMatrix
    tie_count: int
    abstain_count: int


def accuracy(pred: Sequence[int | None], truth: Labels) -> float:
    """Fraction of predictions equal to the true label; abstain never matches."""
    t = _checked(pred, truth)
    matches = sum(1 for p, tv in zip(pred, t) if p == tv)
    return matches / len(t)


def confusion(pred: Sequence[int | None], truth: Labels, class_count: int) -> ConfusionMatrix:
    t = _checked(pred, truth)
    grid = [[0] * class_count for _ in range(class_count)]
    abstain = [0] * class_count
    for p, tv in zip(pred, t):
        if p is None:
            abstain[tv] += 1
        else:
            grid[tv][p] += 1
    return ConfusionMatrix(
        counts=tuple(tuple(row) for row in grid),
        abstain=tuple(abstain) if any(abstain) else None,
    )


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def per_class(cm: ConfusionMatrix) -> tuple[ClassMetrics, ...]:
    """Precision, recall, and F1 per class; abstentions count only against recall."""
    out = []
    for c in range(cm.class_count):
        tp = cm.counts[c][c]
        precision = _ratio(tp, cm.col_total(c))
        recall = _ratio(tp, cm.row_total(c))
        denom = precision + recall
        f1 = 2 * precision * recall / denom if denom else 0.0
        out.append(ClassMetrics(precision=precision, recall=recall, f1=f1))
    return tuple(out)


def score(
    pred: Sequence[int | None],
    truth: Labels,
    class_count: int,
    tie_count: int = 0,
) -> MetricsBundle:
    """Full metrics bundle for one prediction vector."""
    cm = confusion(pred, truth, class_count)
    return MetricsBundle(
        accuracy=accuracy(pred, truth),
        per_class=per_class(cm),
        confusion=cm,
        tie_count=tie_count,
        abstain_count=sum(cm.abstain) if cm.abstain else 0,
    )
