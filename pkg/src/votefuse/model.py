"""Core domain types: label vocabulary, ground truth, prediction runs, ensembles.

All types are immutable after construction and safe to share across threads.
Sample order is always the ground-truth file order; run order is always the
manifest order, and run index i corresponds to bit i of an ensemble mask.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    EmptyIntersection,
    ExtraSamples,
    MissingSamples,
    UnknownLabel,
    VotefuseError,
)

FAMILY_TAGS = ("camelbert", "arabert", "asafayabert", "other")
REPRESENTATION_TAGS = ("post", "refined", "ner", "summarized", "other")


@dataclass(frozen=True)
class LabelSet:
    """Ordered class vocabulary; position defines the label index."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise VotefuseError("label set must not be empty")
        if len(set(self.labels)) != len(self.labels):
            raise VotefuseError("label names must be unique")
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def count(self) -> int:
        return len(self.labels)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.labels)}

    def index_of(self, name: str, where: str = "label set") -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownLabel(where, name) from None

    def name_of(self, index: int) -> str:
        return self.labels[index]


@dataclass(frozen=True)
class GroundTruth:
    """Annotated evaluation set; entry order is the canonical sample order."""

    entries: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple((s, int(l)) for s, l in self.entries))
        seen: set[str] = set()
        for sample_id, _ in self.entries:
            if sample_id in seen:
                raise VotefuseError(f"duplicate sample_id {sample_id!r} in ground truth")
            seen.add(sample_id)

    def __len__(self) -> int:
        return len(self.entries)

    @cached_property
    def sample_ids(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.entries)

    @cached_property
    def labels(self) -> tuple[int, ...]:
        return tuple(l for _, l in self.entries)

    @cached_property
    def label_array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.int64)

    def restricted_to(self, keep: frozenset[str]) -> "GroundTruth":
        return GroundTruth(tuple(e for e in self.entries if e[0] in keep))


@dataclass(frozen=True)
class PredictionRun:
    """One model's hard predictions (optionally with class probabilities)."""

    run_id: str
    family: str
    representation: str
    predictions: Mapping[str, int]
    confidences: Mapping[str, tuple[float, ...]] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "predictions", dict(self.predictions))
        if self.confidences is not None:
            object.__setattr__(
                self,
                "confidences",
                {s: tuple(float(c) for c in v) for s, v in self.confidences.items()},
            )

    @property
    def has_confidences(self) -> bool:
        return self.confidences is not None

    def restricted_to(self, keep: frozenset[str]) -> "PredictionRun":
        preds = {s: l for s, l in self.predictions.items() if s in keep}
        confs = None
        if self.confidences is not None:
            confs = {s: v for s, v in self.confidences.items() if s in keep}
        return PredictionRun(self.run_id, self.family, self.representation, preds, confs)


class TiePolicy(enum.Enum):
    """Deterministic rule for samples where two or more classes share the top vote count."""

    LOWEST_LABEL_INDEX = "lowest-label"
    PRIORITY_ORDER = "priority-order"
    HIGHEST_MEAN_CONFIDENCE = "highest-mean-confidence"
    ABSTAIN = "abstain"

    @classmethod
    def from_flag(cls, value: str) -> "TiePolicy":
        for policy in cls:
            if policy.value == value:
                return policy
        raise VotefuseError(f"unknown tie policy {value!r}")


DEFAULT_TIE_POLICY = TiePolicy.LOWEST_LABEL_INDEX


@dataclass(frozen=True)
class EnsembleSpec:
    """Bitmask selecting a subset of a RunSet; bit i selects run i."""

    mask: int

    def __post_init__(self) -> None:
        if self.mask <= 0:
            raise VotefuseError("ensemble mask must select at least one run")

    @classmethod
    def from_indices(cls, indices: Sequence[int]) -> "EnsembleSpec":
        mask = 0
        for i in indices:
            if i < 0:
                raise VotefuseError(f"negative run index {i}")
            mask |= 1 << i
        return cls(mask)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.mask.bit_length()) if self.mask >> i & 1)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)


@dataclass(frozen=True)
class RunSet:
    """Aligned, ordered collection of runs over one ground truth."""

    truth: GroundTruth
    runs: tuple[PredictionRun, ...]
    dropped: int = 0
    class_count: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "runs", tuple(self.runs))
        ids = [r.run_id for r in self.runs]
        if len(set(ids)) != len(ids):
            raise VotefuseError("run ids must be unique within a run set")

    def __len__(self) -> int:
        return len(self.runs)

    @property
    def effective_class_count(self) -> int:
        """Class count from the label set when known, else the widest index seen."""
        if self.class_count is not None:
            return self.class_count
        widest = int(self.prediction_matrix.max()) if self.runs else 0
        return max(widest, max(self.truth.labels)) + 1

    @property
    def sample_count(self) -> int:
        return len(self.truth)

    @cached_property
    def run_ids(self) -> tuple[str, ...]:
        return tuple(r.run_id for r in self.runs)

    def index_of(self, run_id: str) -> int:
        try:
            return self.run_ids.index(run_id)
        except ValueError:
            raise VotefuseError(f"no run with id {run_id!r}") from None

    def spec_for(self, run_ids: Sequence[str]) -> EnsembleSpec:
        return EnsembleSpec.from_indices([self.index_of(r) for r in run_ids])

    def full_spec(self) -> EnsembleSpec:
        return EnsembleSpec((1 << len(self.runs)) - 1)

    def validate_spec(self, spec: EnsembleSpec) -> None:
        if spec.mask >> len(self.runs):
            raise VotefuseError(
                f"ensemble mask {spec.mask:#x} selects runs beyond the {len(self.runs)} available"
            )

    @cached_property
    def prediction_matrix(self) -> np.ndarray:
        """(n_runs, n_samples) hard labels in truth sample order."""
        order = self.truth.sample_ids
        return np.asarray(
            [[run.predictions[s] for s in order] for run in self.runs], dtype=np.int64
        )

    def one_hot_votes(self, class_count: int) -> np.ndarray:
        """(n_runs, n_samples, class_count) one-hot vote tensor, cached per class count."""
        cache: dict[int, np.ndarray] = self.__dict__.setdefault("_one_hot_cache", {})
        if class_count not in cache:
            preds = self.prediction_matrix
            hot = np.zeros((*preds.shape, class_count), dtype=np.int32)
            n_idx, s_idx = np.indices(preds.shape)
            hot[n_idx, s_idx, preds] = 1
            cache[class_count] = hot
        return cache[class_count]


def align(
    runs: Sequence[PredictionRun],
    truth: GroundTruth,
    mode: str = "strict",
    class_count: int | None = None,
) -> RunSet:
    """Bind runs to a ground truth, checking sample coverage.

    strict: every run must cover exactly the truth sample set.
    intersect: truth and runs are restricted to the common sample_id
    intersection (must be non-empty); the number of truth samples dropped is
    recorded on the returned RunSet.
    """
    if len(truth) == 0:
        raise VotefuseError("ground truth must not be empty")
    if mode not in ("strict", "intersect"):
        raise VotefuseError(f"unknown alignment mode {mode!r}")

    truth_ids = frozenset(truth.sample_ids)
    if mode == "strict":
        for run in runs:
            run_ids = set(run.predictions)
            missing = truth_ids - run_ids
            if missing:
                raise MissingSamples(run.run_id, len(missing))
            extra = run_ids - truth_ids
            if extra:
                raise ExtraSamples(run.run_id, len(extra))
        aligned_truth = truth
        aligned_runs = tuple(runs)
        dropped = 0
    else:
        common = set(truth_ids)
        for run in runs:
            common &= set(run.predictions)
        if not common:
            raise EmptyIntersection()
        keep = frozenset(common)
        aligned_truth = truth.restricted_to(keep)
        aligned_runs = tuple(run.restricted_to(keep) for run in runs)
        dropped = len(truth) - len(aligned_truth)

    if class_count is not None:
        for run in aligned_runs:
            for sample_id, label in run.predictions.items():
                if not 0 <= label < class_count:
                    raise UnknownLabel(f"run {run.run_id!r}, sample {sample_id!r}", label)

    return RunSet(truth=aligned_truth, runs=aligned_runs, dropped=dropped, class_count=class_count)
