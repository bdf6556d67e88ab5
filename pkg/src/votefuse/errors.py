"""Exception hierarchy.

Every invariant violation maps to its own class so callers (and the CLI)
can report precisely what went wrong instead of a generic failure.
"""

from __future__ import annotations


class VotefuseError(Exception):
    """Base class for all errors raised by this package."""


# --- alignment ---------------------------------------------------------------


class AlignmentError(VotefuseError):
    pass


class EmptyIntersection(AlignmentError):
    def __init__(self) -> None:
        super().__init__("no sample_id is shared by the ground truth and every run")


class MissingSamples(AlignmentError):
    def __init__(self, run_id: str, count: int) -> None:
        self.run_id = run_id
        self.count = count
        super().__init__(f"run {run_id!r} is missing {count} ground-truth sample(s)")


class ExtraSamples(AlignmentError):
    def __init__(self, run_id: str, count: int) -> None:
        self.run_id = run_id
        self.count = count
        super().__init__(f"run {run_id!r} predicts {count} sample(s) absent from the ground truth")


class UnknownLabel(VotefuseError):
    """A label string or index that does not resolve against the label set."""

    def __init__(self, where: str, label: object) -> None:
        self.where = where
        self.label = label
        super().__init__(f"unknown label {label!r} at {where}")


# --- ingest ------------------------------------------------------------------


class ParseError(VotefuseError):
    def __init__(self, path: str, detail: str) -> None:
        self.path = path
        self.detail = detail
        super().__init__(f"{path}: {detail}")


class UnsupportedVersion(VotefuseError):
    def __init__(self, version: object) -> None:
        self.version = version
        super().__init__(f"unsupported manifest version {version!r} (expected 1)")


class DuplicateRunId(VotefuseError):
    def __init__(self, run_id: str) -> None:
        self.run_id = run_id
        super().__init__(f"duplicate run id {run_id!r}")


class DuplicateSampleId(VotefuseError):
    def __init__(self, where: str, sample_id: str) -> None:
        self.where = where
        self.sample_id = sample_id
        super().__init__(f"duplicate sample_id {sample_id!r} at {where}")


class EmptyFile(VotefuseError):
    def __init__(self, path: str) -> None:
        self.path = path
        super().__init__(f"{path}: no data rows")


class SchemaError(VotefuseError):
    def __init__(self, where: str, detail: str) -> None:
        self.where = where
        self.detail = detail
        super().__init__(f"{where}: {detail}")


class ConfidenceMismatch(VotefuseError):
    def __init__(self, sample_id: str, detail: str) -> None:
        self.sample_id = sample_id
        self.detail = detail
        super().__init__(f"confidence vector for sample {sample_id!r} invalid: {detail}")


# --- voting ------------------------------------------------------------------


class MissingConfidence(VotefuseError):
    def __init__(self, run_id: str) -> None:
        self.run_id = run_id
        super().__init__(
            f"tie policy highest-mean-confidence requires confidences on every member; "
            f"run {run_id!r} has none"
        )


# --- metrics -----------------------------------------------------------------


class LengthMismatch(VotefuseError):
    def __init__(self, n_pred: int, n_truth: int) -> None:
        self.n_pred = n_pred
        self.n_truth = n_truth
        super().__init__(f"prediction vector has {n_pred} entries, ground truth has {n_truth}")


class EmptyInput(VotefuseError):
    def __init__(self) -> None:
        super().__init__("cannot score an empty prediction vector")


# --- sweep -------------------------------------------------------------------


class InvalidSize(VotefuseError):
    def __init__(self, k: int, n: int) -> None:
        self.k = k
        self.n = n
        super().__init__(f"ensemble size {k} invalid for {n} run(s) (need 1 <= k <= n <= 64)")


# --- report ------------------------------------------------------------------


class UnsupportedKindFormat(VotefuseError):
    def __init__(self, kind: str, format: str) -> None:
        self.kind = kind
        self.format = format
        super().__init__(f"cannot emit report kind {kind!r} as format {format!r}")
