"""Exceptions raised by the corpus runner."""

from __future__ import annotations


class RunnerError(Exception):
    """Base class for all corpus-runner errors."""


class EndpointError(RunnerError):
    def __init__(self, detail: str) -> None:
        super().__init__(f"LLM endpoint error: {detail}")


class EmptyResponse(RunnerError):
    def __init__(self, sample_id: str | None = None) -> None:
        where = f" for sample {sample_id!r}" if sample_id else ""
        super().__init__(f"LLM endpoint returned an empty completion{where}")


class AlignmentError(RunnerError):
    def __init__(self, detail: str) -> None:
        super().__init__(f"posts and variants are misaligned: {detail}")


class CheckpointUnavailable(RunnerError):
    def __init__(self, checkpoint: str, detail: str) -> None:
        self.checkpoint = checkpoint
        super().__init__(f"cannot load checkpoint {checkpoint!r}: {detail}")


class TrainingDiverged(RunnerError):
    def __init__(self, epoch: int, loss: float) -> None:
        super().__init__(f"training diverged at epoch {epoch} (loss={loss!r})")


class SchemaError(RunnerError):
    def __init__(self, detail: str) -> None:
        super().__init__(f"emitted run file failed self-validation: {detail}")


class CorpusError(RunnerError):
    def __init__(self, detail: str) -> None:
        super().__init__(detail)
