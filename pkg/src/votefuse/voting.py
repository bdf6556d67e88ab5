"""Hard majority voting across an ensemble of prediction runs.

Fusion is per sample: tally one unweighted vote per member, take the class
with the most votes, and resolve shared maxima with the configured tie
policy. `fuse` vectorizes the tally and falls back to the per-sample
`majority_vote` only on tied samples, so both paths agree by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import MissingConfidence, VotefuseError
from .model import EnsembleSpec, RunSet, TiePolicy

ABSTAIN = None  # fused entry for a tie under TiePolicy.ABSTAIN


@dataclass(frozen=True)
class VoteContext:
    """One sample's view of an ensemble: member votes in ascending run-index order."""

    sample_id: str
    member_indices: tuple[int, ...]
    votes: tuple[int, ...]
    confidences: tuple[tuple[float, ...] | None, ...]

    def __post_init__(self) -> None:
        if not self.member_indices:
            raise VotefuseError("vote context needs at least one member")
        if list(self.member_indices) != sorted(self.member_indices):
            raise VotefuseError("member indices must be strictly ascending")
        if not (len(self.member_indices) == len(self.votes) == len(self.confidences)):
            raise VotefuseError("member, vote, and confidence arities must match")


@dataclass(frozen=True)
class FuseResult:
    """Fused labels in sample order; entries are label indices or ABSTAIN (None)."""

    labels: tuple[int | None, ...]
    tie_count: int

    @property
    def abstain_count(self) -> int:
        return sum(1 for l in self.labels if l is ABSTAIN)


def vote_counts(votes: Sequence[int], class_count: int) -> list[int]:
    """Tally votes into a per-class count vector of length class_count."""
    counts = [0] * class_count
    for v in votes:
        counts[v] += 1
    return counts


def _tied_classes(counts: Sequence[int]) -> list[int]:
    top = max(counts)
    return [c for c, n in enumerate(counts) if n == top]


def majority_vote(ctx: VoteContext, class_count: int, policy: TiePolicy) -> int | None:
    """Majority class of the context, tie-resolved per policy; None means abstain."""
    counts = vote_counts(ctx.votes, class_count)
    tied = _tied_classes(counts)
    if len(tied) == 1:
        return tied[0]

    if policy is TiePolicy.LOWEST_LABEL_INDEX:
        return tied[0]
    if policy is TiePolicy.PRIORITY_ORDER:
        tied_set = set(tied)
        for vote in ctx.votes:  # members already in ascending run-index order
            if vote in tied_set:
                return vote
        raise AssertionError("a tied class always has at least one vote")
    if policy is TiePolicy.HIGHEST_MEAN_CONFIDENCE:
        for member, conf in zip(ctx.member_indices, ctx.confidences):
            if conf is None:
                raise MissingConfidence(f"run #{member}")
        means = [
            (sum(conf[c] for conf in ctx.confidences) / len(ctx.confidences), c)  # type: ignore[index]
            for c in tied
        ]
        best = max(m for m, _ in means)
        return min(c for m, c in means if m == best)
    if policy is TiePolicy.ABSTAIN:
        return ABSTAIN
    raise VotefuseError(f"unhandled tie policy {policy!r}")


def _context_for(runs: RunSet, members: tuple[int, ...], sample_pos: int) -> VoteContext:
    sample_id = runs.truth.sample_ids[sample_pos]
    votes = tuple(int(runs.prediction_matrix[m, sample_pos]) for m in members)
    confs = tuple(
        runs.runs[m].confidences[sample_id] if runs.runs[m].confidences is not None else None
        for m in members
    )
    return VoteContext(sample_id, members, votes, confs)


def fuse(
    ensemble: EnsembleSpec,
    runs: RunSet,
    class_count: int,
    policy: TiePolicy = TiePolicy.LOWEST_LABEL_INDEX,
) -> FuseResult:
    """Fuse the selected runs over every sample.

    The tie count reports how many samples had their maximal vote count shared
    by two or more classes, whether or not the policy changed the outcome.
    """
    runs.validate_spec(ensemble)
    members = ensemble.indices
    if policy is TiePolicy.HIGHEST_MEAN_CONFIDENCE:
        for m in members:
            if not runs.runs[m].has_confidences:
                raise MissingConfidence(runs.runs[m].run_id)

    counts = runs.one_hot_votes(class_count)[list(members)].sum(axis=0)  # (S, C)
    top = counts.max(axis=1)
    tie_mask = (counts == top[:, None]).sum(axis=1) >= 2
    fused: list[int | None] = counts.argmax(axis=1).tolist()  # argmax = lowest tied index

    if policy is not TiePolicy.LOWEST_LABEL_INDEX and tie_mask.any():
        for pos in np.nonzero(tie_mask)[0]:
            fused[pos] = majority_vote(_context_for(runs, members, int(pos)), class_count, policy)

    return FuseResult(labels=tuple(fused), tie_count=int(tie_mask.sum()))
