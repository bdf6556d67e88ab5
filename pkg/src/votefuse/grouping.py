"""Tag-based ensembles: one fused ensemble per representation or per model family.

Group masks always partition the run set; runs tagged "other" form their own
group rather than being dropped. Tag order is first appearance in manifest
order, so reports stay stable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import VotefuseError
from .metrics import MetricsBundle, score
from .model import EnsembleSpec, GroundTruth, RunSet, TiePolicy
from .voting import fuse

GROUP_KEYS = ("representation", "family")


@dataclass(frozen=True)
class GroupResult:
    tag: str
    member_run_ids: tuple[str, ...]
    metrics: MetricsBundle


@dataclass(frozen=True)
class GroupReport:
    key: str
    groups: tuple[GroupResult, ...]

    def by_tag(self, tag: str) -> GroupResult:
        for g in self.groups:
            if g.tag == tag:
                return g
        raise KeyError(tag)


def group_runs(runs: RunSet, key: str) -> dict[str, EnsembleSpec]:
    """Partition run indices by tag value; insertion order is first appearance."""
    if key not in GROUP_KEYS:
        raise VotefuseError(f"unknown group key {key!r} (expected one of {GROUP_KEYS})")
    masks: dict[str, int] = {}
    for i, run in enumerate(runs.runs):
        tag = run.representation if key == "representation" else run.family
        masks[tag] = masks.get(tag, 0) | (1 << i)
    return {tag: EnsembleSpec(mask) for tag, mask in masks.items()}


def evaluate_groups(
    runs: RunSet,
    truth: GroundTruth,
    key: str,
    policy: TiePolicy = TiePolicy.LOWEST_LABEL_INDEX,
) -> GroupReport:
    """Fuse and score each tag group; metrics match a sweep of the identical mask."""
    class_count = runs.effective_class_count
    results = []
    for tag, spec in group_runs(runs, key).items():
        fused = fuse(spec, runs, class_count, policy)
        results.append(
            GroupResult(
                tag=tag,
                member_run_ids=tuple(runs.run_ids[i] for i in spec.indices),
                metrics=score(fused.labels, truth, class_count, tie_count=fused.tie_count),
            )
        )
    return GroupReport(key=key, groups=tuple(results))
