"""Exhaustive ensemble sweeps: evaluate every size-k subset of the run set.

Enumeration is by bitmask in ascending numeric order, which gives every
report a total, machine-independent order. Ranking ties on accuracy break
toward the smaller mask. Selection happens on the evaluation accuracy
itself; there is no held-out selection split.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import InvalidSize
from .metrics import accuracy
from .model import EnsembleSpec, GroundTruth, RunSet, TiePolicy
from .voting import fuse

MAX_RUNS = 64  # one machine word per mask


@dataclass(frozen=True)
class RankedEnsemble:
    spec: EnsembleSpec
    accuracy: float
    tie_count: int


@dataclass(frozen=True)
class SweepReport:
    """Top-ranked ensembles of one size, plus how many combinations were evaluated."""

    size: int
    ranking: tuple[RankedEnsemble, ...]
    total_combinations: int


@dataclass(frozen=True)
class BestPerSize:
    """The winning ensemble for each requested size."""

    entries: tuple[tuple[int, RankedEnsemble], ...]

    def best_for(self, size: int) -> RankedEnsemble:
        for k, entry in self.entries:
            if k == size:
                return entry
        raise KeyError(size)


def enumerate_combinations(n: int, k: int) -> Iterator[EnsembleSpec]:
    """All C(n, k) masks with exactly k of the low n bits set, ascending numerically."""
    if not (1 <= k <= n <= MAX_RUNS):
        raise InvalidSize(k, n)
    mask = (1 << k) - 1
    limit = 1 << n
    while mask < limit:
        yield EnsembleSpec(mask)
        # Gosper's hack: next-larger integer with the same popcount.
        low = mask & -mask
        ripple = mask + low
        mask = ripple | ((mask ^ ripple) >> (low.bit_length() + 1))


def individual_table(runs: RunSet, truth: GroundTruth) -> list[tuple[str, float]]:
    """Per-run accuracy, one row per run in manifest order."""
    class_count = runs.effective_class_count
    table = []
    for i, run in enumerate(runs.runs):
        fused = fuse(EnsembleSpec(1 << i), runs, class_count)
        table.append((run.run_id, accuracy(fused.labels, truth)))
    return table


def sweep_size(
    runs: RunSet,
    truth: GroundTruth,
    k: int,
    policy: TiePolicy = TiePolicy.LOWEST_LABEL_INDEX,
    top_n: int = 10,
    class_count: int | None = None,
) -> SweepReport:
    """Evaluate all C(n, k) ensembles and keep the top_n under the deterministic order."""
    n = len(runs)
    if top_n < 1:
        raise InvalidSize(top_n, n)
    C = class_count if class_count is not None else runs.effective_class_count
    scored = []
    for spec in enumerate_combinations(n, k):
        result = fuse(spec, runs, C, policy)
        scored.append(RankedEnsemble(spec, accuracy(result.labels, truth), result.tie_count))
    scored.sort(key=lambda e: (-e.accuracy, e.spec.mask))
    return SweepReport(size=k, ranking=tuple(scored[:top_n]), total_combinations=comb(n, k))


def sweep_all(
    runs: RunSet,
    truth: GroundTruth,
    sizes: Iterable[int],
    policy: TiePolicy = TiePolicy.LOWEST_LABEL_INDEX,
    top_n: int = 10,
) -> tuple[BestPerSize, dict[int, SweepReport]]:
    """Per-size sweeps over the requested sizes plus the best entry of each."""
    n = len(runs)
    size_list = sorted(set(sizes))
    for k in size_list:
        if not (1 <= k <= n):
            raise InvalidSize(k, n)
    class_count = runs.effective_class_count
    reports: dict[int, SweepReport] = {}
    best: list[tuple[int, RankedEnsemble]] = []
    for k in size_list:
        report = sweep_size(runs, truth, k, policy, top_n, class_count)
        reports[k] = report
        best.append((k, report.ranking[0]))
    return BestPerSize(entries=tuple(best)), reports


def parse_size_range(text: str, n: int) -> list[int]:
    """Parse a size selection like '3', '2-12', or '1,3-5' against n runs."""
    sizes: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo_s, hi_s = part.split("-", 1)
            lo, hi = int(lo_s), int(hi_s)
            if lo > hi:
                raise InvalidSize(lo, n)
            sizes.update(range(lo, hi + 1))
        elif part:
            sizes.add(int(part))
    if not sizes:
        raise InvalidSize(0, n)
    for k in sizes:
        if not (1 <= k <= n):
            raise InvalidSize(k, n)
    return sorted(sizes)
