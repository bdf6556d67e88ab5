"""Independent reference implementations used to check the real ones.

Deliberately written in a different style (Counter-based tallies, dict
lookups, no numpy, no shared helpers) so they cannot inherit a bug from the
code under test.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations


def oracle_majority(votes, confidences, class_count, policy):
    """Count -> argmax -> policy, straight from the definitions.

    policy is one of 'lowest-label', 'priority-order',
    'highest-mean-confidence', 'abstain'. Returns a label index or None.
    """
    tally = Counter(votes)
    top = max(tally.values())
    tied = sorted(label for label in range(class_count) if tally.get(label, 0) == top)
    if len(tied) == 1:
        return tied[0]
    if policy == "lowest-label":
        return tied[0]
    if policy == "priority-order":
        for vote in votes:
            if vote in tied:
                return vote
        raise AssertionError("unreachable: tied classes received votes")
    if policy == "highest-mean-confidence":
        assert confidences is not None and all(c is not None for c in confidences)
        best_label = None
        best_mean = -1.0
        for label in tied:
            mean = sum(vector[label] for vector in confidences) / len(confidences)
            if mean > best_mean:
                best_mean = mean
                best_label = label
        return best_label
    if policy == "abstain":
        return None
    raise ValueError(policy)


def oracle_fuse(member_runs, truth_order, class_count, policy="lowest-label"):
    """Per-sample fusion over plain prediction dicts; returns (labels, tie_count)."""
    fused = []
    ties = 0
    for sample_id in truth_order:
        votes = [run.predictions[sample_id] for run in member_runs]
        confs = [
            run.confidences[sample_id] if run.confidences is not None else None
            for run in member_runs
        ]
        tally = Counter(votes)
        top = max(tally.values())
        if sum(1 for count in tally.values() if count == top) >= 2:
            ties += 1
        fused.append(oracle_majority(votes, confs, class_count, policy))
    return fused, ties


def oracle_accuracy(pred, truth_labels):
    hits = sum(1 for p, t in zip(pred, truth_labels) if p == t)
    return hits / len(truth_labels)


def oracle_sweep_ranking(runs, truth, class_count, k, policy="lowest-label"):
    """Every size-k subset scored and ranked: accuracy desc, mask asc."""
    indexed = list(enumerate(runs))
    results = []
    for combo in combinations(indexed, k):
        mask = 0
        members = []
        for index, run in combo:
            mask |= 1 << index
            members.append(run)
        fused, _ = oracle_fuse(members, [s for s, _ in truth], class_count, policy)
        acc = oracle_accuracy(fused, [l for _, l in truth])
        results.append((mask, acc))
    results.sort(key=lambda pair: (-pair[1], pair[0]))
    return results
