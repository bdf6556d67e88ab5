from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from votefuse.errors import EmptyInput, LengthMismatch
from votefuse.metrics import accuracy, confusion, per_class, score
from votefuse.model import GroundTruth


def test_accuracy_arithmetic():
    assert accuracy([0, 1, 2, 1], [0, 1, 1, 1]) == 0.75


def test_accuracy_identity():
    assert accuracy([3, 1, 4, 1, 5], [3, 1, 4, 1, 5]) == 1.0


def test_accuracy_abstain_scores_wrong():
    assert accuracy([None, 0], [1, 0]) == 0.5


def test_accuracy_accepts_ground_truth_objects():
    truth = GroundTruth((("a", 0), ("b", 1)))
    assert accuracy([0, 0], truth) == 0.5


def test_accuracy_length_mismatch():
    with pytest.raises(LengthMismatch):
        accuracy([0, 1], [0])


def test_confusion_hand_tally():
    cm = confusion([0, 1, 2, 1], [0, 1, 1, 1], 3)
    assert cm.counts == ((1, 0, 0), (0, 2, 1), (0, 0, 0))
    assert cm.abstain is None


def test_confusion_perfect_is_diagonal():
    truth = [0, 0, 1, 2, 2, 2]
    cm = confusion(truth, truth, 3)
    assert cm.counts == ((2, 0, 0), (0, 1, 0), (0, 0, 3))


def test_confusion_empty_inputs_raise_empty_input():
    with pytest.raises(EmptyInput):
        confusion([], [], 3)
    with pytest.raises(EmptyInput):
        accuracy([], [])


def test_confusion_abstain_column():
    cm = confusion([None, 0, None], [1, 0, 0], 2)
    assert cm.abstain == (1, 1)
    assert cm.total == 3
    assert cm.row_total(0) == 2


def test_per_class_hand_arithmetic():
    cm = confusion([0, 0, 1, 1, 1, 1], [0, 0, 0, 1, 1, 1], 2)
    assert cm.counts == ((2, 1), (0, 3))
    c0, c1 = per_class(cm)
    assert c0.precision == 1.0
    assert c0.recall == pytest.approx(2 / 3)
    assert c0.f1 == pytest.approx(0.8)
    assert c1.precision == 0.75
    assert c1.recall == 1.0
    assert c1.f1 == pytest.approx(6 / 7)


def test_per_class_all_correct():
    truth = [0, 1, 1, 2]
    for m in per_class(confusion(truth, truth, 3)):
        assert m.precision == m.recall == m.f1 == 1.0


def test_per_class_absent_class_is_zero_by_convention():
    cm = confusion([0, 0], [0, 0], 3)
    absent = per_class(cm)[2]
    assert absent.precision == absent.recall == absent.f1 == 0.0


def test_score_bundle_fields():
    bundle = score([0, None, 1], [0, 1, 1], 2, tie_count=1)
    assert bundle.accuracy == pytest.approx(2 / 3)
    assert bundle.tie_count == 1
    assert bundle.abstain_count == 1
    assert len(bundle.per_class) == 2


pairs = st.integers(2, 5).flatmap(
    lambda c: st.tuples(
        st.just(c),
        st.lists(
            st.tuples(
                st.one_of(st.none(), st.integers(0, c - 1)), st.integers(0, c - 1)
            ),
            min_size=1,
            max_size=40,
        ),
    )
)


@given(pairs)
def test_accuracy_equals_confusion_trace_over_total(case):
    class_count, rows = case
    pred = [p for p, _ in rows]
    truth = [t for _, t in rows]
    cm = confusion(pred, truth, class_count)
    assert accuracy(pred, truth) == pytest.approx(cm.trace / cm.total)


@given(pairs, st.randoms(use_true_random=False))
def test_joint_permutation_leaves_metrics_unchanged(case, rnd):
    class_count, rows = case
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    original = score([p for p, _ in rows], [t for _, t in rows], class_count)
    permuted = score([p for p, _ in shuffled], [t for _, t in shuffled], class_count)
    assert original.accuracy == pytest.approx(permuted.accuracy)
    assert sorted(original.confusion.counts) == sorted(permuted.confusion.counts)
    assert original.per_class == permuted.per_class


@given(pairs)
def test_per_class_metrics_bounded(case):
    class_count, rows = case
    cm = confusion([p for p, _ in rows], [t for _, t in rows], class_count)
    for m in per_class(cm):
        assert 0.0 <= m.precision <= 1.0
        assert 0.0 <= m.recall <= 1.0
        assert 0.0 <= m.f1 <= 1.0


@given(
    st.integers(2, 5).flatmap(
        lambda c: st.tuples(
            st.just(c),
            st.lists(
                st.tuples(st.integers(0, c - 1), st.integers(0, c - 1)), min_size=1, max_size=40
            ),
        )
    )
)
def test_micro_recall_equals_accuracy_without_abstentions(case):
    class_count, rows = case
    pred = [p for p, _ in rows]
    truth = [t for _, t in rows]
    cm = confusion(pred, truth, class_count)
    tp = sum(cm.counts[c][c] for c in range(class_count))
    tp_fn = sum(cm.row_total(c) for c in range(class_count))
    assert tp / tp_fn == pytest.approx(accuracy(pred, truth))
