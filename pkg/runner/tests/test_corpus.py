from __future__ import annotations

import pytest

from conftest import synthetic_corpus, write_corpus_csv
from corpus_runner.corpus import label_names, load_corpus, split_corpus
from corpus_runner.errors import CorpusError


def test_load_corpus_round_trip(tmp_path):
    examples = synthetic_corpus(10)
    path = write_corpus_csv(tmp_path / "corpus.csv", examples)
    assert load_corpus(path) == examples


def test_load_corpus_rejects_bad_header(tmp_path):
    path = tmp_path / "corpus.csv"
    path.write_text("id,body,tag\nq1,hello,typea\n", encoding="utf-8")
    with pytest.raises(CorpusError):
        load_corpus(path)


def test_load_corpus_rejects_duplicate_ids(tmp_path):
    path = tmp_path / "corpus.csv"
    path.write_text("sample_id,text,label\nq1,hello,typea\nq1,again,typeb\n", encoding="utf-8")
    with pytest.raises(CorpusError):
        load_corpus(path)


def test_load_corpus_rejects_empty_text(tmp_path):
    path = tmp_path / "corpus.csv"
    path.write_text("sample_id,text,label\nq1,,typea\n", encoding="utf-8")
    with pytest.raises(CorpusError):
        load_corpus(path)


def test_label_names_first_appearance_order():
    examples = synthetic_corpus(9, class_count=3)
    assert label_names(examples) == ["typea", "typeb", "typec"]


def test_split_is_deterministic_and_disjoint():
    examples = synthetic_corpus(20)
    train_a, eval_a = split_corpus(examples, 0.25, seed=5)
    train_b, eval_b = split_corpus(examples, 0.25, seed=5)
    assert train_a == train_b and eval_a == eval_b
    assert len(eval_a) == 5 and len(train_a) == 15
    assert {e.sample_id for e in train_a}.isdisjoint({e.sample_id for e in eval_a})


def test_split_rejects_degenerate_fractions():
    examples = synthetic_corpus(4)
    with pytest.raises(CorpusError):
        split_corpus(examples, 0.0, seed=1)
    with pytest.raises(CorpusError):
        split_corpus(examples, 0.99, seed=1)
