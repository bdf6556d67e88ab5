"""Raw corpus loading and train/eval splitting.

The corpus is delimited UTF-8 text with header `sample_id,text,label`,
one user post per row.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusError


@dataclass(frozen=True)
class CorpusExample:
    sample_id: str
    text: str
    label: str


def load_corpus(path: str | Path) -> list[CorpusExample]:
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise CorpusError(f"{path}: empty corpus file")
    if rows[0] != ["sample_id", "text", "label"]:
        raise CorpusError(f"{path}: expected header sample_id,text,label, got {','.join(rows[0])!r}")
    examples = []
    seen: set[str] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise CorpusError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
        sample_id, text, label = row
        if sample_id in seen:
            raise CorpusError(f"{path}:{lineno}: duplicate sample_id {sample_id!r}")
        if not text.strip():
            raise CorpusError(f"{path}:{lineno}: empty post text")
        seen.add(sample_id)
        examples.append(CorpusExample(sample_id, text, label))
    if not examples:
        raise CorpusError(f"{path}: no data rows")
    return examples


def label_names(examples: list[CorpusExample]) -> list[str]:
    """Distinct labels in first-appearance order."""
    names: list[str] = []
    for example in examples:
        if example.label not in names:
            names.append(example.label)
    return names


def split_corpus(
    examples: list[CorpusExample], eval_fraction: float, seed: int
) -> tuple[list[CorpusExample], list[CorpusExample]]:
    """Deterministic shuffled split; eval keeps at least one example."""
    if not 0.0 < eval_fraction < 1.0:
        raise CorpusError(f"eval fraction must be in (0, 1), got {eval_fraction}")
    order = list(examples)
    random.Random(seed).shuffle(order)
    n_eval = max(1, round(len(order) * eval_fraction))
    if n_eval >= len(order):
        raise CorpusError("corpus too small to split: no training examples left")
    return order[n_eval:], order[:n_eval]
