"""Paired training texts: original post joined with one preprocessed variant."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .corpus import CorpusExample
from .errors import AlignmentError
from .preprocess import PreprocessMode

SEPARATOR = "\n"  # keeps both texts intact for subword tokenizers


@dataclass(frozen=True)
class PairedExample:
    sample_id: str
    original: str
    variant: str
    paired: str
    label: str


def build_pairs(
    posts: list[CorpusExample],
    variants: Mapping[str, str],
    mode: PreprocessMode,
    separator: str = SEPARATOR,
) -> list[PairedExample]:
    """One paired example per post; `none` mode pairs the post with itself."""
    if mode is not PreprocessMode.NONE:
        post_ids = {p.sample_id for p in posts}
        missing = post_ids - set(variants)
        if missing:
            raise AlignmentError(f"{len(missing)} post(s) lack a variant, e.g. {sorted(missing)[0]!r}")
        extra = set(variants) - post_ids
        if extra:
            raise AlignmentError(f"{len(extra)} variant(s) lack a post, e.g. {sorted(extra)[0]!r}")

    pairs = []
    for post in posts:
        if mode is PreprocessMode.NONE:
            variant = post.text
            paired = post.text
        else:
            variant = variants[post.sample_id]
            paired = post.text + separator + variant
        pairs.append(
            PairedExample(
                sample_id=post.sample_id,
                original=post.text,
                variant=variant,
                paired=paired,
                label=post.label,
            )
        )
    return pairs
