"""Run the full (checkpoint x preprocessing mode) grid over a raw corpus.

Output directory layout matches the evaluation engine's ingest formats:
`manifest.json`, `truth.csv`, and one run file per grid cell under `runs/`.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .corpus import label_names, load_corpus, split_corpus
from .emit import predict_and_emit, write_manifest, write_truth
from .errors import RunnerError
from .pairs import build_pairs
from .preprocess import LlmClient, PreprocessMode, preprocess_all
from .training import CHECKPOINTS, Hyperparams, finetune

ALL_MODES = (
    PreprocessMode.NONE,
    PreprocessMode.REFINE,
    PreprocessMode.NER,
    PreprocessMode.SUMMARIZE,
)


def parse_checkpoint_overrides(values: list[str]) -> dict[str, str]:
    overrides = {}
    for value in values:
        if "=" not in value:
            raise RunnerError(f"--checkpoint expects FAMILY=PATH_OR_NAME, got {value!r}")
        family, checkpoint = value.split("=", 1)
        if family not in CHECKPOINTS:
            raise RunnerError(f"unknown family {family!r} (expected one of {list(CHECKPOINTS)})")
        overrides[family] = checkpoint
    return overrides


def run_grid(
    corpus_path: str | Path,
    out_dir: str | Path,
    seed: int,
    eval_fraction: float = 0.2,
    endpoint: str | None = None,
    model_name: str = "llama3",
    hp: Hyperparams | None = None,
    checkpoints: dict[str, str] | None = None,
    modes: Sequence[PreprocessMode] = ALL_MODES,
) -> Path:
    """Train every (family, mode) cell and emit manifest + truth + run files."""
    out_dir = Path(out_dir)
    examples = load_corpus(corpus_path)
    labels = tuple(label_names(examples))
    hp = (hp or Hyperparams()).with_labels(len(labels))
    checkpoints = {**CHECKPOINTS, **(checkpoints or {})}

    train_examples, eval_examples = split_corpus(examples, eval_fraction, seed)
    write_truth(eval_examples, out_dir / "truth.csv")

    needs_llm = any(mode is not PreprocessMode.NONE for mode in modes)
    client = LlmClient.from_env(endpoint, model_name) if needs_llm else None

    run_specs = []
    for mode in modes:
        train_variants = preprocess_all(train_examples, mode, client)
        eval_variants = preprocess_all(eval_examples, mode, client)
        train_pairs = build_pairs(train_examples, train_variants, mode)
        eval_pairs = build_pairs(eval_examples, eval_variants, mode)
        for family, checkpoint in checkpoints.items():
            handle = finetune(checkpoint, train_pairs, labels, hp, seed)
            run_id = f"{family}_{mode.representation}"
            spec = predict_and_emit(
                handle,
                eval_pairs,
                family=family,
                representation=mode.representation,
                out_path=out_dir / "runs" / f"{run_id}.json",
                run_id=run_id,
            )
            run_specs.append(spec)
            print(f"emitted {spec.file} ({family} x {mode.representation})", file=sys.stderr)

    manifest = write_manifest(labels, "truth.csv", run_specs, out_dir / "manifest.json")
    print(f"wrote {len(run_specs)} run file(s) + manifest to {out_dir}", file=sys.stderr)
    return manifest


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corpus-runner",
        description="LLM preprocessing + transformer fine-tuning grid over a raw corpus.",
    )
    parser.add_argument("--corpus", required=True, help="delimited corpus: sample_id,text,label")
    parser.add_argument("--out-dir", required=True, help="output directory for the run set")
    parser.add_argument("--seed", type=int, required=True, help="training seed (recorded per run)")
    parser.add_argument("--eval-fraction", type=float, default=0.2)
    parser.add_argument("--endpoint", default=None, help="LLM endpoint base URL (or env)")
    parser.add_argument("--llm-model", default="llama3", help="model name sent to the endpoint")
    parser.add_argument("--epochs", type=int, default=None, help="override training epochs")
    parser.add_argument("--max-length", type=int, default=None, help="override tokenizer max length")
    parser.add_argument(
        "--checkpoint",
        action="append",
        default=[],
        metavar="FAMILY=PATH_OR_NAME",
        help="override a family's checkpoint (repeatable)",
    )
    parser.add_argument(
        "--mode",
        action="append",
        default=[],
        choices=[mode.value for mode in PreprocessMode],
        help="restrict preprocessing modes (repeatable; default: all four)",
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    hp = Hyperparams()
    if args.epochs is not None:
        hp = replace(hp, epochs=args.epochs)
    if args.max_length is not None:
        hp = replace(hp, max_length=args.max_length)
    modes = tuple(PreprocessMode.from_flag(m) for m in args.mode) or ALL_MODES
    try:
        run_grid(
            corpus_path=args.corpus,
            out_dir=args.out_dir,
            seed=args.seed,
            eval_fraction=args.eval_fraction,
            endpoint=args.endpoint,
            model_name=args.llm_model,
            hp=hp,
            checkpoints=parse_checkpoint_overrides(args.checkpoint),
            modes=modes,
        )
    except RunnerError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
