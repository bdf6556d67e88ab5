"""Prediction-run production: LLM preprocessing, paired texts, fine-tuning, emission."""

from .corpus import CorpusExample, label_names, load_corpus, split_corpus
from .emit import RunFileSpec, predict_and_emit, write_manifest, write_run_file, write_truth
from .pairs import SEPARATOR, PairedExample, build_pairs
from .preprocess import LlmClient, PreprocessMode, preprocess, preprocess_all, prompt_template
from .training import (
    CHECKPOINTS,
    Hyperparams,
    Prediction,
    TrainedModel,
    family_for_checkpoint,
    finetune,
    predict,
    training_accuracy,
)

__version__ = "0.1.0"

__all__ = [
    "CHECKPOINTS",
    "CorpusExample",
    "Hyperparams",
    "LlmClient",
    "PairedExample",
    "Prediction",
    "PreprocessMode",
    "RunFileSpec",
    "SEPARATOR",
    "TrainedModel",
    "build_pairs",
    "family_for_checkpoint",
    "finetune",
    "label_names",
    "load_corpus",
    "predict",
    "predict_and_emit",
    "preprocess",
    "preprocess_all",
    "prompt_template",
    "split_corpus",
    "training_accuracy",
    "write_manifest",
    "write_run_file",
    "write_truth",
]
