"""Transformer fine-tuning over paired texts, one classifier per checkpoint.

Each model gets a dropout layer plus a linear classification head and is
trained with cross-entropy under one shared hyperparameter configuration so
runs stay comparable. The training seed is mandatory and travels with the
model handle into the emitted run file.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

import numpy as np
import torch
from torch.utils.data import DataLoader
from transformers import AutoConfig, AutoModelForSequenceClassification, AutoTokenizer

from .errors import CheckpointUnavailable, RunnerError, TrainingDiverged
from .pairs import PairedExample

CHECKPOINTS: dict[str, str] = {
    "camelbert": "CAMeL-Lab/bert-base-arabic-camelbert-mix",
    "arabert": "aubmindlab/bert-base-arabert",
    "asafayabert": "asafaya/bert-base-arabic",
}


@dataclass(frozen=True)
class Hyperparams:
    """Shared fine-tuning configuration; override fields only deliberately."""

    dropout: float = 0.05
    learning_rate: float = 1e-4
    batch_size: int = 4
    epochs: int = 25
    weight_decay: float = 0.01
    num_labels: int = 7
    max_length: int = 256

    def with_labels(self, count: int) -> "Hyperparams":
        return replace(self, num_labels=count)


@dataclass(frozen=True)
class Prediction:
    sample_id: str
    label: str
    probabilities: tuple[float, ...]


@dataclass
class TrainedModel:
    model: torch.nn.Module
    tokenizer: object
    label_names: tuple[str, ...]
    checkpoint: str
    seed: int
    hyperparams: Hyperparams


def family_for_checkpoint(checkpoint: str) -> str:
    lowered = checkpoint.lower()
    for family, name in CHECKPOINTS.items():
        if checkpoint == name or family in lowered:
            return family
    return "other"


def _seed_everything(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)


def _load_checkpoint(checkpoint: str, label_names: tuple[str, ...], hp: Hyperparams):
    try:
        tokenizer = AutoTokenizer.from_pretrained(checkpoint)
        config = AutoConfig.from_pretrained(
            checkpoint,
            num_labels=len(label_names),
            classifier_dropout=hp.dropout,
            problem_type="single_label_classification",
            id2label={i: name for i, name in enumerate(label_names)},
            label2id={name: i for i, name in enumerate(label_names)},
        )
        model = AutoModelForSequenceClassification.from_pretrained(checkpoint, config=config)
    except Exception as exc:  # transformers raises a zoo of types here
        raise CheckpointUnavailable(checkpoint, str(exc)) from exc
    return tokenizer, model


def _encode(tokenizer, texts: list[str], hp: Hyperparams):
    return tokenizer(
        texts,
        padding=True,
        truncation=True,
        max_length=hp.max_length,
        return_tensors="pt",
    )


def finetune(
    checkpoint: str,
    pairs: list[PairedExample],
    label_names: tuple[str, ...],
    hp: Hyperparams,
    seed: int,
) -> TrainedModel:
    """Fine-tune one checkpoint on paired texts; epochs=0 keeps the fresh head."""
    if not pairs:
        raise RunnerError("cannot fine-tune on an empty pair list")
    label_to_index = {name: i for i, name in enumerate(label_names)}
    for pair in pairs:
        if pair.label not in label_to_index:
            raise RunnerError(f"label {pair.label!r} of sample {pair.sample_id!r} not in label set")

    _seed_everything(seed)
    tokenizer, model = _load_checkpoint(checkpoint, label_names, hp)
    model.train()

    if hp.epochs > 0:
        optimizer = torch.optim.AdamW(
            model.parameters(), lr=hp.learning_rate, weight_decay=hp.weight_decay
        )
        generator = torch.Generator().manual_seed(seed)
        loader = DataLoader(
            list(range(len(pairs))),
            batch_size=hp.batch_size,
            shuffle=True,
            generator=generator,
        )
        for epoch in range(hp.epochs):
            for batch_indices in loader:
                batch = [pairs[i] for i in batch_indices.tolist()]
                encoded = _encode(tokenizer, [p.paired for p in batch], hp)
                labels = torch.tensor([label_to_index[p.label] for p in batch])
                optimizer.zero_grad()
                output = model(**encoded, labels=labels)  # cross-entropy loss
                loss = output.loss
                if not math.isfinite(loss.item()):
                    raise TrainingDiverged(epoch, loss.item())
                loss.backward()
                optimizer.step()

    model.eval()
    return TrainedModel(
        model=model,
        tokenizer=tokenizer,
        label_names=tuple(label_names),
        checkpoint=checkpoint,
        seed=seed,
        hyperparams=hp,
    )


def predict(handle: TrainedModel, pairs: list[PairedExample], batch_size: int = 16) -> list[Prediction]:
    """Hard label plus softmax probabilities per paired example."""
    handle.model.eval()
    out: list[Prediction] = []
    with torch.no_grad():
        for start in range(0, len(pairs), batch_size):
            batch = pairs[start : start + batch_size]
            encoded = _encode(handle.tokenizer, [p.paired for p in batch], handle.hyperparams)
            logits = handle.model(**encoded).logits
            probs = torch.softmax(logits, dim=-1)
            hard = probs.argmax(dim=-1)
            for pair, row, label_index in zip(batch, probs, hard):
                out.append(
                    Prediction(
                        sample_id=pair.sample_id,
                        label=handle.label_names[int(label_index)],
                        probabilities=tuple(float(p) for p in row),
                    )
                )
    return out


def training_accuracy(handle: TrainedModel, pairs: list[PairedExample]) -> float:
    predictions = predict(handle, pairs)
    hits = sum(1 for pair, pred in zip(pairs, predictions) if pred.label == pair.label)
    return hits / len(pairs)
