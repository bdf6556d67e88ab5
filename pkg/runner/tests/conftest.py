from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import random

import pytest
import torch
import transformers
from tokenizers import Tokenizer, models, normalizers, pre_tokenizers, processors
from transformers import BertConfig, BertForSequenceClassification, PreTrainedTokenizerFast

from corpus_runner.corpus import CorpusExample

transformers.logging.set_verbosity_error()
transformers.logging.disable_progress_bar()

SEVEN_LABELS = ("typea", "typeb", "typec", "typed", "typee", "typef", "typeg")


# --- fake chat-completions endpoint -------------------------------------------


def _fake_transform(prompt: str) -> str:
    """Deterministic stand-in for the preprocessing model."""
    post = prompt.rsplit("Post:\n", 1)[-1].strip()
    if "EMPTYME" in post:
        return ""
    words = post.split()
    if "clean up" in prompt:
        return "refined: " + " ".join(words)
    if "summarize" in prompt.lower():
        return "summary: " + " ".join(words[:5])
    if "extract medical entities" in prompt:
        return "entities: " + " ".join(words[-2:])
    return post


class _Handler(BaseHTTPRequestHandler):
    server_version = "FakeLLM/1.0"

    def do_POST(self):  # noqa: N802 (http.server API)
        length = int(self.headers.get("Content-Length", "0"))
        body = json.loads(self.rfile.read(length).decode("utf-8"))
        prompt = body["messages"][-1]["content"]
        self.server.seen_auth.append(self.headers.get("Authorization"))
        if "FAILME" in prompt:
            self.send_response(500)
            self.end_headers()
            self.wfile.write(b"boom")
            return
        payload = {"choices": [{"message": {"role": "assistant", "content": _fake_transform(prompt)}}]}
        data = json.dumps(payload).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):  # keep test output quiet
        pass


@pytest.fixture(scope="session")
def fake_llm():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    server.seen_auth = []
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield server, f"http://127.0.0.1:{server.server_address[1]}"
    finally:
        server.shutdown()
        thread.join()


@pytest.fixture
def fake_endpoint(fake_llm):
    return fake_llm[1]


# --- tiny offline checkpoints ---------------------------------------------------


def _vocab_words() -> list[str]:
    words = list(SEVEN_LABELS)
    words += [f"symptom{i}" for i in range(30)]
    words += ["patient", "reports", "refined:", "summary:", "entities:", "case", "note"]
    return words


def make_tiny_checkpoint(directory: Path, seed: int) -> str:
    """A saved base model + word-level tokenizer that loads fully offline.

    Like the real checkpoints, the shipped base model is pretrained: it gets a
    short warm-up on texts drawn from its own vocabulary (through a throwaway
    classification head that is NOT saved), so downstream fine-tuning starts
    from useful representations instead of noise.
    """
    directory.mkdir(parents=True, exist_ok=True)
    words = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + _vocab_words()
    vocab = {word: i for i, word in enumerate(words)}
    wordpiece = Tokenizer(models.WordPiece(vocab, unk_token="[UNK]"))
    wordpiece.normalizer = normalizers.BertNormalizer(lowercase=True)
    wordpiece.pre_tokenizer = pre_tokenizers.BertPreTokenizer()
    wordpiece.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=wordpiece,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )
    tokenizer.save_pretrained(directory)

    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(words),
        hidden_size=64,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=128,
        max_position_embeddings=512,
        num_labels=len(SEVEN_LABELS),
    )
    warm = BertForSequenceClassification(config)
    rng = random.Random(seed)
    optimizer = torch.optim.AdamW(warm.parameters(), lr=2e-3)
    warm.train()
    for _ in range(600):
        texts, labels = [], []
        for _ in range(16):
            c = rng.randrange(len(SEVEN_LABELS))
            tokens = ["patient", "reports", SEVEN_LABELS[c], f"symptom{rng.randrange(30)}", "case", "note"]
            rng.shuffle(tokens)
            texts.append(" ".join(tokens))
            labels.append(c)
        encoded = tokenizer(texts, padding=True, return_tensors="pt")
        out = warm(**encoded, labels=torch.tensor(labels))
        optimizer.zero_grad()
        out.loss.backward()
        optimizer.step()
        if out.loss.item() < 0.01:
            break

    warm.eval()
    warm.bert.config.initializer_range = 0.002  # freshly added heads start quiet
    warm.bert.save_pretrained(directory)
    return str(directory)


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    return make_tiny_checkpoint(tmp_path_factory.mktemp("ckpt") / "tiny", seed=0)


@pytest.fixture(scope="session")
def tiny_checkpoints(tmp_path_factory):
    base = tmp_path_factory.mktemp("ckpts")
    return {
        family: make_tiny_checkpoint(base / family, seed=i)
        for i, family in enumerate(("camelbert", "arabert", "asafayabert"))
    }


# --- synthetic corpus ------------------------------------------------------------


def synthetic_corpus(n: int = 20, class_count: int = 7) -> list[CorpusExample]:
    """Trivially separable texts: each class has its own marker token."""
    labels = SEVEN_LABELS[:class_count]
    examples = []
    for i in range(n):
        label = labels[i % class_count]
        text = f"patient reports {label} symptom{i} case note"
        examples.append(CorpusExample(sample_id=f"q{i:03d}", text=text, label=label))
    return examples


def write_corpus_csv(path: Path, examples: list[CorpusExample]) -> Path:
    lines = ["sample_id,text,label"]
    lines += [f"{e.sample_id},{e.text},{e.label}" for e in examples]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
