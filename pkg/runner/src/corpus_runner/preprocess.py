"""LLM preprocessing: refine, summarize, or extract entities from a post.

Prompt templates live in `prompts/v1/` as versioned files with a `{post}`
placeholder. The endpoint is OpenAI-style chat completions (as served by
llama.cpp, vllm, ollama, ...); the URL and bearer token come from
`CORPUS_RUNNER_LLM_ENDPOINT` / `CORPUS_RUNNER_LLM_TOKEN` unless passed
explicitly.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from importlib import resources

import requests

from .corpus import CorpusExample
from .errors import EmptyResponse, EndpointError, RunnerError

ENDPOINT_ENV = "CORPUS_RUNNER_LLM_ENDPOINT"
TOKEN_ENV = "CORPUS_RUNNER_LLM_TOKEN"
PROMPT_VERSION = "v1"


class PreprocessMode(enum.Enum):
    NONE = "none"
    REFINE = "refine"
    SUMMARIZE = "summarize"
    NER = "ner"

    @property
    def representation(self) -> str:
        """Tag used in run files and manifests."""
        return {
            PreprocessMode.NONE: "post",
            PreprocessMode.REFINE: "refined",
            PreprocessMode.SUMMARIZE: "summarized",
            PreprocessMode.NER: "ner",
        }[self]

    @classmethod
    def from_flag(cls, value: str) -> "PreprocessMode":
        for mode in cls:
            if mode.value == value:
                return mode
        raise RunnerError(f"unknown preprocess mode {value!r}")


def prompt_template(mode: PreprocessMode) -> str:
    if mode is PreprocessMode.NONE:
        raise RunnerError("mode 'none' has no prompt template")
    path = resources.files("corpus_runner") / "prompts" / PROMPT_VERSION / f"{mode.value}.txt"
    return path.read_text(encoding="utf-8")


@dataclass
class LlmClient:
    """Minimal chat-completions client."""

    endpoint: str
    model: str = "llama3"
    token: str | None = None
    timeout: float = 120.0

    @classmethod
    def from_env(cls, endpoint: str | None = None, model: str = "llama3") -> "LlmClient":
        url = endpoint or os.environ.get(ENDPOINT_ENV)
        if not url:
            raise EndpointError(f"no endpoint configured (flag or {ENDPOINT_ENV})")
        return cls(endpoint=url, model=model, token=os.environ.get(TOKEN_ENV))

    def complete(self, prompt: str) -> str:
        headers = {"Content-Type": "application/json"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        try:
            response = requests.post(
                self.endpoint.rstrip("/") + "/chat/completions",
                json=body,
                headers=headers,
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise EndpointError(str(exc)) from exc
        if response.status_code != 200:
            raise EndpointError(f"HTTP {response.status_code}: {response.text[:200]}")
        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError) as exc:
            raise EndpointError(f"malformed completion payload: {exc}") from exc
        return content


def preprocess(post: str, mode: PreprocessMode, client: LlmClient | None) -> str:
    """One post through one preprocessing mode; mode 'none' is the identity."""
    if not post.strip():
        raise RunnerError("cannot preprocess an empty post")
    if mode is PreprocessMode.NONE:
        return post
    if client is None:
        raise EndpointError(f"mode {mode.value!r} needs an LLM endpoint")
    variant = client.complete(prompt_template(mode).format(post=post)).strip()
    if not variant:
        raise EmptyResponse()
    return variant


def preprocess_all(
    examples: list[CorpusExample], mode: PreprocessMode, client: LlmClient | None
) -> dict[str, str]:
    """Variant text per sample_id, in corpus order."""
    variants: dict[str, str] = {}
    for example in examples:
        try:
            variants[example.sample_id] = preprocess(example.text, mode, client)
        except EmptyResponse:
            raise EmptyResponse(example.sample_id) from None
    return variants
