from __future__ import annotations

import pytest

from corpus_runner.errors import EmptyResponse, EndpointError, RunnerError
from corpus_runner.preprocess import LlmClient, PreprocessMode, preprocess, prompt_template

POST = "patient reports typea symptom1 case note"


def client_for(endpoint, token=None):
    return LlmClient(endpoint=endpoint, model="fake", token=token)


def test_every_llm_mode_has_a_template_with_placeholder():
    for mode in (PreprocessMode.REFINE, PreprocessMode.SUMMARIZE, PreprocessMode.NER):
        template = prompt_template(mode)
        assert "{post}" in template


def test_mode_none_is_identity_without_endpoint():
    assert preprocess(POST, PreprocessMode.NONE, client=None) == POST


def test_refine_summarize_ner_transform(fake_endpoint):
    client = client_for(fake_endpoint)
    refined = preprocess(POST, PreprocessMode.REFINE, client)
    summarized = preprocess(POST, PreprocessMode.SUMMARIZE, client)
    entities = preprocess(POST, PreprocessMode.NER, client)
    assert refined.startswith("refined:")
    assert summarized.startswith("summary:")
    assert entities.startswith("entities:")
    assert len(summarized.split()) <= len(refined.split())
    assert entities == "entities: case note"


def test_empty_post_rejected(fake_endpoint):
    with pytest.raises(RunnerError):
        preprocess("   ", PreprocessMode.REFINE, client_for(fake_endpoint))


def test_empty_completion_raises(fake_endpoint):
    with pytest.raises(EmptyResponse):
        preprocess("EMPTYME please", PreprocessMode.REFINE, client_for(fake_endpoint))


def test_http_error_raises_endpoint_error(fake_endpoint):
    with pytest.raises(EndpointError):
        preprocess("FAILME now", PreprocessMode.REFINE, client_for(fake_endpoint))


def test_unreachable_endpoint_raises():
    client = LlmClient(endpoint="http://127.0.0.1:1", model="fake", timeout=0.5)
    with pytest.raises(EndpointError):
        preprocess(POST, PreprocessMode.REFINE, client)


def test_missing_endpoint_configuration(monkeypatch):
    monkeypatch.delenv("CORPUS_RUNNER_LLM_ENDPOINT", raising=False)
    with pytest.raises(EndpointError):
        LlmClient.from_env()


def test_token_forwarded_as_bearer(fake_llm, monkeypatch):
    server, endpoint = fake_llm
    monkeypatch.setenv("CORPUS_RUNNER_LLM_ENDPOINT", endpoint)
    monkeypatch.setenv("CORPUS_RUNNER_LLM_TOKEN", "sekret")
    client = LlmClient.from_env()
    preprocess(POST, PreprocessMode.NER, client)
    assert server.seen_auth[-1] == "Bearer sekret"


def test_llm_mode_requires_client():
    with pytest.raises(EndpointError):
        preprocess(POST, PreprocessMode.SUMMARIZE, client=None)
