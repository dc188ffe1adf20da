"""JSON-over-HTTP provider clients.

Generation request: ``{model, messages: [{role, content}], stream}`` with
response ``{content}``, or an SSE stream of ``{delta}`` events terminated
by ``[DONE]``. Embedding request: ``{model, input: [string]}`` with
response ``{vectors: [[real]]}``.
"""

from __future__ import annotations

import json
import os
from typing import Iterator

import httpx

from ragtrace.errors import EmbedderUnavailable, LlmUnavailable, ProviderTimeout

DEFAULT_TIMEOUT = 60.0


def _headers(api_key_env: str | None) -> dict[str, str]:
    headers = {"Content-Type": "application/json"}
    if api_key_env:
        key = os.environ.get(api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
    return headers


class HttpGenerationProvider:
    def __init__(self, base_url: str, model: str, api_key_env: str | None = None,
                 timeout: float = DEFAULT_TIMEOUT, client: httpx.Client | None = None):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.timeout = timeout
        self._client = client or httpx.Client(timeout=timeout)
        self._headers = _headers(api_key_env)

    def complete(self, messages: list[dict]) -> str:
        payload = {"model": self.model, "messages": messages, "stream": False}
        try:
            response = self._client.post(self.base_url, json=payload, headers=self._headers)
            response.raise_for_status()
            return response.json()["content"]
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(str(exc)) from exc
        except (httpx.HTTPError, KeyError, ValueError) as exc:
            raise LlmUnavailable(str(exc)) from exc

    def stream(self, messages: list[dict]) -> Iterator[str]:
        payload = {"model": self.model, "messages": messages, "stream": True}
        try:
            with self._client.stream("POST", self.base_url, json=payload,
                                     headers=self._headers) as response:
                response.raise_for_status()
                for line in response.iter_lines():
                    if not line.startswith("data:"):
                        continue
                    data = line[len("data:"):].strip()
                    if data == "[DONE]":
                        break
                    delta = json.loads(data).get("delta", "")
                    if delta:
                        yield delta
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(str(exc)) from exc
        except (httpx.HTTPError, ValueError) as exc:
            raise LlmUnavailable(str(exc)) from exc


class HttpEmbeddingProvider:
    def __init__(self, base_url: str, model: str, api_key_env: str | None = None,
                 timeout: float = DEFAULT_TIMEOUT, client: httpx.Client | None = None):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self._client = client or httpx.Client(timeout=timeout)
        self._headers = _headers(api_key_env)

    def embed(self, texts: list[str]) -> list[list[float]]:
        payload = {"model": self.model, "input": list(texts)}
        try:
            response = self._client.post(self.base_url, json=payload, headers=self._headers)
            response.raise_for_status()
            return response.json()["vectors"]
        except httpx.TimeoutException as exc:
            raise EmbedderUnavailable(str(exc)) from exc
        except (httpx.HTTPError, KeyError, ValueError) as exc:
            raise EmbedderUnavailable(str(exc)) from exc
