"""HTTP provider speaking a minimal JSON protocol.

POST {url}/complete   {"kind", "segments", "temperature", "max_tokens"} -> {"text", ...}
POST {url}/embed      {"texts": [...]}                                  -> {"vectors": [[...]]}

One retry on transport or schema errors, then the failure propagates as
ProviderError so callers can degrade per their contracts.
"""

from __future__ import annotations

import time
from typing import Sequence

import httpx

from ..errors import ProviderError
from . import EmbeddingVector, ProviderRequest, ProviderResponse

RETRIES = 1


class HttpProvider:
    def __init__(self, url: str, api_key: str | None = None, timeout: float = 60.0,
                 client: httpx.Client | None = None):
        self.url = url.rstrip("/")
        self.id = f"http:{self.url}"
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self._client = client or httpx.Client(timeout=timeout, headers=headers)

    def _post(self, path: str, payload: dict) -> dict:
        last_error: Exception | None = None
        for _ in range(RETRIES + 1):
            try:
                response = self._client.post(f"{self.url}{path}", json=payload)
                response.raise_for_status()
                return response.json()
            except (httpx.HTTPError, ValueError) as exc:
                last_error = exc
        raise ProviderError(f"provider call {path} failed: {last_error}")

    def send(self, request: ProviderRequest) -> ProviderResponse:
        started = time.monotonic()
        body = self._post("/complete", request.to_dict())
        try:
            return ProviderResponse(
                text=str(body["text"]),
                provider_id=str(body.get("provider_id", self.id)),
                prompt_tokens=int(body.get("prompt_tokens", 0)),
                completion_tokens=int(body.get("completion_tokens", 0)),
                wall_time=time.monotonic() - started,
            )
        except (KeyError, TypeError) as exc:
            raise ProviderError(f"malformed completion payload: {exc}") from exc

    def embed(self, texts: Sequence[str]) -> list[EmbeddingVector]:
        body = self._post("/embed", {"texts": list(texts)})
        try:
            return [EmbeddingVector(values=[float(x) for x in vec]) for vec in body["vectors"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ProviderError(f"malformed embedding payload: {exc}") from exc
