"""Pluggable language-model provider: request/response types, transcripts, selection.

Every request/response pair is appended to the run's transcript store before the
response is handed to the caller, so any analysis can be replayed or audited later.
Providers are selected via configuration or the environment variables
EQUISCOPE_PROVIDER (mock|http), EQUISCOPE_PROVIDER_URL and EQUISCOPE_PROVIDER_KEY.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Protocol, Sequence

from ..canonical import canonical_json
from ..errors import ProviderError

DATA_BLOCK_OPEN = "```json"
DATA_BLOCK_CLOSE = "```"


@dataclass(frozen=True)
class ProviderRequest:
    kind: str
    segments: tuple[tuple[str, str], ...]
    temperature: float = 0.0
    max_tokens: int = 2048

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "segments": [[role, text] for role, text in self.segments],
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }

    def data_block(self) -> str | None:
        """The last fenced JSON data block embedded in the prompt, if any."""
        for _, text in reversed(self.segments):
            start = text.rfind(DATA_BLOCK_OPEN)
            if start == -1:
                continue
            start += len(DATA_BLOCK_OPEN)
            end = text.find(DATA_BLOCK_CLOSE, start)
            if end != -1:
                return text[start:end].strip()
        return None


@dataclass
class ProviderResponse:
    text: str
    provider_id: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    wall_time: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "text": self.text,
            "provider_id": self.provider_id,
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
            "wall_time": self.wall_time,
        }


@dataclass
class EmbeddingVector:
    values: list[float]

    @property
    def dimension(self) -> int:
        return len(self.values)


class Provider(Protocol):
    id: str

    def send(self, request: ProviderRequest) -> ProviderResponse: ...

    def embed(self, texts: Sequence[str]) -> list[EmbeddingVector]: ...


def build_request(kind: str, system_text: str, instruction: str, data: dict[str, Any],
                  max_tokens: int = 2048) -> ProviderRequest:
    """Render the canonical two-segment prompt with an embedded JSON data block."""
    user = f"{instruction}\n\n{DATA_BLOCK_OPEN}\n{canonical_json(data)}\n{DATA_BLOCK_CLOSE}"
    return ProviderRequest(kind=kind, segments=(("system", system_text), ("user", user)),
                           temperature=0.0, max_tokens=max_tokens)


def get_provider(name: str | None = None, seed: int = 0, env: dict[str, str] | None = None):
    """Instantiate a provider by name; falls back to EQUISCOPE_PROVIDER, then mock."""
    from .http import HttpProvider
    from .mock import MockProvider

    env = env if env is not None else dict(os.environ)
    name = name or env.get("EQUISCOPE_PROVIDER", "mock")
    if name == "mock":
        return MockProvider(seed=seed)
    if name == "http":
        url = env.get("EQUISCOPE_PROVIDER_URL")
        if not url:
            raise ProviderError("EQUISCOPE_PROVIDER_URL is required for the http provider")
        return HttpProvider(url=url, api_key=env.get("EQUISCOPE_PROVIDER_KEY"))
    raise ProviderError(f"unknown provider: {name!r}")


__all__ = [
    "EmbeddingVector",
    "Provider",
    "ProviderRequest",
    "ProviderResponse",
    "build_request",
    "get_provider",
]
