"""Append-only transcript store and replay support for provider interactions."""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path
from typing import Sequence

from ..canonical import canonical_json
from ..errors import ProviderError
from . import EmbeddingVector, Provider, ProviderRequest, ProviderResponse


def request_key(request_dict: dict) -> str:
    return hashlib.sha256(canonical_json(request_dict).encode("utf-8")).hexdigest()


class TranscriptStore:
    """One JSONL file per run; appends are serialized so concurrent calls stay whole."""

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._seq = 0

    def record(self, request_dict: dict, response_dict: dict) -> None:
        entry = {
            "seq": self._seq,
            "key": request_key(request_dict),
            "request": request_dict,
            "response": response_dict,
        }
        line = json.dumps(entry, sort_keys=True, ensure_ascii=False)
        with self._lock:
            entry["seq"] = self._seq
            self._seq += 1
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def count(self) -> int:
        return self._seq


class RecordingProvider:
    """Wraps a provider so every interaction is persisted before its result is used."""

    def __init__(self, inner: Provider, store: TranscriptStore):
        self.inner = inner
        self.store = store
        self.id = inner.id

    def send(self, request: ProviderRequest) -> ProviderResponse:
        response = self.inner.send(request)
        self.store.record(request.to_dict(), response.to_dict())
        return response

    def embed(self, texts: Sequence[str]) -> list[EmbeddingVector]:
        vectors = self.inner.embed(texts)
        self.store.record(
            {"kind": "embed", "texts": list(texts)},
            {"vectors": [v.values for v in vectors], "provider_id": self.id},
        )
        return vectors


class ReplayProvider:
    """Serves recorded responses keyed by request content; any unseen request fails."""

    id = "replay"

    def __init__(self, transcript_path: Path | str):
        self._by_key: dict[str, dict] = {}
        with open(transcript_path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                entry = json.loads(line)
                self._by_key[entry["key"]] = entry["response"]

    def send(self, request: ProviderRequest) -> ProviderResponse:
        key = request_key(request.to_dict())
        hit = self._by_key.get(key)
        if hit is None:
            raise ProviderError("request not present in transcript; cannot replay")
        return ProviderResponse(
            text=hit["text"],
            provider_id=hit.get("provider_id", "replay"),
            prompt_tokens=hit.get("prompt_tokens", 0),
            completion_tokens=hit.get("completion_tokens", 0),
            wall_time=hit.get("wall_time", 0.0),
        )

    def embed(self, texts: Sequence[str]) -> list[EmbeddingVector]:
        key = request_key({"kind": "embed", "texts": list(texts)})
        hit = self._by_key.get(key)
        if hit is None:
            raise ProviderError("embedding request not present in transcript; cannot replay")
        return [EmbeddingVector(values=list(v)) for v in hit["vectors"]]
