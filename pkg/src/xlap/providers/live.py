"""HTTP-backed provider implementations.

Vendor-neutral JSON gateways: the variant is a request parameter and the
endpoint plus credentials are configuration, so swapping vendors is a
config change, not a code change. All clients accept an injectable
``session`` (anything with a requests-style ``.request``) which is how
tests instrument the transport.

Environment:
  XLAP_TRANSLATOR_KEY / XLAP_TRANSLATOR_URL   sentence and term translation
  XLAP_DICT_KEY / XLAP_DICT_URL               alternative-translation lookup
  XLAP_ALIGNER_URL                            embedding word-aligner service
"""

from __future__ import annotations

import os
from typing import Sequence

import requests

from .base import AlignmentMatrix
from .errors import (
    AuthError,
    ProtocolError,
    ProviderUnavailableError,
    RateLimitError,
)

_VARIANT_TAGS = {"european": "pt-PT", "brazilian": "pt-BR"}
DEFAULT_TIMEOUT = 30.0


def _request_json(session, method: str, url: str, *, headers=None, payload=None) -> dict:
    try:
        response = session.request(
            method, url, headers=headers or {}, json=payload, timeout=DEFAULT_TIMEOUT
        )
    except requests.RequestException as err:
        raise ProviderUnavailableError(f"{url}: {err}") from err
    if response.status_code in (401, 403):
        raise AuthError(f"{url}: authentication rejected ({response.status_code})")
    if response.status_code == 429:
        raise RateLimitError(f"{url}: rate limited")
    if response.status_code >= 500:
        raise ProviderUnavailableError(f"{url}: server error {response.status_code}")
    if response.status_code >= 400:
        raise ProtocolError(f"{url}: rejected request ({response.status_code})")
    try:
        body = response.json()
    except ValueError as err:
        raise ProtocolError(f"{url}: non-JSON response") from err
    if not isinstance(body, dict):
        raise ProtocolError(f"{url}: expected a JSON object")
    return body


def _variant_tag(variant: str) -> str:
    try:
        return _VARIANT_TAGS[variant]
    except KeyError:
        raise ValueError(f"unknown variant {variant!r}") from None


class LiveTranslator:
    def __init__(self, base_url: str, api_key: str, session=None):
        if not api_key:
            raise AuthError("translator API key is empty")
        self.base_url = base_url.rstrip("/")
        self._headers = {"Authorization": f"Bearer {api_key}"}
        self.session = session or requests.Session()

    def _translate(self, text: str, variant: str, kind: str) -> str:
        body = _request_json(
            self.session,
            "POST",
            f"{self.base_url}/translate",
            headers=self._headers,
            payload={"text": text, "target": _variant_tag(variant), "kind": kind},
        )
        if "translation" not in body or not isinstance(body["translation"], str):
            raise ProtocolError("translator response missing 'translation'")
        return body["translation"]

    def translate_sentence(self, text: str, variant: str) -> str:
        return self._translate(text, variant, "sentence")

    def translate_term(self, term: str, variant: str) -> str:
        return self._translate(term, variant, "term")


class LiveDictionary:
    def __init__(self, base_url: str, api_key: str, session=None):
        if not api_key:
            raise AuthError("dictionary API key is empty")
        self.base_url = base_url.rstrip("/")
        self._headers = {"Authorization": f"Bearer {api_key}"}
        self.session = session or requests.Session()

    def alternatives(self, term: str) -> list[str]:
        body = _request_json(
            self.session,
            "POST",
            f"{self.base_url}/lookup",
            headers=self._headers,
            payload={"term": term},
        )
        alts = body.get("alternatives")
        if not isinstance(alts, list) or any(not isinstance(a, str) for a in alts):
            raise ProtocolError("dictionary response missing 'alternatives' list")
        return alts


class EmbedAlignerClient:
    """Client for the embedding word-aligner service (see XLAP_ALIGNER_URL)."""

    def __init__(self, base_url: str, session=None):
        self.base_url = base_url.rstrip("/")
        self.session = session or requests.Session()

    def health(self) -> dict:
        return _request_json(self.session, "GET", f"{self.base_url}/health")

    def matrix(self, src_tokens: Sequence[str], tgt_tokens: Sequence[str]) -> AlignmentMatrix:
        body = _request_json(
            self.session,
            "POST",
            f"{self.base_url}/align",
            payload={"src_tokens": list(src_tokens), "tgt_tokens": list(tgt_tokens)},
        )
        probs = body.get("probs")
        if not isinstance(probs, list):
            raise ProtocolError("aligner response missing 'probs'")
        return AlignmentMatrix.checked(src_tokens, tgt_tokens, probs)


def require_env(name: str) -> str:
    value = os.environ.get(name, "")
    if not value:
        raise AuthError(f"environment variable {name} is required for live providers")
    return value
