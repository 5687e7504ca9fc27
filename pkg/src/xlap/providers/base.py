"""Provider bundle: the swappable external capabilities behind one facade.

The bundle owns caching, retries and the in-flight request gate so that
fixture and live implementations stay dumb: a translator only translates,
a dictionary only looks words up. Capability implementations may raise
ProviderError subclasses; everything else they return is data.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

from .cache import ResponseCache
from .errors import ProtocolError, retry_call

ROW_SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class AlignmentMatrix:
    """Token-by-token association probabilities, row-stochastic per source token."""

    src_tokens: tuple[str, ...]
    tgt_tokens: tuple[str, ...]
    probs: tuple[tuple[float, ...], ...]

    @classmethod
    def checked(
        cls,
        src_tokens: Sequence[str],
        tgt_tokens: Sequence[str],
        probs: Sequence[Sequence[float]],
    ) -> "AlignmentMatrix":
        """Build a matrix, raising ProtocolError on any invariant breach."""
        if not src_tokens or not tgt_tokens:
            raise ProtocolError("alignment matrix requires non-empty token lists")
        if len(probs) != len(src_tokens):
            raise ProtocolError(
                f"matrix has {len(probs)} rows for {len(src_tokens)} source tokens"
            )
        rows = []
        for i, row in enumerate(probs):
            if len(row) != len(tgt_tokens):
                raise ProtocolError(
                    f"matrix row {i} has {len(row)} columns for {len(tgt_tokens)} target tokens"
                )
            if any(p < 0.0 or p > 1.0 for p in row):
                raise ProtocolError(f"matrix row {i} has entries outside [0, 1]")
            total = sum(row)
            if abs(total - 1.0) > ROW_SUM_TOLERANCE:
                raise ProtocolError(f"matrix row {i} sums to {total}, not 1")
            rows.append(tuple(float(p) for p in row))
        return cls(tuple(src_tokens), tuple(tgt_tokens), tuple(rows))


class Translator(Protocol):
    def translate_sentence(self, text: str, variant: str) -> str: ...

    def translate_term(self, term: str, variant: str) -> str: ...


class DictionaryLookup(Protocol):
    def alternatives(self, term: str) -> list[str]: ...


class Lemmatizer(Protocol):
    def lemmatize(self, tokens: Sequence[str], language: str) -> list[str]: ...


class Thesaurus(Protocol):
    def synonyms(self, term: str, language: str) -> list[str]: ...


class EmbeddingAligner(Protocol):
    def matrix(self, src_tokens: Sequence[str], tgt_tokens: Sequence[str]) -> AlignmentMatrix: ...


def dedupe_case_insensitive(items: Sequence[str]) -> list[str]:
    """Drop later case-insensitive duplicates, keeping provider order."""
    seen: set[str] = set()
    out: list[str] = []
    for item in items:
        folded = item.casefold()
        if folded not in seen:
            seen.add(folded)
            out.append(item)
    return out


@dataclass
class ProviderBundle:
    """All external capabilities plus the keyed response cache.

    Safe for concurrent use: the cache serializes writers, and ``max_inflight``
    bounds simultaneous capability calls to respect vendor rate limits.
    """

    translator: Translator
    dictionary: DictionaryLookup
    lemmatizer: Lemmatizer
    thesaurus: Thesaurus
    aligner: EmbeddingAligner
    cache: ResponseCache
    language: str = "pt"
    max_inflight: int = 4
    retry_attempts: int = 3
    retry_base_delay: float = 0.25
    sleep: Callable[[float], None] = time.sleep
    _gate: threading.Semaphore = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._gate = threading.Semaphore(self.max_inflight)

    def _cached_call(self, namespace: str, key: str, fn: Callable[[], dict]) -> dict:
        cached = self.cache.get(namespace, key)
        if cached is not None:
            return cached
        with self._gate:
            value = retry_call(
                fn,
                attempts=self.retry_attempts,
                base_delay=self.retry_base_delay,
                sleep=self.sleep,
            )
        self.cache.put(namespace, key, value)
        return value

    def translate_sentence(self, text: str, variant: str) -> str:
        if not text:
            raise ValueError("cannot translate empty text")
        key = json.dumps([variant, text], ensure_ascii=False)
        value = self._cached_call(
            "sentence",
            key,
            lambda: {"text": self.translator.translate_sentence(text, variant)},
        )
        return value["text"]

    def translate_term(self, term: str, variant: str) -> str:
        if not term:
            raise ValueError("cannot translate empty term")
        key = json.dumps([variant, term], ensure_ascii=False)
        value = self._cached_call(
            "term",
            key,
            lambda: {"text": self.translator.translate_term(term, variant)},
        )
        return value["text"]

    def lookup_alternatives(self, term: str) -> list[str]:
        if not term:
            raise ValueError("cannot look up empty term")
        key = json.dumps([term], ensure_ascii=False)
        value = self._cached_call(
            "alternatives",
            key,
            lambda: {"alternatives": self.dictionary.alternatives(term)},
        )
        return dedupe_case_insensitive(value["alternatives"])

    def lemmatize(self, tokens: Sequence[str]) -> list[str]:
        lemmas = self.lemmatizer.lemmatize(tokens, self.language)
        if len(lemmas) != len(tokens):
            raise ProtocolError("lemmatizer changed token count")
        return lemmas

    def synonyms(self, term: str) -> list[str]:
        raw = self.thesaurus.synonyms(term, self.language)
        folded = term.casefold()
        return [syn for syn in dedupe_case_insensitive(raw) if syn.casefold() != folded]

    def alignment_matrix(
        self, src_tokens: Sequence[str], tgt_tokens: Sequence[str]
    ) -> AlignmentMatrix:
        if not src_tokens or not tgt_tokens:
            raise ValueError("alignment requires non-empty token lists")
        key = json.dumps([list(src_tokens), list(tgt_tokens)], ensure_ascii=False)
        value = self._cached_call(
            "matrix",
            key,
            lambda: {"probs": [list(row) for row in self.aligner.matrix(src_tokens, tgt_tokens).probs]},
        )
        return AlignmentMatrix.checked(src_tokens, tgt_tokens, value["probs"])
