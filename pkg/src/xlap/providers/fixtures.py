"""Deterministic file-backed provider implementations.

Every fixture is a pure lookup table: same input, same output, no network.
A request missing from a table raises FixtureMissError rather than falling
through, so tests can never silently depend on a live service.

File formats (all UTF-8):
  translations.json   {"sentences": {variant: {source: target}},
                       "terms":     {variant: {source: target}}}
  alternatives.json   {term: [alternative, ...]}  (provider order preserved)
  lemmas.<lang>.tsv   one "surface<TAB>lemma" pair per line
  thesaurus.<lang>.txt  "headword: synonym, synonym, ..." per line
  matrices.json       [{"src_tokens": [...], "tgt_tokens": [...],
                        "probs": [[...], ...]}, ...]
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from .base import AlignmentMatrix, ProviderBundle
from .cache import ResponseCache
from .errors import FixtureMissError


class FixtureTranslator:
    def __init__(self, path: str | Path):
        with open(path, encoding="utf-8") as handle:
            table = json.load(handle)
        self._sentences: dict = table.get("sentences", {})
        self._terms: dict = table.get("terms", {})
        self.sentence_calls = 0
        self.term_calls = 0

    def translate_sentence(self, text: str, variant: str) -> str:
        self.sentence_calls += 1
        try:
            return self._sentences[variant][text]
        except KeyError:
            raise FixtureMissError(f"no {variant} fixture translation for sentence {text!r}") from None

    def translate_term(self, term: str, variant: str) -> str:
        self.term_calls += 1
        try:
            return self._terms[variant][term]
        except KeyError:
            raise FixtureMissError(f"no {variant} fixture translation for term {term!r}") from None


class FixtureDictionary:
    def __init__(self, path: str | Path):
        with open(path, encoding="utf-8") as handle:
            table = json.load(handle)
        self._table: dict[str, list[str]] = table
        self._folded = {key.casefold(): value for key, value in table.items()}

    def alternatives(self, term: str) -> list[str]:
        if term in self._table:
            return list(self._table[term])
        return list(self._folded.get(term.casefold(), []))


class FileLemmatizer:
    """Lemma table lookup; unknown words fall back to their lowercase surface,
    which makes lemma matching case-insensitive for free."""

    def __init__(self, paths: dict[str, str | Path]):
        self._tables: dict[str, dict[str, str]] = {}
        for language, path in paths.items():
            table: dict[str, str] = {}
            with open(path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.rstrip("\n")
                    if not line or line.startswith("#"):
                        continue
                    surface, lemma = line.split("\t")
                    table[surface.lower()] = lemma
            self._tables[language] = table

    def lemmatize(self, tokens: Sequence[str], language: str) -> list[str]:
        table = self._tables.get(language, {})
        return [table.get(token.lower(), token.lower()) for token in tokens]


class FileThesaurus:
    def __init__(self, paths: dict[str, str | Path]):
        self._tables: dict[str, dict[str, list[str]]] = {}
        for language, path in paths.items():
            table: dict[str, list[str]] = {}
            with open(path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    head, _, rest = line.partition(":")
                    table[head.strip().lower()] = [
                        syn.strip() for syn in rest.split(",") if syn.strip()
                    ]
            self._tables[language] = table

    def synonyms(self, term: str, language: str) -> list[str]:
        table = self._tables.get(language, {})
        return list(table.get(term.lower(), []))


class FixtureAligner:
    def __init__(self, path: str | Path):
        with open(path, encoding="utf-8") as handle:
            entries = json.load(handle)
        self._table: dict[tuple[tuple[str, ...], tuple[str, ...]], list[list[float]]] = {}
        for entry in entries:
            key = (tuple(entry["src_tokens"]), tuple(entry["tgt_tokens"]))
            self._table[key] = entry["probs"]

    def matrix(self, src_tokens: Sequence[str], tgt_tokens: Sequence[str]) -> AlignmentMatrix:
        key = (tuple(src_tokens), tuple(tgt_tokens))
        if key not in self._table:
            raise FixtureMissError(
                f"no fixture alignment matrix for {len(src_tokens)}x{len(tgt_tokens)} "
                f"sentence pair starting {src_tokens[0]!r}"
            )
        return AlignmentMatrix.checked(src_tokens, tgt_tokens, self._table[key])


def fixture_bundle(
    fixtures_dir: str | Path,
    cache_dir: str | Path,
    language: str = "pt",
    **bundle_kwargs,
) -> ProviderBundle:
    """Assemble a fully offline bundle from a fixture directory."""
    root = Path(fixtures_dir)
    return ProviderBundle(
        translator=FixtureTranslator(root / "translations.json"),
        dictionary=FixtureDictionary(root / "alternatives.json"),
        lemmatizer=FileLemmatizer({language: root / f"lemmas.{language}.tsv"}),
        thesaurus=FileThesaurus({language: root / f"thesaurus.{language}.txt"}),
        aligner=FixtureAligner(root / "matrices.json"),
        cache=ResponseCache(cache_dir),
        language=language,
        **bundle_kwargs,
    )
