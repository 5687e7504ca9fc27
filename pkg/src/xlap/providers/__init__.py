"""Pluggable external capabilities: translation, dictionary lookup,
lemmatization, synonyms and the embedding word-aligner client."""

from .base import AlignmentMatrix, ProviderBundle, dedupe_case_insensitive
from .cache import ResponseCache
from .errors import (
    AuthError,
    FixtureMissError,
    ProtocolError,
    ProviderError,
    ProviderUnavailableError,
    RateLimitError,
    retry_call,
)
from .fixtures import (
    FileLemmatizer,
    FileThesaurus,
    FixtureAligner,
    FixtureDictionary,
    FixtureTranslator,
    fixture_bundle,
)
from .live import EmbedAlignerClient, LiveDictionary, LiveTranslator, require_env

__all__ = [
    "AlignmentMatrix",
    "AuthError",
    "EmbedAlignerClient",
    "FileLemmatizer",
    "FileThesaurus",
    "FixtureAligner",
    "FixtureDictionary",
    "FixtureMissError",
    "FixtureTranslator",
    "LiveDictionary",
    "LiveTranslator",
    "ProtocolError",
    "ProviderBundle",
    "ProviderError",
    "ProviderUnavailableError",
    "RateLimitError",
    "ResponseCache",
    "dedupe_case_insensitive",
    "fixture_bundle",
    "require_env",
    "retry_call",
]
