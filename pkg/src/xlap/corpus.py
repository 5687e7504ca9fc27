"""Core data model: span-annotated sentences, tokenization and span arithmetic.

All offsets are character (code point) offsets, never bytes, so the
"surface equals slice" invariant survives any encoding and any amount of
diacritics. Every type here is immutable after construction; operations
are pure functions and safe under concurrency.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, replace
from enum import Enum


class SpanError(ValueError):
    """A span does not address a valid character range of its text."""


@dataclass(frozen=True)
class Span:
    """Half-open character range [start, end) into some text."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end <= self.start:
            raise SpanError(f"invalid span ({self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end


def slice_span(text: str, span: Span) -> str:
    """Exact substring of ``text`` at ``span``; inverse of every span producer."""
    if span.end > len(text):
        raise SpanError(f"span ({span.start}, {span.end}) exceeds text length {len(text)}")
    return text[span.start : span.end]


class AnnotationKind(str, Enum):
    TRIGGER = "trigger"
    ARGUMENT = "argument"


class AlignmentMethod(str, Enum):
    SMATCH = "SMatch"
    LEMMA = "Lemma"
    MTRANS = "MTrans"
    SYNONYM = "Synonym"
    WALIGNER = "WAligner"
    FUZZY = "Fuzzy"
    MANUAL = "Manual"
    UNALIGNED = "Unaligned"


#: The strategies the pipeline may run, in the default execution order.
STRATEGY_METHODS: tuple[AlignmentMethod, ...] = (
    AlignmentMethod.SMATCH,
    AlignmentMethod.LEMMA,
    AlignmentMethod.MTRANS,
    AlignmentMethod.SYNONYM,
    AlignmentMethod.WALIGNER,
    AlignmentMethod.FUZZY,
)


@dataclass(frozen=True)
class SourceAnnotation:
    """One annotated term in the source sentence.

    ``label`` is the event type for triggers (e.g. "Life:Be-Born") and the
    role for arguments (e.g. "Place"). ``surface`` must equal the source
    sentence substring at ``span``; loaders check this.
    """

    id: str
    kind: AnnotationKind
    label: str
    span: Span
    surface: str


@dataclass(frozen=True)
class StrategyOutcome:
    """One strategy attempt recorded on the audit trail."""

    method: AlignmentMethod
    matched: bool
    span: Span | None = None
    note: str = ""

    def __post_init__(self) -> None:
        if self.matched != (self.span is not None):
            raise ValueError("outcome span must be present iff matched")


@dataclass(frozen=True)
class AlignedAnnotation:
    """A source annotation after projection onto the translated sentence.

    ``term_translation`` is the isolated translation of the surface and may
    be empty when the provider failed. ``aligned_span`` is present exactly
    when ``method`` is not Unaligned.
    """

    source: SourceAnnotation
    term_translation: str
    method: AlignmentMethod
    aligned_span: Span | None = None
    aligned_surface: str | None = None
    candidates_tried: tuple[StrategyOutcome, ...] = ()

    def __post_init__(self) -> None:
        has_span = self.aligned_span is not None
        if has_span == (self.method is AlignmentMethod.UNALIGNED):
            raise ValueError(
                f"annotation {self.source.id}: aligned_span present iff method != Unaligned"
            )
        if has_span != (self.aligned_surface is not None):
            raise ValueError(f"annotation {self.source.id}: span and surface must come together")


SPLITS = ("train", "dev", "test", "unsplit")


@dataclass(frozen=True)
class AnnotatedSentence:
    """A source sentence with its event annotations and optional translation."""

    doc_id: str
    sent_id: str
    split: str
    text: str
    annotations: tuple[SourceAnnotation, ...]
    translation: str | None = None

    def with_translation(self, translation: str) -> "AnnotatedSentence":
        return replace(self, translation=translation)

    @property
    def key(self) -> tuple[str, str]:
        return (self.doc_id, self.sent_id)


@dataclass(frozen=True)
class AlignedSentence:
    """A sentence whose annotations have been projected onto its translation."""

    sentence: AnnotatedSentence
    alignments: tuple[AlignedAnnotation, ...]

    @property
    def translation(self) -> str:
        assert self.sentence.translation is not None
        return self.sentence.translation


@dataclass(frozen=True)
class Token:
    surface: str
    span: Span


@dataclass(frozen=True)
class TokenizedText:
    """Text plus its tokens; token spans are strictly increasing and map back exactly."""

    text: str
    tokens: tuple[Token, ...]

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


_CHUNK = re.compile(r"\S+")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> TokenizedText:
    """Deterministic rule-based tokenization preserving character offsets.

    Splits on whitespace, then peels punctuation characters off both ends of
    each chunk into their own tokens ("7," -> "7" ","). Internal punctuation
    stays put, so hyphenated words like "reuniram-se" remain single tokens.
    Never lowercases, never strips diacritics.
    """
    tokens: list[Token] = []
    for m in _CHUNK.finditer(text):
        chunk, base = m.group(), m.start()
        left, right = 0, len(chunk)
        trailing: list[Token] = []
        while left < right and _is_punct(chunk[left]):
            tokens.append(Token(chunk[left], Span(base + left, base + left + 1)))
            left += 1
        while right > left and _is_punct(chunk[right - 1]):
            trailing.append(Token(chunk[right - 1], Span(base + right - 1, base + right)))
            right -= 1
        if left < right:
            tokens.append(Token(chunk[left:right], Span(base + left, base + right)))
        tokens.extend(reversed(trailing))
    return TokenizedText(text, tuple(tokens))


def validate_sentence(sentence: AnnotatedSentence) -> list[str]:
    """Return a violation description per broken invariant, empty when clean."""
    violations: list[str] = []
    if sentence.split not in SPLITS:
        violations.append(f"sentence {sentence.doc_id}/{sentence.sent_id}: unknown split {sentence.split!r}")
    seen: set[str] = set()
    for ann in sentence.annotations:
        if ann.id in seen:
            violations.append(f"annotation {ann.id}: duplicate id within sentence")
        seen.add(ann.id)
        if not ann.label:
            violations.append(f"annotation {ann.id}: empty label")
        if ann.span.end > len(sentence.text):
            violations.append(f"annotation {ann.id}: span ({ann.span.start}, {ann.span.end}) outside text")
            continue
        actual = slice_span(sentence.text, ann.span)
        if actual != ann.surface:
            violations.append(
                f"annotation {ann.id}: surface {ann.surface!r} != text at span {actual!r}"
            )
    return violations
