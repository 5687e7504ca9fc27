"""Read and write the line-delimited corpus interchange formats.

One UTF-8 JSON record per line. Readers are streaming iterators whose
memory use is bounded by the largest single record; a single writer owns
an output file. Writes are byte-stable: the same data always serializes
to the same bytes (fixed field order, ``ensure_ascii=False``, ``\\n``
line endings).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .corpus import (
    AlignedAnnotation,
    AlignedSentence,
    AlignmentMethod,
    AnnotatedSentence,
    AnnotationKind,
    SourceAnnotation,
    Span,
    SpanError,
    slice_span,
    validate_sentence,
)


class CorpusFormatError(ValueError):
    """A line could not be parsed as a corpus record."""


class CorpusLoadError(ValueError):
    """A parsed record violates a data invariant."""


class GoldReferenceError(ValueError):
    """A gold record does not resolve against the loaded corpus."""


@dataclass(frozen=True)
class GoldAlignment:
    """An expert-provided alignment of one annotation in the translated sentence."""

    doc_id: str
    sent_id: str
    annotation_id: str
    gold_span: Span
    gold_surface: str


def _parse_annotation(raw: dict, line_no: int) -> SourceAnnotation:
    try:
        return SourceAnnotation(
            id=str(raw["id"]),
            kind=AnnotationKind(raw["kind"]),
            label=str(raw["label"]),
            span=Span(int(raw["start"]), int(raw["end"])),
            surface=str(raw["surface"]),
        )
    except (KeyError, ValueError, TypeError, SpanError) as err:
        raise CorpusFormatError(f"line {line_no}: bad annotation record: {err}") from err


def _parse_sentence(raw: dict, line_no: int) -> AnnotatedSentence:
    try:
        anns = tuple(_parse_annotation(a, line_no) for a in raw["annotations"])
        sentence = AnnotatedSentence(
            doc_id=str(raw["doc_id"]),
            sent_id=str(raw["sent_id"]),
            split=str(raw["split"]),
            text=str(raw["text"]),
            annotations=anns,
            translation=raw.get("translation"),
        )
    except CorpusFormatError:
        raise
    except (KeyError, ValueError, TypeError) as err:
        raise CorpusFormatError(f"line {line_no}: bad sentence record: {err}") from err
    return sentence


def _iter_records(path: str | Path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as err:
                raise CorpusFormatError(f"line {line_no}: not valid JSON: {err}") from err
            if not isinstance(raw, dict):
                raise CorpusFormatError(f"line {line_no}: record must be an object")
            yield line_no, raw


def read_corpus(path: str | Path) -> Iterator[AnnotatedSentence]:
    """Stream validated sentences from a corpus file.

    Raises CorpusFormatError with the offending line number on malformed
    input and CorpusLoadError naming the annotation id when an invariant
    is broken.
    """
    seen_keys: set[tuple[str, str]] = set()
    for line_no, raw in _iter_records(path):
        sentence = _parse_sentence(raw, line_no)
        if sentence.key in seen_keys:
            raise CorpusLoadError(
                f"line {line_no}: duplicate sentence {sentence.doc_id}/{sentence.sent_id}"
            )
        seen_keys.add(sentence.key)
        violations = validate_sentence(sentence)
        if violations:
            raise CorpusLoadError(f"line {line_no}: " + "; ".join(violations))
        yield sentence


def _sentence_record(sentence: AnnotatedSentence) -> dict:
    return {
        "doc_id": sentence.doc_id,
        "sent_id": sentence.sent_id,
        "split": sentence.split,
        "text": sentence.text,
        "annotations": [
            {
                "id": a.id,
                "kind": a.kind.value,
                "label": a.label,
                "start": a.span.start,
                "end": a.span.end,
                "surface": a.surface,
            }
            for a in sentence.annotations
        ],
        "translation": sentence.translation,
    }


def write_corpus(path: str | Path, sentences: Iterable[AnnotatedSentence]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for sentence in sentences:
            handle.write(json.dumps(_sentence_record(sentence), ensure_ascii=False) + "\n")


def write_aligned(path: str | Path, aligned: Iterable[AlignedSentence]) -> None:
    """Write aligned sentences; output is re-readable by read_aligned and
    byte-identical across repeated writes of the same data."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for item in aligned:
            record = _sentence_record(item.sentence)
            for ann_record, alignment in zip(record["annotations"], item.alignments):
                ann_record["term_translation"] = alignment.term_translation
                ann_record["method"] = alignment.method.value
                ann_record["aligned_start"] = (
                    alignment.aligned_span.start if alignment.aligned_span else None
                )
                ann_record["aligned_end"] = (
                    alignment.aligned_span.end if alignment.aligned_span else None
                )
                ann_record["aligned_surface"] = alignment.aligned_surface
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_aligned(path: str | Path) -> Iterator[AlignedSentence]:
    """Stream aligned sentences, re-checking alignment invariants."""
    for line_no, raw in _iter_records(path):
        sentence = _parse_sentence(raw, line_no)
        if sentence.translation is None:
            raise CorpusLoadError(f"line {line_no}: aligned record missing translation")
        violations = validate_sentence(sentence)
        if violations:
            raise CorpusLoadError(f"line {line_no}: " + "; ".join(violations))
        alignments = []
        for ann, raw_ann in zip(sentence.annotations, raw["annotations"]):
            try:
                method = AlignmentMethod(raw_ann["method"])
            except (KeyError, ValueError) as err:
                raise CorpusFormatError(f"line {line_no}: bad method on {ann.id}: {err}") from err
            span = None
            if raw_ann.get("aligned_start") is not None:
                try:
                    span = Span(int(raw_ann["aligned_start"]), int(raw_ann["aligned_end"]))
                except (TypeError, SpanError) as err:
                    raise CorpusLoadError(f"line {line_no}: bad span on {ann.id}: {err}") from err
            surface = raw_ann.get("aligned_surface")
            try:
                alignment = AlignedAnnotation(
                    source=ann,
                    term_translation=str(raw_ann.get("term_translation", "")),
                    method=method,
                    aligned_span=span,
                    aligned_surface=surface,
                )
            except ValueError as err:
                raise CorpusLoadError(f"line {line_no}: {err}") from err
            if span is not None and slice_span(sentence.translation, span) != surface:
                raise CorpusLoadError(
                    f"line {line_no}: annotation {ann.id}: aligned_surface does not match "
                    f"translation slice"
                )
            alignments.append(alignment)
        yield AlignedSentence(sentence, tuple(alignments))


def write_gold(path: str | Path, records: Iterable[GoldAlignment]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for rec in records:
            handle.write(
                json.dumps(
                    {
                        "doc_id": rec.doc_id,
                        "sent_id": rec.sent_id,
                        "annotation_id": rec.annotation_id,
                        "gold_start": rec.gold_span.start,
                        "gold_end": rec.gold_span.end,
                        "gold_surface": rec.gold_surface,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def read_gold(
    path: str | Path,
    corpus: Iterable[AlignedSentence] | None = None,
) -> list[GoldAlignment]:
    """Load gold alignments; when ``corpus`` is given, check every record
    resolves to an annotation and that gold_surface matches the translation
    slice at the gold span."""
    records: list[GoldAlignment] = []
    for line_no, raw in _iter_records(path):
        try:
            rec = GoldAlignment(
                doc_id=str(raw["doc_id"]),
                sent_id=str(raw["sent_id"]),
                annotation_id=str(raw["annotation_id"]),
                gold_span=Span(int(raw["gold_start"]), int(raw["gold_end"])),
                gold_surface=str(raw["gold_surface"]),
            )
        except (KeyError, ValueError, TypeError, SpanError) as err:
            raise CorpusFormatError(f"line {line_no}: bad gold record: {err}") from err
        records.append(rec)
    if corpus is not None:
        resolve_gold(records, corpus)
    return records


def resolve_gold(
    records: Iterable[GoldAlignment], corpus: Iterable[AlignedSentence]
) -> dict[tuple[str, str, str], AlignedAnnotation]:
    """Map each gold record to its aligned annotation, raising
    GoldReferenceError with the dangling id when one does not resolve."""
    index: dict[tuple[str, str, str], tuple[AlignedSentence, AlignedAnnotation]] = {}
    for item in corpus:
        for alignment in item.alignments:
            key = (item.sentence.doc_id, item.sentence.sent_id, alignment.source.id)
            index[key] = (item, alignment)
    resolved: dict[tuple[str, str, str], AlignedAnnotation] = {}
    for rec in records:
        key = (rec.doc_id, rec.sent_id, rec.annotation_id)
        if key not in index:
            raise GoldReferenceError(
                f"gold record references unknown annotation {rec.doc_id}/{rec.sent_id}/{rec.annotation_id}"
            )
        item, alignment = index[key]
        actual = slice_span(item.translation, rec.gold_span)
        if actual != rec.gold_surface:
            raise CorpusLoadError(
                f"gold record {rec.annotation_id}: gold_surface {rec.gold_surface!r} "
                f"!= translation slice {actual!r}"
            )
        resolved[key] = alignment
    return resolved
