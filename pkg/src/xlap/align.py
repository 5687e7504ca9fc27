"""Sequential multi-strategy alignment of annotations onto translated sentences.

The pipeline tries strategies in a configured order and the first match
wins; later strategies are never consulted, so per-method counts partition
the annotation set. Synonym lookup applies only to triggers and fuzzy
window matching only to arguments, whatever the configured order says.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from .corpus import (
    AlignedAnnotation,
    AlignedSentence,
    AlignmentMethod,
    AnnotatedSentence,
    AnnotationKind,
    STRATEGY_METHODS,
    SourceAnnotation,
    Span,
    StrategyOutcome,
    TokenizedText,
    slice_span,
    tokenize,
)
from .providers import ProviderBundle, ProviderError
from .similarity import gestalt_similarity, levenshtein_similarity
from .stats import MethodStats

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    """Tunables for the strategy chain.

    The default order is the best-performing one; ``SMatch`` must always be
    present because everything else exists to cover its misses.
    """

    strategy_order: tuple[AlignmentMethod, ...] = STRATEGY_METHODS
    fuzzy_threshold: float = 0.75
    safeguard_slack_tokens: int = 3
    safeguard_ratio: float = 2.0
    aligner_prob_threshold: float = 0.1
    case_fold_direct_match: bool = True

    def __post_init__(self) -> None:
        if len(set(self.strategy_order)) != len(self.strategy_order):
            raise ValueError("strategy_order contains duplicates")
        unknown = [m for m in self.strategy_order if m not in STRATEGY_METHODS]
        if unknown:
            raise ValueError(f"not a strategy: {unknown}")
        if AlignmentMethod.SMATCH not in self.strategy_order:
            raise ValueError("strategy_order must include SMatch")
        if not 0.0 <= self.fuzzy_threshold <= 1.0:
            raise ValueError("fuzzy_threshold must be in [0, 1]")
        if self.safeguard_slack_tokens < 0:
            raise ValueError("safeguard_slack_tokens must be non-negative")
        if self.safeguard_ratio <= 1.0:
            raise ValueError("safeguard_ratio must exceed 1")
        if not 0.0 <= self.aligner_prob_threshold <= 1.0:
            raise ValueError("aligner_prob_threshold must be in [0, 1]")

    def with_order(self, order: Sequence[AlignmentMethod]) -> "PipelineConfig":
        return replace(self, strategy_order=tuple(order))


def _fold(text: str) -> str:
    """Length-preserving lowercasing so folded offsets map 1:1 onto the original."""
    out = []
    for ch in text:
        low = ch.casefold()
        if len(low) != 1:
            low = ch.lower()
        out.append(low if len(low) == 1 else ch)
    return "".join(out)


def direct_match_all(a_trans: str, s_trans: str, case_fold: bool = True) -> list[Span]:
    """Every occurrence of ``a_trans`` in ``s_trans`` that starts and ends on
    token boundaries, left to right; mid-token hits like "arma" inside
    "armas" are rejected."""
    needle = a_trans.strip()
    if not needle:
        return []
    haystack = s_trans
    if case_fold:
        needle = _fold(needle)
        haystack = _fold(haystack)
    tokens = tokenize(s_trans).tokens
    starts = {t.span.start for t in tokens}
    ends = {t.span.end for t in tokens}
    spans: list[Span] = []
    pos = haystack.find(needle)
    while pos != -1:
        end = pos + len(needle)
        if pos in starts and end in ends:
            spans.append(Span(pos, end))
        pos = haystack.find(needle, pos + 1)
    return spans


def direct_match(a_trans: str, s_trans: str, case_fold: bool = True) -> Span | None:
    """Leftmost token-boundary occurrence of ``a_trans`` in ``s_trans``."""
    spans = direct_match_all(a_trans, s_trans, case_fold)
    return spans[0] if spans else None


def _find_subsequence_all(haystack: Sequence[str], needle: Sequence[str]) -> list[int]:
    if not needle or len(needle) > len(haystack):
        return []
    return [
        i
        for i in range(len(haystack) - len(needle) + 1)
        if all(haystack[i + j] == needle[j] for j in range(len(needle)))
    ]


def lemma_match_all(a_trans: str, s_trans: str, providers: ProviderBundle) -> list[Span]:
    """Every lemma-sequence occurrence, mapped back to original-surface
    character spans, left to right."""
    a_tokens = tokenize(a_trans).tokens
    s_tokens = tokenize(s_trans).tokens
    if not a_tokens or not s_tokens:
        return []
    a_lemmas = providers.lemmatize([t.surface for t in a_tokens])
    s_lemmas = providers.lemmatize([t.surface for t in s_tokens])
    return [
        Span(s_tokens[i].span.start, s_tokens[i + len(a_lemmas) - 1].span.end)
        for i in _find_subsequence_all(s_lemmas, a_lemmas)
    ]


def lemma_match(a_trans: str, s_trans: str, providers: ProviderBundle) -> Span | None:
    """Match on lemmatized token sequences and map the hit back to the
    original-surface character span (leftmost occurrence)."""
    spans = lemma_match_all(a_trans, s_trans, providers)
    return spans[0] if spans else None


def multi_translation_match(
    a_src: str,
    s_trans: str,
    providers: ProviderBundle,
    case_fold: bool = True,
) -> tuple[Span, str] | None:
    """Try each alternative translation of the source term directly, and only
    if all fail, a second lemma-based pass per alternative."""
    alternatives = providers.lookup_alternatives(a_src)
    for alt in alternatives:
        span = direct_match(alt, s_trans, case_fold)
        if span is not None:
            return span, alt
    for alt in alternatives:
        span = lemma_match(alt, s_trans, providers)
        if span is not None:
            return span, alt
    return None


def synonym_match(
    t_trans: str,
    s_trans: str,
    providers: ProviderBundle,
    case_fold: bool = True,
) -> tuple[Span, str] | None:
    """Triggers only: for each synonym of the translated trigger, try a direct
    match then a lemma match; the first hit wins."""
    for synonym in providers.synonyms(t_trans):
        span = direct_match(synonym, s_trans, case_fold)
        if span is None:
            span = lemma_match(synonym, s_trans, providers)
        if span is not None:
            return span, synonym
    return None


def size_safeguard(candidate_span_tokens: int, source_tokens: int, config: PipelineConfig) -> bool:
    """Reject disproportionately long aligner candidates: pass iff
    candidate <= max(ratio * source, source + slack)."""
    if candidate_span_tokens < 1 or source_tokens < 1:
        raise ValueError("token counts must be >= 1")
    limit = max(
        config.safeguard_ratio * source_tokens,
        source_tokens + config.safeguard_slack_tokens,
    )
    return candidate_span_tokens <= limit


def _row_selection(row: Sequence[float], threshold: float) -> list[int]:
    selected = [j for j, p in enumerate(row) if p > threshold]
    if not selected:
        # Guarantee every source token contributes: fall back to the row
        # argmax (leftmost on ties) so the min/max span stays well-defined.
        selected = [max(range(len(row)), key=row.__getitem__)]
    return selected


def word_aligner_match(
    s_src: str,
    s_trans: str,
    a_src_span: Span,
    providers: ProviderBundle,
    config: PipelineConfig,
) -> Span | None:
    """Project the annotation through the token-association matrix.

    For every source token inside the annotation, select the target tokens
    whose probability exceeds the threshold (argmax fallback); the candidate
    runs from the minimum to the maximum selected target token and is kept
    only when the size safeguard passes.
    """
    src = tokenize(s_src)
    tgt = tokenize(s_trans)
    rows = [i for i, t in enumerate(src.tokens) if t.span.overlaps(a_src_span)]
    if not rows or not tgt.tokens:
        return None
    matrix = providers.alignment_matrix(src.surfaces(), tgt.surfaces())
    selected: list[int] = []
    for i in rows:
        selected.extend(_row_selection(matrix.probs[i], config.aligner_prob_threshold))
    lo, hi = min(selected), max(selected)
    if not size_safeguard(hi - lo + 1, len(rows), config):
        return None
    return Span(tgt.tokens[lo].span.start, tgt.tokens[hi].span.end)


def _windows(s_tokens: TokenizedText, width: int) -> list[Span]:
    tokens = s_tokens.tokens
    if width < 1 or width > len(tokens):
        return []
    return [
        Span(tokens[i].span.start, tokens[i + width - 1].span.end)
        for i in range(len(tokens) - width + 1)
    ]


def fuzzy_match(a_trans: str, s_trans: str, config: PipelineConfig) -> Span | None:
    """Arguments only: slide a token window as wide as the translated term over
    the sentence and keep the best-scoring window surface.

    Gestalt similarity is tried first; only if no window clears the threshold
    is normalized Levenshtein similarity given the same chance. Ties go to the
    leftmost window; below-threshold bests return nothing rather than a guess.
    """
    a_trans = a_trans.strip()
    if not a_trans:
        return None
    width = len(tokenize(a_trans).tokens)
    tokenized = tokenize(s_trans)
    windows = _windows(tokenized, width)
    if not windows:
        return None
    for scorer in (gestalt_similarity, levenshtein_similarity):
        best_span: Span | None = None
        best_score = -1.0
        for span in windows:
            score = scorer(a_trans, slice_span(s_trans, span))
            if score > best_score:
                best_score, best_span = score, span
        if best_score >= config.fuzzy_threshold:
            return best_span
    return None


_KIND_GATE = {
    AlignmentMethod.SYNONYM: AnnotationKind.TRIGGER,
    AlignmentMethod.FUZZY: AnnotationKind.ARGUMENT,
}


def align_annotation(
    s_src: str,
    s_trans: str,
    annotation: SourceAnnotation,
    providers: ProviderBundle,
    config: PipelineConfig,
    variant: str = "european",
    term_translation: str | None = None,
) -> AlignedAnnotation:
    """Run the strategy chain for one annotation; first match wins and every
    attempt lands on the audit trail."""
    if not s_trans:
        raise ValueError("translated sentence must be non-empty")
    notes: str = ""
    if term_translation is None:
        try:
            term_translation = providers.translate_term(annotation.surface, variant)
        except ProviderError as err:
            term_translation = ""
            notes = f"term translation failed: {err}"
            log.warning("term translation failed for %s: %s", annotation.id, err)

    attempts: list[StrategyOutcome] = []
    matched: StrategyOutcome | None = None
    for method in config.strategy_order:
        gate = _KIND_GATE.get(method)
        if gate is not None and annotation.kind is not gate:
            continue
        outcome = _run_strategy(
            method, s_src, s_trans, annotation, term_translation, providers, config
        )
        attempts.append(outcome)
        if outcome.matched:
            matched = outcome
            break

    if matched is None:
        return AlignedAnnotation(
            source=annotation,
            term_translation=term_translation,
            method=AlignmentMethod.UNALIGNED,
            candidates_tried=tuple(attempts),
        )
    assert matched.span is not None
    return AlignedAnnotation(
        source=annotation,
        term_translation=term_translation,
        method=matched.method,
        aligned_span=matched.span,
        aligned_surface=slice_span(s_trans, matched.span),
        candidates_tried=tuple(attempts),
    )


def _run_strategy(
    method: AlignmentMethod,
    s_src: str,
    s_trans: str,
    annotation: SourceAnnotation,
    term_translation: str,
    providers: ProviderBundle,
    config: PipelineConfig,
) -> StrategyOutcome:
    span: Span | None = None
    note = ""
    if method is AlignmentMethod.SMATCH:
        if term_translation:
            hits = direct_match_all(term_translation, s_trans, config.case_fold_direct_match)
            if hits:
                span = hits[0]
                if len(hits) > 1:
                    note = f"leftmost of {len(hits)} occurrences"
        else:
            note = "no term translation"
    elif method is AlignmentMethod.LEMMA:
        if term_translation:
            hits = lemma_match_all(term_translation, s_trans, providers)
            if hits:
                span = hits[0]
                if len(hits) > 1:
                    note = f"leftmost of {len(hits)} occurrences"
        else:
            note = "no term translation"
    elif method is AlignmentMethod.MTRANS:
        hit = multi_translation_match(
            annotation.surface, s_trans, providers, config.case_fold_direct_match
        )
        if hit is not None:
            span, alt = hit
            note = f"alternative {alt!r}"
    elif method is AlignmentMethod.SYNONYM:
        if term_translation:
            hit = synonym_match(
                term_translation, s_trans, providers, config.case_fold_direct_match
            )
            if hit is not None:
                span, synonym = hit
                note = f"synonym {synonym!r}"
        else:
            note = "no term translation"
    elif method is AlignmentMethod.WALIGNER:
        try:
            span = word_aligner_match(s_src, s_trans, annotation.span, providers, config)
        except ProviderError as err:
            # Aligner failures degrade to a strategy miss; the run continues.
            note = f"aligner unavailable: {err}"
            log.warning("word aligner failed for %s: %s", annotation.id, err)
    elif method is AlignmentMethod.FUZZY:
        if term_translation:
            span = fuzzy_match(term_translation, s_trans, config)
        else:
            note = "no term translation"
    else:  # pragma: no cover - guarded by PipelineConfig validation
        raise ValueError(f"not a strategy: {method}")
    return StrategyOutcome(method=method, matched=span is not None, span=span, note=note)


@dataclass(frozen=True)
class SentenceFailure:
    doc_id: str
    sent_id: str
    reason: str


@dataclass
class AlignmentRunResult:
    sentences: list[AlignedSentence]
    stats: MethodStats
    failures: list[SentenceFailure] = field(default_factory=list)


def _align_sentence(
    sentence: AnnotatedSentence,
    providers: ProviderBundle,
    config: PipelineConfig,
    variant: str,
) -> AlignedSentence:
    translation = sentence.translation
    if translation is None:
        translation = providers.translate_sentence(sentence.text, variant)
        sentence = sentence.with_translation(translation)
    alignments = tuple(
        align_annotation(sentence.text, translation, ann, providers, config, variant)
        for ann in sentence.annotations
    )
    return AlignedSentence(sentence, alignments)


def align_corpus(
    corpus: Iterable[AnnotatedSentence],
    providers: ProviderBundle,
    config: PipelineConfig,
    variant: str = "european",
    parallelism: int = 1,
    run_log: Callable[[dict], None] | None = None,
) -> AlignmentRunResult:
    """Align every sentence, accumulating per method x kind x split counts.

    A provider hard failure (after retries) marks the sentence failed and the
    run continues; failures are listed on the result. Output order follows
    input order regardless of ``parallelism``.
    """
    stats = MethodStats()
    result = AlignmentRunResult(sentences=[], stats=stats)

    def worker(sentence: AnnotatedSentence) -> tuple[AnnotatedSentence, AlignedSentence | None, str, float]:
        begin = time.monotonic()
        try:
            aligned = _align_sentence(sentence, providers, config, variant)
            return sentence, aligned, "", time.monotonic() - begin
        except ProviderError as err:
            return sentence, None, str(err), time.monotonic() - begin

    sentences = list(corpus)
    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            outcomes = list(pool.map(worker, sentences))
    else:
        outcomes = [worker(s) for s in sentences]

    for sentence, aligned, error, elapsed in outcomes:
        if aligned is None:
            log.error("sentence %s/%s failed: %s", sentence.doc_id, sentence.sent_id, error)
            result.failures.append(SentenceFailure(sentence.doc_id, sentence.sent_id, error))
            continue
        for alignment in aligned.alignments:
            stats.add(alignment.method, alignment.source.kind, aligned.sentence.split)
        result.sentences.append(aligned)
        if run_log is not None:
            run_log(
                {
                    "event": "sentence",
                    "doc_id": sentence.doc_id,
                    "sent_id": sentence.sent_id,
                    "elapsed_ms": round(elapsed * 1000, 3),
                    "annotations": [
                        {
                            "id": alignment.source.id,
                            "method": alignment.method.value,
                            "attempts": [
                                {
                                    "method": attempt.method.value,
                                    "matched": attempt.matched,
                                    "note": attempt.note,
                                }
                                for attempt in alignment.candidates_tried
                            ],
                        }
                        for alignment in aligned.alignments
                    ],
                }
            )
    return result
