"""Score pipeline alignments against gold manual alignments.

Two metrics per annotation: strict string equality ("exact") and token
multiset F1 ("relaxed"), micro-averaged overall, per annotation kind and
per alignment method. Residual mismatches are classified into the two
dominant error phenomena (preposition-determiner contraction and omitted
subject pronouns) or Other.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations
from typing import Iterable, Sequence

from .align import PipelineConfig, align_corpus
from .corpus import (
    AlignedSentence,
    AlignmentMethod,
    AnnotatedSentence,
    AnnotationKind,
    tokenize,
)
from .corpus_io import GoldAlignment, resolve_gold
from .providers import ProviderBundle

_EVAL_ROW_ORDER = (
    AlignmentMethod.SMATCH,
    AlignmentMethod.LEMMA,
    AlignmentMethod.MTRANS,
    AlignmentMethod.SYNONYM,
    AlignmentMethod.WALIGNER,
    AlignmentMethod.FUZZY,
    AlignmentMethod.MANUAL,
    AlignmentMethod.UNALIGNED,
)

#: Portuguese preposition+determiner contractions and the determiner each hides.
CONTRACTIONS: dict[str, str] = {
    "no": "o",
    "na": "a",
    "nos": "os",
    "nas": "as",
    "do": "o",
    "da": "a",
    "dos": "os",
    "das": "as",
    "ao": "o",
    "aos": "os",
    "à": "a",
    "às": "as",
    "pelo": "o",
    "pela": "a",
    "pelos": "os",
    "pelas": "as",
    "num": "um",
    "numa": "uma",
}

#: Subject-form pronouns that vanish when the translation drops the subject.
SUBJECT_PRONOUNS = frozenset({"nós", "eu", "ele", "ela", "eles", "elas", "tu", "vós"})


class ErrorClass(str, Enum):
    CORRECT = "Correct"
    DETERMINER_CONTRACTION = "DeterminerContraction"
    NULL_SUBJECT = "NullSubject"
    OTHER = "Other"


def exact_score(pred: str | None, gold: str) -> int:
    """1 iff the prediction is present and equals the gold surface exactly
    (case-sensitive, character for character)."""
    if not gold:
        raise ValueError("gold surface must be non-empty")
    return int(pred is not None and pred == gold)


def relaxed_f1(pred: str | None, gold: str) -> float:
    """Token-multiset F1 between the predicted and gold surfaces; 0.0 when the
    prediction is absent or the token sets are disjoint."""
    if not gold:
        raise ValueError("gold surface must be non-empty")
    if pred is None:
        return 0.0
    pred_tokens = Counter(tokenize(pred).surfaces())
    gold_tokens = Counter(tokenize(gold).surfaces())
    if not pred_tokens or not gold_tokens:
        return 0.0
    overlap = sum((pred_tokens & gold_tokens).values())
    if overlap == 0:
        return 0.0
    precision = overlap / sum(pred_tokens.values())
    recall = overlap / sum(gold_tokens.values())
    return 2 * precision * recall / (precision + recall)


def _decontracted_equal(a_tokens: Sequence[str], b_tokens: Sequence[str]) -> bool:
    """True when a's first token is a contraction whose hidden determiner,
    followed by the rest of a, reproduces b exactly."""
    if not a_tokens or not b_tokens:
        return False
    determiner = CONTRACTIONS.get(a_tokens[0].casefold())
    if determiner is None:
        return False
    if b_tokens[0].casefold() != determiner:
        return False
    return list(a_tokens[1:]) == list(b_tokens[1:])


def classify_error(
    pred: str | None, gold: str, absent_in_translation: bool = False
) -> ErrorClass:
    """Bucket a (prediction, gold) pair: Correct iff exact; contraction when
    the two differ only by a fused preposition+determiner at the front (either
    direction); NullSubject when nothing was predicted and the gold surface is
    a subject pronoun (or the record is flagged absent from the translation)."""
    if exact_score(pred, gold) == 1:
        return ErrorClass.CORRECT
    if pred is not None:
        pred_tokens = tokenize(pred).surfaces()
        gold_tokens = tokenize(gold).surfaces()
        if _decontracted_equal(pred_tokens, gold_tokens) or _decontracted_equal(
            gold_tokens, pred_tokens
        ):
            return ErrorClass.DETERMINER_CONTRACTION
    if pred is None:
        if absent_in_translation or gold.strip().casefold() in SUBJECT_PRONOUNS:
            return ErrorClass.NULL_SUBJECT
    return ErrorClass.OTHER


@dataclass(frozen=True)
class EvalRecord:
    doc_id: str
    sent_id: str
    annotation_id: str
    kind: AnnotationKind
    method: AlignmentMethod
    pred: str | None
    gold: str
    exact: int
    relaxed: float
    error: ErrorClass


@dataclass
class EvalReport:
    records: list[EvalRecord] = field(default_factory=list)

    def _select(
        self, method: AlignmentMethod | None = None, kind: AnnotationKind | None = None
    ) -> list[EvalRecord]:
        return [
            r
            for r in self.records
            if (method is None or r.method is method) and (kind is None or r.kind is kind)
        ]

    def support(self, method: AlignmentMethod | None = None, kind: AnnotationKind | None = None) -> int:
        return len(self._select(method, kind))

    def exact(self, method: AlignmentMethod | None = None, kind: AnnotationKind | None = None) -> float:
        rows = self._select(method, kind)
        return sum(r.exact for r in rows) / len(rows) if rows else 0.0

    def relaxed(self, method: AlignmentMethod | None = None, kind: AnnotationKind | None = None) -> float:
        rows = self._select(method, kind)
        return sum(r.relaxed for r in rows) / len(rows) if rows else 0.0

    def error_breakdown(self) -> Counter:
        return Counter(r.error for r in self.records)

    def render_text(self) -> str:
        """Fixed-width table, one row per method with support plus a Pipeline
        row; Relaxed/Exact percentage columns per kind and overall."""
        header = [
            "Method",
            "Trigger Relaxed",
            "Trigger Exact",
            "Argument Relaxed",
            "Argument Exact",
            "All Relaxed",
            "All Exact",
        ]
        lines = [header]
        # The six strategies always render; Manual/Unaligned only when present.
        row_methods = list(_EVAL_ROW_ORDER[:6]) + [
            m for m in _EVAL_ROW_ORDER[6:] if self.support(m) > 0
        ]
        for method in row_methods:
            lines.append([method.value] + self._score_cells(method))
        lines.append(["Pipeline"] + self._score_cells(None))
        widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
        out = []
        for line in lines:
            out.append("  ".join(cell.rjust(w) for cell, w in zip(line, widths)))
        return "\n".join(out)

    def _score_cells(self, method: AlignmentMethod | None) -> list[str]:
        cells = []
        for kind in (AnnotationKind.TRIGGER, AnnotationKind.ARGUMENT, None):
            if self.support(method, kind) == 0:
                cells.extend(["-", "-"])
            else:
                cells.append(f"{self.relaxed(method, kind) * 100:.2f}")
                cells.append(f"{self.exact(method, kind) * 100:.2f}")
        return cells

    def to_csv_rows(self) -> list[list[str]]:
        rows = [["method", "kind", "relaxed", "exact", "support"]]
        methods: list[AlignmentMethod | None] = [
            m for m in _EVAL_ROW_ORDER if self.support(m) > 0
        ]
        methods.append(None)
        for method in methods:
            for kind in (AnnotationKind.TRIGGER, AnnotationKind.ARGUMENT, None):
                support = self.support(method, kind)
                rows.append(
                    [
                        method.value if method else "Pipeline",
                        kind.value if kind else "all",
                        f"{self.relaxed(method, kind):.6f}" if support else "",
                        f"{self.exact(method, kind):.6f}" if support else "",
                        str(support),
                    ]
                )
        return rows


def evaluate(aligned: Iterable[AlignedSentence], gold: Sequence[GoldAlignment]) -> EvalReport:
    """Score every gold record against its pipeline alignment; raises
    GoldReferenceError when a gold record does not resolve."""
    aligned = list(aligned)
    resolved = resolve_gold(gold, aligned)
    report = EvalReport()
    for rec in gold:
        alignment = resolved[(rec.doc_id, rec.sent_id, rec.annotation_id)]
        pred = alignment.aligned_surface
        report.records.append(
            EvalRecord(
                doc_id=rec.doc_id,
                sent_id=rec.sent_id,
                annotation_id=rec.annotation_id,
                kind=alignment.source.kind,
                method=alignment.method,
                pred=pred,
                gold=rec.gold_surface,
                exact=exact_score(pred, rec.gold_surface),
                relaxed=relaxed_f1(pred, rec.gold_surface),
                error=classify_error(pred, rec.gold_surface),
            )
        )
    return report


@dataclass(frozen=True)
class OrderScore:
    order: tuple[AlignmentMethod, ...]
    exact: float
    relaxed: float

    @property
    def name(self) -> str:
        return ">".join(m.value for m in self.order)


@dataclass
class OrderSearchResult:
    best: OrderScore
    table: list[OrderScore]


def search_order(
    corpus: Sequence[AnnotatedSentence],
    gold: Sequence[GoldAlignment],
    providers: ProviderBundle,
    base_config: PipelineConfig,
    variant: str = "european",
) -> OrderSearchResult:
    """Align the corpus under every permutation of the configured strategies
    and rank the orders by exact score (ties: relaxed, then order name).

    The provider cache is shared across permutations, so translations happen
    once for the whole search.
    """
    scores: list[OrderScore] = []
    for order in permutations(base_config.strategy_order):
        config = base_config.with_order(order)
        result = align_corpus(corpus, providers, config, variant)
        report = evaluate(result.sentences, gold)
        scores.append(OrderScore(order=tuple(order), exact=report.exact(), relaxed=report.relaxed()))
    table = sorted(scores, key=lambda s: (-s.exact, -s.relaxed, s.name))
    return OrderSearchResult(best=table[0], table=table)
