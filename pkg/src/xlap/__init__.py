"""xlap: project span annotations onto machine-translated sentences and
score the projections against gold manual alignments."""

from .align import (
    PipelineConfig,
    align_annotation,
    align_corpus,
    direct_match,
    fuzzy_match,
    lemma_match,
    multi_translation_match,
    size_safeguard,
    synonym_match,
    word_aligner_match,
)
from .corpus import (
    AlignedAnnotation,
    AlignedSentence,
    AlignmentMethod,
    AnnotatedSentence,
    AnnotationKind,
    SourceAnnotation,
    Span,
    StrategyOutcome,
    TokenizedText,
    slice_span,
    tokenize,
    validate_sentence,
)
from .evaluation import (
    ErrorClass,
    EvalReport,
    classify_error,
    evaluate,
    exact_score,
    relaxed_f1,
    search_order,
)
from .stats import MethodStats, method_stats

__version__ = "0.1.0"
