"""Entity-level factual consistency toolkit for abstractive summarization.

Measures entity hallucination (source precision) and entity accuracy
against gold summaries (target precision/recall/F1), filters corpora so
gold summaries contain no unmatched entities, and prepares B/I/O labels
and joint entity+summary training targets.
"""

from .filtering import (
    FilterOutcome,
    FilterStats,
    filter_corpus,
    filter_example,
    segment_sentences,
)
from .matching import MatchResult, find_match, stopwords, tokenize
from .metrics import (
    ExampleMetrics,
    GoldCorpusStats,
    aggregate_corpus,
    compute_metrics,
    count_matches,
    gold_corpus_stats,
    score_corpus,
)
from .model import (
    AnnotatedText,
    BioLabel,
    BioLabelSequence,
    EntityCounts,
    EntitySpan,
    EntityType,
    Example,
    JaensConfig,
    MetricPair,
    MetricReport,
    RECOMMENDED_ALPHA,
    SkippedCounts,
    Span,
    TrainingPrepMeta,
    ValidationFinding,
    validate_example,
)
from .prep import (
    ParsedJaens,
    SalientEntity,
    SalientEntitySet,
    bio_labels,
    build_jaens_target,
    parse_jaens_output,
    salient_entities,
)
from .corpus_io import (
    CorpusError,
    LoadDiagnostics,
    build_annotated_text,
    iter_corpus,
    load_corpus,
    report_to_dict,
    write_corpus,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedText",
    "BioLabel",
    "BioLabelSequence",
    "CorpusError",
    "EntityCounts",
    "EntitySpan",
    "EntityType",
    "Example",
    "ExampleMetrics",
    "FilterOutcome",
    "FilterStats",
    "GoldCorpusStats",
    "JaensConfig",
    "LoadDiagnostics",
    "MatchResult",
    "MetricPair",
    "MetricReport",
    "ParsedJaens",
    "RECOMMENDED_ALPHA",
    "SalientEntity",
    "SalientEntitySet",
    "SkippedCounts",
    "Span",
    "TrainingPrepMeta",
    "ValidationFinding",
    "aggregate_corpus",
    "bio_labels",
    "build_annotated_text",
    "build_jaens_target",
    "compute_metrics",
    "count_matches",
    "filter_corpus",
    "filter_example",
    "find_match",
    "gold_corpus_stats",
    "iter_corpus",
    "load_corpus",
    "parse_jaens_output",
    "report_to_dict",
    "salient_entities",
    "score_corpus",
    "segment_sentences",
    "stopwords",
    "tokenize",
    "validate_example",
    "write_corpus",
]
