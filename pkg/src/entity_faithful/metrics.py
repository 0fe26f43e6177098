"""Per-example entity counts and corpus-level metric aggregation.

Counts are over entity mentions: each annotated span is one unit, so the
counters are additive and micro averages are ratios of summed counters.
A metric whose denominator is zero is undefined (None), never coerced;
macro averages exclude undefined examples and report how many were
skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import mean
from typing import Iterable, Optional, Sequence

from .matching import folded_tokens, surface_matches
from .model import (
    EntityCounts,
    Example,
    MetricPair,
    MetricReport,
    SkippedCounts,
    sum_counts,
)


@dataclass(frozen=True)
class ExampleMetrics:
    """Per-example metric values; None marks an undefined value."""

    prec_s: Optional[float]
    prec_t: Optional[float]
    recall_t: Optional[float]
    f1_t: Optional[float]


@dataclass(frozen=True)
class GoldCorpusStats:
    """Entity statistics of the gold summaries measured against their sources."""

    examples: int
    avg_entities: float
    avg_matched_in_source: float
    micro_prec_s: Optional[float]


def count_matches(ex: Example) -> EntityCounts:
    """Count entity mentions and their source / gold-summary matches.

    Gold-summary mentions are counted regardless of the hypothesis; when
    the hypothesis is absent the hypothesis-side counters are zero and
    the result is flagged `hypothesis_absent`.
    """
    source_folded = folded_tokens(ex.source)
    n_t = len(ex.summary.entities)
    n_t_in_s = sum(
        1 for e in ex.summary.entities if surface_matches(e.surface, source_folded)
    )
    if ex.hypothesis is None:
        return EntityCounts(0, n_t, 0, 0, n_t_in_s, hypothesis_absent=True)
    gold_folded = folded_tokens(ex.summary)
    n_h = len(ex.hypothesis.entities)
    n_h_in_s = 0
    n_h_in_t = 0
    for e in ex.hypothesis.entities:
        if surface_matches(e.surface, source_folded):
            n_h_in_s += 1
        if surface_matches(e.surface, gold_folded):
            n_h_in_t += 1
    return EntityCounts(n_h, n_t, n_h_in_s, n_h_in_t, n_t_in_s)


def _f1(prec: Optional[float], recall: Optional[float]) -> Optional[float]:
    if prec is None or recall is None:
        return None
    if prec == 0.0 and recall == 0.0:
        return None
    return 2.0 * prec * recall / (prec + recall)


def compute_metrics(c: EntityCounts) -> ExampleMetrics:
    """Ratios of the counters; zero denominators yield None."""
    prec_s = c.n_h_in_s / c.n_h if c.n_h else None
    prec_t = c.n_h_in_t / c.n_h if c.n_h else None
    recall_t = c.n_h_in_t / c.n_t if c.n_t else None
    return ExampleMetrics(prec_s, prec_t, recall_t, _f1(prec_t, recall_t))


def _macro(values: list[Optional[float]]) -> tuple[Optional[float], int]:
    defined = [v for v in values if v is not None]
    skipped = len(values) - len(defined)
    return (mean(defined) if defined else None), skipped


def aggregate_corpus(counts: Sequence[EntityCounts]) -> MetricReport:
    """Aggregate per-example counts into macro and micro corpus metrics.

    Macro values average the defined per-example metrics; micro values
    are recomputed from the summed counters, so the micro F1 is the
    harmonic mean of micro precision and recall.
    """
    if not counts:
        raise ValueError("aggregate_corpus requires at least one example")
    per_example = [compute_metrics(c) for c in counts]
    total = sum_counts(counts)
    micro = compute_metrics(total)

    macro_prec_s, skip_prec_s = _macro([m.prec_s for m in per_example])
    macro_prec_t, skip_prec_t = _macro([m.prec_t for m in per_example])
    macro_recall_t, skip_recall_t = _macro([m.recall_t for m in per_example])
    macro_f1_t, skip_f1_t = _macro([m.f1_t for m in per_example])

    return MetricReport(
        prec_s=MetricPair(macro_prec_s, micro.prec_s),
        prec_t=MetricPair(macro_prec_t, micro.prec_t),
        recall_t=MetricPair(macro_recall_t, micro.recall_t),
        f1_t=MetricPair(macro_f1_t, micro.f1_t),
        counts=total,
        examples_total=len(counts),
        examples_skipped=SkippedCounts(
            prec_s=skip_prec_s,
            prec_t=skip_prec_t,
            recall_t=skip_recall_t,
            f1_t=skip_f1_t,
        ),
    )


def score_corpus(examples: Iterable[Example]) -> MetricReport:
    """Convenience wrapper: count every example, then aggregate."""
    return aggregate_corpus([count_matches(ex) for ex in examples])


def gold_corpus_stats(dataset: Sequence[Example]) -> GoldCorpusStats:
    """Treat each gold summary as the hypothesis against its source.

    Reports the mean gold-entity count, the mean matched count, and the
    micro fraction of gold mentions found in the source.
    """
    if not dataset:
        raise ValueError("gold_corpus_stats requires a non-empty dataset")
    counts = [count_matches(ex) for ex in dataset]
    total_t = sum(c.n_t for c in counts)
    total_t_in_s = sum(c.n_t_in_s for c in counts)
    return GoldCorpusStats(
        examples=len(dataset),
        avg_entities=mean(c.n_t for c in counts),
        avg_matched_in_source=mean(c.n_t_in_s for c in counts),
        micro_prec_s=(total_t_in_s / total_t) if total_t else None,
    )
