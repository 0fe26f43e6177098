"""Entity-based corpus filtering.

Gold-summary sentences containing a mention with no source match are
discarded; examples whose summary loses every sentence are removed.
The surviving corpus is guaranteed hallucination-free: every remaining
gold mention matches its source, so the gold micro source-precision of
the filtered corpus is exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import mean
from typing import Iterable, Optional, Sequence

from .matching import folded_tokens, surface_matches
from .model import AnnotatedText, EntitySpan, Example, Span, sentence_index_for

_TERMINALS = ".!?"


def _is_sentence_break(text: str, i: int) -> bool:
    # Break after a terminal char followed by whitespace + uppercase, or at end.
    j = i + 1
    n = len(text)
    saw_space = False
    while j < n and text[j].isspace():
        saw_space = True
        j += 1
    if j >= n:
        return True
    return saw_space and text[j].isupper()


def segment_sentences(
    text: str, supplied: Optional[Sequence[Span]] = None
) -> tuple[Span, ...]:
    """Sentence spans for a text.

    Supplied annotation spans win verbatim.  The fallback splitter breaks
    after '.', '!' or '?' followed by whitespace and an uppercase letter
    (or end of text); it is approximate by design, so upstream sentence
    annotations should be preferred when available.  Spans cover every
    non-whitespace character.
    """
    if supplied is not None:
        return tuple(supplied)
    spans: list[Span] = []
    start: Optional[int] = None
    last_nonspace = -1
    for i, ch in enumerate(text):
        if ch.isspace():
            continue
        if start is None:
            start = i
        last_nonspace = i
        if ch in _TERMINALS and _is_sentence_break(text, i):
            spans.append(Span(start, i + 1))
            start = None
    if start is not None:
        spans.append(Span(start, last_nonspace + 1))
    return tuple(spans)


@dataclass(frozen=True)
class FilterOutcome:
    """Result of filtering one example's gold summary."""

    kept_sentences: tuple[Span, ...]
    dropped_sentences: tuple[tuple[Span, tuple[str, ...]], ...]
    example_dropped: bool
    rewritten_summary: Optional[AnnotatedText]


@dataclass(frozen=True)
class FilterStats:
    """Corpus size and summary-length statistics before and after filtering."""

    examples_before: int
    examples_after: int
    avg_sentences_before: float
    avg_sentences_after: float
    sentences_dropped: int


def _assign_by_sentence(
    sentences: Sequence[Span], spans: Iterable[Span]
) -> list[Optional[int]]:
    return [sentence_index_for(sentences, s.start) for s in spans]


def _rebuild_summary(
    summary: AnnotatedText, kept: Sequence[Span], sentences: Sequence[Span]
) -> AnnotatedText:
    """Concatenate kept sentences with single spaces and re-offset all spans."""
    keep_set = {(s.start, s.end) for s in kept}
    pieces: list[str] = []
    new_sents: list[Span] = []
    deltas: dict[int, int] = {}  # original sentence index -> offset delta
    cursor = 0
    for idx, s in enumerate(sentences):
        if (s.start, s.end) not in keep_set:
            continue
        if pieces:
            cursor += 1  # the joining space
        pieces.append(summary.text[s.start:s.end])
        new_sents.append(Span(cursor, cursor + (s.end - s.start)))
        deltas[idx] = cursor - s.start
        cursor += s.end - s.start
    new_text = " ".join(pieces)

    def remap(span: Span) -> Optional[Span]:
        idx = sentence_index_for(sentences, span.start)
        if idx is None or idx not in deltas:
            return None
        sent = sentences[idx]
        end = min(span.end, sent.end)  # clamp straddlers at the sentence edge
        return Span(span.start + deltas[idx], end + deltas[idx])

    new_tokens = [m for m in (remap(t) for t in summary.tokens) if m is not None]
    new_entities = []
    for ent in summary.entities:
        m = remap(ent.span)
        if m is None:
            continue
        new_entities.append(EntitySpan(m, new_text[m.start:m.end], ent.etype))
    return AnnotatedText(new_text, tuple(new_tokens), tuple(new_sents), tuple(new_entities))


def filter_example(ex: Example) -> FilterOutcome:
    """Drop gold-summary sentences containing unmatched entity mentions.

    A sentence is discarded iff at least one mention assigned to it (by
    the sentence containing its start) has no source match.  The source
    and hypothesis are never modified.
    """
    summary = ex.summary
    sentences = summary.sentences
    if not sentences:
        return FilterOutcome((), (), True, None)
    source_folded = folded_tokens(ex.source)
    offending: dict[int, list[str]] = {}
    for ent in summary.entities:
        if surface_matches(ent.surface, source_folded):
            continue
        idx = sentence_index_for(sentences, ent.span.start)
        offending.setdefault(idx, []).append(ent.surface)
    kept = tuple(s for i, s in enumerate(sentences) if i not in offending)
    dropped = tuple(
        (s, tuple(offending[i])) for i, s in enumerate(sentences) if i in offending
    )
    if not kept:
        return FilterOutcome((), dropped, True, None)
    if not dropped:
        return FilterOutcome(kept, (), False, summary)
    return FilterOutcome(kept, dropped, False, _rebuild_summary(summary, kept, sentences))


def filter_corpus(dataset: Sequence[Example]) -> tuple[list[Example], FilterStats]:
    """Filter every example; drop pairs whose summary becomes empty.

    Surviving examples keep their order; sources and hypotheses pass
    through untouched.
    """
    if not dataset:
        raise ValueError("filter_corpus requires a non-empty dataset")
    survivors: list[Example] = []
    sentences_dropped = 0
    for ex in dataset:
        outcome = filter_example(ex)
        sentences_dropped += len(outcome.dropped_sentences)
        if outcome.example_dropped:
            continue
        survivors.append(
            Example(ex.id, ex.source, outcome.rewritten_summary, ex.hypothesis)
        )
    stats = FilterStats(
        examples_before=len(dataset),
        examples_after=len(survivors),
        avg_sentences_before=mean(len(ex.summary.sentences) for ex in dataset),
        avg_sentences_after=(
            mean(len(ex.summary.sentences) for ex in survivors) if survivors else 0.0
        ),
        sentences_dropped=sentences_dropped,
    )
    return survivors, stats
