"""Training-data preparation.

Two artifacts are produced from (source, gold summary) pairs: per-token
B/I/O labels marking every source occurrence of a summary-worthy entity,
and joint target sequences of the form "entities <boundary> summary" with
the inverse parser needed to score such model outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .matching import best_ngram_windows, fold, folded_tokens, tokenize
from .model import (
    BioLabel,
    BioLabelSequence,
    EntitySpan,
    Example,
    JaensConfig,
    Span,
)


@dataclass(frozen=True)
class SalientEntity:
    """One gold mention matched in the source, with every occurrence located."""

    mention: EntitySpan
    matched_ngram: tuple[str, ...]
    occurrences: tuple[Span, ...]  # character spans in the source text
    token_windows: tuple[tuple[int, int], ...]  # [start, end) source-token ranges


@dataclass(frozen=True)
class SalientEntitySet:
    """Summary-worthy entities ordered by first appearance in the gold summary."""

    entities: tuple[SalientEntity, ...]
    omitted: int  # gold mentions with no source match (unfiltered data only)


def salient_entities(ex: Example, dedupe: bool = True) -> SalientEntitySet:
    """Gold-summary mentions that match the source, in summary order.

    With dedupe on, mentions whose case-folded matched n-grams coincide
    collapse to the first.  Unmatched mentions are omitted and counted;
    on a filtered corpus the omitted count is always zero.
    """
    source_folded = folded_tokens(ex.source)
    found: list[SalientEntity] = []
    seen: set[tuple[str, ...]] = set()
    omitted = 0
    for ent in sorted(ex.summary.entities, key=lambda e: (e.span.start, e.span.end)):
        spans = tokenize(ent.surface)
        tokens = [ent.surface[s.start:s.end] for s in spans]
        gram, starts = best_ngram_windows(tokens, source_folded) if tokens else (None, [])
        if gram is None:
            omitted += 1
            continue
        key = tuple(fold(t) for t in gram)
        if dedupe:
            if key in seen:
                continue
            seen.add(key)
        n = len(gram)
        occurrences = tuple(
            Span(ex.source.tokens[j].start, ex.source.tokens[j + n - 1].end)
            for j in starts
        )
        windows = tuple((j, j + n) for j in starts)
        found.append(SalientEntity(ent, gram, occurrences, windows))
    return SalientEntitySet(tuple(found), omitted)


def bio_labels(ex: Example, salient: Optional[SalientEntitySet] = None) -> BioLabelSequence:
    """Label every source token: B/I over salient-entity occurrences, O elsewhere.

    Every occurrence of every matched n-gram is labeled.  Overlapping
    claims are resolved earlier-start first, then longer; a claim that
    touches an already-labeled token is skipped whole, so each B..I run
    decodes back to exactly one matched n-gram.
    """
    if salient is None:
        salient = salient_entities(ex)
    claims = sorted(
        {w for s in salient.entities for w in s.token_windows},
        key=lambda w: (w[0], w[0] - w[1]),
    )
    labels = [BioLabel.O] * len(ex.source.tokens)
    for start, end in claims:
        if any(labels[k] != BioLabel.O for k in range(start, end)):
            continue
        labels[start] = BioLabel.B
        for k in range(start + 1, end):
            labels[k] = BioLabel.I
    return BioLabelSequence(tuple(labels))


def build_jaens_target(ex: Example, cfg: JaensConfig = JaensConfig()) -> str:
    """Serialize salient entity surfaces, the boundary token, then the summary.

    The boundary token must not occur in any emitted entity surface or in
    the summary text; collisions raise ValueError naming the offender.
    """
    sal = salient_entities(ex, dedupe=cfg.dedupe)
    surfaces = [s.mention.surface for s in sal.entities]
    for surface in surfaces:
        if cfg.boundary_token in surface:
            raise ValueError(
                f"boundary token {cfg.boundary_token!r} occurs in entity {surface!r}"
            )
    if cfg.boundary_token in ex.summary.text:
        raise ValueError(
            f"boundary token {cfg.boundary_token!r} occurs in summary {ex.summary.text!r}"
        )
    prefix = cfg.entity_delimiter.join(surfaces)
    pieces = [p for p in (prefix, cfg.boundary_token, ex.summary.text) if p]
    return " ".join(pieces)


@dataclass(frozen=True)
class ParsedJaens:
    """Entities and summary recovered from a joint-format model output."""

    entities: tuple[str, ...]
    summary: str
    missing_boundary: bool = False


def parse_jaens_output(text: str, cfg: JaensConfig = JaensConfig()) -> ParsedJaens:
    """Invert the joint target format.

    Splits at the first boundary-token occurrence; the prefix is split on
    the entity delimiter with whitespace trimmed and empties dropped.
    Without a boundary token the whole text is returned as the summary,
    flagged `missing_boundary`.
    """
    idx = text.find(cfg.boundary_token)
    if idx < 0:
        return ParsedJaens((), text, missing_boundary=True)
    prefix = text[:idx]
    summary = text[idx + len(cfg.boundary_token):]
    entities = tuple(
        t for t in (p.strip() for p in prefix.split(cfg.entity_delimiter)) if t
    )
    return ParsedJaens(entities, summary.strip())
