"""Core domain types shared by every pipeline stage.

All types are immutable after construction; character offsets index
Unicode scalar values of the owning text, never bytes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence


class EntityType(Enum):
    """Named-entity categories the toolkit scores.

    Raw NER labels outside this whitelist (dates, times, numerals, ...)
    are dropped at ingestion with a counted warning, never kept.
    """

    PERSON = "PERSON"
    FAC = "FAC"
    GPE = "GPE"
    ORG = "ORG"
    NORP = "NORP"
    LOC = "LOC"
    EVENT = "EVENT"

    @classmethod
    def parse(cls, label: str) -> "EntityType":
        """Return the matching type or raise ValueError for labels outside the whitelist."""
        try:
            return cls(label)
        except ValueError:
            raise ValueError(f"entity type {label!r} is not in the whitelist "
                             f"{sorted(t.value for t in cls)}") from None


ENTITY_TYPE_WHITELIST = frozenset(t.value for t in EntityType)


@dataclass(frozen=True, order=True)
class Span:
    """Half-open character range [start, end) into an owning text."""

    start: int
    end: int

    def slice(self, text: str) -> str:
        return text[self.start:self.end]

    def __len__(self) -> int:
        return max(0, self.end - self.start)


@dataclass(frozen=True)
class EntitySpan:
    """One entity mention: its span, surface string, and type."""

    span: Span
    surface: str
    etype: EntityType


def _spans(items: Iterable) -> tuple:
    return tuple(items)


@dataclass(frozen=True)
class AnnotatedText:
    """Raw text plus token, sentence, and entity spans.

    Construction never validates; `validate_example` reports invariant
    violations as findings so that malformed inputs can be diagnosed
    rather than crashing ingestion.
    """

    text: str
    tokens: tuple[Span, ...] = ()
    sentences: tuple[Span, ...] = ()
    entities: tuple[EntitySpan, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", _spans(self.tokens))
        object.__setattr__(self, "sentences", _spans(self.sentences))
        object.__setattr__(self, "entities", _spans(self.entities))

    def token_text(self, span: Span) -> str:
        return self.text[span.start:span.end]

    def token_strings(self) -> list[str]:
        return [self.text[s.start:s.end] for s in self.tokens]


@dataclass(frozen=True)
class Example:
    """A source document with its gold summary and an optional model hypothesis."""

    id: str
    source: AnnotatedText
    summary: AnnotatedText
    hypothesis: Optional[AnnotatedText] = None


@dataclass(frozen=True)
class EntityCounts:
    """Per-example entity-mention counters.

    n_h / n_t count hypothesis / gold-summary mentions; the *_in_* fields
    count mentions that found a match in the source or gold summary.
    """

    n_h: int
    n_t: int
    n_h_in_s: int
    n_h_in_t: int
    n_t_in_s: int
    hypothesis_absent: bool = False

    def __post_init__(self) -> None:
        if not (0 <= self.n_h_in_s <= self.n_h):
            raise ValueError(f"n_h_in_s={self.n_h_in_s} outside [0, n_h={self.n_h}]")
        if not (0 <= self.n_h_in_t <= self.n_h):
            raise ValueError(f"n_h_in_t={self.n_h_in_t} outside [0, n_h={self.n_h}]")
        if not (0 <= self.n_t_in_s <= self.n_t):
            raise ValueError(f"n_t_in_s={self.n_t_in_s} outside [0, n_t={self.n_t}]")


def sum_counts(counts: Iterable[EntityCounts]) -> EntityCounts:
    """Sum the five counters across examples (micro-aggregation state)."""
    n_h = n_t = n_h_in_s = n_h_in_t = n_t_in_s = 0
    for c in counts:
        n_h += c.n_h
        n_t += c.n_t
        n_h_in_s += c.n_h_in_s
        n_h_in_t += c.n_h_in_t
        n_t_in_s += c.n_t_in_s
    return EntityCounts(n_h, n_t, n_h_in_s, n_h_in_t, n_t_in_s)


@dataclass(frozen=True)
class MetricPair:
    """Macro and micro value of one metric; None marks an undefined value."""

    macro: Optional[float]
    micro: Optional[float]


@dataclass(frozen=True)
class SkippedCounts:
    """How many examples were excluded from each macro average (undefined denominator)."""

    prec_s: int = 0
    prec_t: int = 0
    recall_t: int = 0
    f1_t: int = 0


@dataclass(frozen=True)
class MetricReport:
    """Corpus-level metric report with the aggregate counters it was computed from."""

    prec_s: MetricPair
    prec_t: MetricPair
    recall_t: MetricPair
    f1_t: MetricPair
    counts: EntityCounts
    examples_total: int
    examples_skipped: SkippedCounts


class BioLabel:
    """Integer encoding of the B/I/O alphabet used in serialized label files."""

    B = 0
    I = 1
    O = 2

    SYMBOLS = {B: "B", I: "I", O: "O"}


@dataclass(frozen=True)
class BioLabelSequence:
    """Per-source-token labels marking summary-worthy entity occurrences."""

    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        prev = BioLabel.O
        for i, lab in enumerate(self.labels):
            if lab not in (BioLabel.B, BioLabel.I, BioLabel.O):
                raise ValueError(f"label {lab!r} at position {i} is not in {{0, 1, 2}}")
            if lab == BioLabel.I and (i == 0 or prev == BioLabel.O):
                raise ValueError(f"orphan I label at position {i}")
            prev = lab

    def symbols(self) -> list[str]:
        return [BioLabel.SYMBOLS[lab] for lab in self.labels]

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class JaensConfig:
    """Serialization settings for joint entity-then-summary target sequences."""

    entity_delimiter: str = " ; "
    boundary_token: str = "<ent-summary-sep>"
    dedupe: bool = True

    def __post_init__(self) -> None:
        if not self.boundary_token:
            raise ValueError("boundary_token must be non-empty")


#: Multi-task loss weights that worked best per dataset, exported as metadata
#: for downstream trainers; this toolkit performs no training itself.
RECOMMENDED_ALPHA = {"newsroom": 0.3, "cnndm": 0.3, "xsum": 0.15}


@dataclass(frozen=True)
class TrainingPrepMeta:
    """Metadata emitted alongside prepared training data."""

    alpha: float
    dataset_name: str

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha={self.alpha} outside [0, 1]")
        if not (0.1 <= self.alpha <= 0.5):
            warnings.warn(
                f"alpha={self.alpha} is outside the recommended range [0.1, 0.5]",
                stacklevel=2,
            )


@dataclass(frozen=True)
class ValidationFinding:
    """One validation error or warning, anchored to a field and offset."""

    severity: str  # "error" | "warning"
    field: str  # e.g. "summary.entities[2]"
    message: str
    offset: Optional[int] = None

    def __str__(self) -> str:
        loc = f" @ {self.offset}" if self.offset is not None else ""
        return f"{self.severity}: {self.field}{loc}: {self.message}"


def sentence_index_for(sentences: Sequence[Span], pos: int) -> Optional[int]:
    """Index of the sentence a character position belongs to.

    Assignment is total over non-empty sentence lists: positions before the
    first sentence map to sentence 0, positions after a sentence's span map
    to the last sentence starting at or before them.
    """
    if not sentences:
        return None
    idx = 0
    for i, s in enumerate(sentences):
        if s.start <= pos:
            idx = i
        else:
            break
    return idx


def _check_span_list(text: str, kind: str, prefix: str,
                     spans: Sequence[Span], findings: list[ValidationFinding]) -> None:
    prev_end = None
    for i, s in enumerate(spans):
        where = f"{prefix}.{kind}[{i}]"
        if not (0 <= s.start < s.end <= len(text)):
            findings.append(ValidationFinding(
                "error", where,
                f"span ({s.start}, {s.end}) outside [0, {len(text)}) or empty",
                offset=s.start))
            continue
        if prev_end is not None and s.start < prev_end:
            findings.append(ValidationFinding(
                "error", where,
                f"span ({s.start}, {s.end}) overlaps or precedes previous end {prev_end}",
                offset=s.start))
        prev_end = s.end


def _check_annotated(prefix: str, at: AnnotatedText,
                     findings: list[ValidationFinding]) -> None:
    _check_span_list(at.text, "tokens", prefix, at.tokens, findings)
    _check_span_list(at.text, "sentences", prefix, at.sentences, findings)
    for i, ent in enumerate(at.entities):
        where = f"{prefix}.entities[{i}]"
        s = ent.span
        if not (0 <= s.start < s.end <= len(at.text)):
            findings.append(ValidationFinding(
                "error", where,
                f"entity span ({s.start}, {s.end}) outside [0, {len(at.text)})",
                offset=s.start))
            continue
        actual = at.text[s.start:s.end]
        if actual != ent.surface:
            findings.append(ValidationFinding(
                "error", where,
                f"surface {ent.surface!r} != text slice {actual!r}",
                offset=s.start))
        container = None
        for sent in at.sentences:
            if sent.start <= s.start < sent.end:
                container = sent
                break
        if container is None:
            if at.sentences:
                findings.append(ValidationFinding(
                    "warning", where,
                    "entity start lies outside every sentence span; "
                    "assigned to the nearest preceding sentence",
                    offset=s.start))
        elif s.end > container.end:
            findings.append(ValidationFinding(
                "warning", where,
                f"entity straddles a sentence boundary at {container.end}; "
                "assigned to the sentence containing its start",
                offset=s.start))


def validate_example(ex: Example) -> list[ValidationFinding]:
    """Check every type invariant of an Example; findings are data, not failures.

    Returns an empty list iff the example is well-formed.  The result is
    deterministic and ordered by field (source, summary, hypothesis) then
    by annotation index.
    """
    findings: list[ValidationFinding] = []
    if not ex.id:
        findings.append(ValidationFinding("error", "id", "example id is empty"))
    _check_annotated("source", ex.source, findings)
    _check_annotated("summary", ex.summary, findings)
    if ex.hypothesis is not None:
        _check_annotated("hypothesis", ex.hypothesis, findings)
    return findings
