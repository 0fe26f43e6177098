"""JSONL corpus ingestion and serialization.

Two line-delimited JSON files describe a corpus:

dataset file     {"id", "source", "summary", "hypothesis"?}
annotations file {"id", "field", "entities": [{"text", "type", "start", "end"}],
                  "sentences"?: [{"start", "end"}], "tokens"?: [{"start", "end"}]}

Annotation lines starting with '#' are comments (annotator version
headers) and are skipped.  Character offsets index Unicode scalar values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Optional, Sequence

from .filtering import segment_sentences
from .matching import tokenize
from .model import (
    AnnotatedText,
    EntitySpan,
    EntityType,
    Example,
    MetricReport,
    Span,
    validate_example,
)

FIELDS = ("source", "summary", "hypothesis")


class CorpusError(Exception):
    """Fatal corpus-format problem (bad file, duplicate id, strict-mode rejection)."""


@dataclass
class LoadDiagnostics:
    """Mutable accumulator of non-fatal problems met while loading a corpus."""

    rejected_examples: int = 0
    bad_lines: int = 0  # unparseable JSON lines skipped
    dropped_entities: int = 0  # entity type outside the whitelist
    orphan_annotations: int = 0  # annotation id/field never claimed by a record
    missing_annotations: int = 0  # expected (id, field) never seen
    messages: list[str] = field(default_factory=list)

    def warn(self, message: str) -> None:
        self.messages.append(message)


def read_jsonl(
    path,
    diagnostics: Optional[LoadDiagnostics] = None,
    strict: bool = False,
) -> Iterator[tuple[int, dict]]:
    """Yield (line_number, record) for each non-comment, non-blank line.

    Unparseable lines raise CorpusError when strict or when there is no
    diagnostics sink; otherwise they are counted and skipped.
    """
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                msg = f"{path}:{lineno}: unparseable JSON: {e}"
                if strict or diagnostics is None:
                    raise CorpusError(msg) from None
                diagnostics.bad_lines += 1
                diagnostics.warn(msg)
                continue
            yield lineno, obj


def write_jsonl(path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def dump_json(obj, fh: IO[str]) -> None:
    """Deterministic JSON rendering: sorted keys, two-space indent, newline at end."""
    fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2) + "\n")


def dump_json_file(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        dump_json(obj, fh)


def _span_from(obj: dict) -> Span:
    return Span(int(obj["start"]), int(obj["end"]))


def build_annotated_text(
    text: str,
    entities: Sequence[dict] = (),
    sentences: Optional[Sequence[Span]] = None,
    tokens: Optional[Sequence[Span]] = None,
    diagnostics: Optional[LoadDiagnostics] = None,
    where: str = "",
) -> AnnotatedText:
    """Assemble an AnnotatedText, synthesizing missing token/sentence spans.

    Entity dicts use the annotation schema ({"text", "type", "start",
    "end"}); entities whose type is outside the whitelist are dropped
    with a counted warning.
    """
    kept: list[EntitySpan] = []
    for ent in entities:
        try:
            etype = EntityType.parse(str(ent["type"]))
        except ValueError:
            if diagnostics is not None:
                diagnostics.dropped_entities += 1
                diagnostics.warn(f"{where}: dropped entity with type {ent['type']!r}")
            continue
        kept.append(EntitySpan(_span_from(ent), str(ent["text"]), etype))
    toks = tuple(tokens) if tokens is not None else tokenize(text)
    sents = tuple(sentences) if sentences is not None else segment_sentences(text)
    return AnnotatedText(text, toks, sents, tuple(kept))


class _AnnotationStream:
    """Sequential reader over the annotations file with a lookahead buffer.

    When annotation order follows dataset order (the annotator contract)
    the buffer stays a handful of records deep, keeping memory bounded
    per record; arbitrary order degrades gracefully to buffering.
    """

    def __init__(self, path, diagnostics: Optional[LoadDiagnostics] = None,
                 strict: bool = False):
        self._iter = (
            read_jsonl(path, diagnostics, strict) if path is not None else iter(())
        )
        self._buffer: dict[tuple[str, str], dict] = {}
        self._done = path is None

    def _pull(self) -> bool:
        try:
            _, obj = next(self._iter)
        except StopIteration:
            self._done = True
            return False
        key = (str(obj.get("id")), str(obj.get("field")))
        self._buffer[key] = obj
        return True

    def take(self, rec_id: str, fieldname: str) -> Optional[dict]:
        key = (rec_id, fieldname)
        while key not in self._buffer and not self._done:
            self._pull()
        return self._buffer.pop(key, None)

    def leftover(self) -> int:
        while not self._done:
            self._pull()
        return len(self._buffer)


def _annotated_from(
    rec_id: str,
    fieldname: str,
    text: str,
    ann: Optional[dict],
    diagnostics: LoadDiagnostics,
) -> AnnotatedText:
    where = f"({rec_id}, {fieldname})"
    if ann is None:
        diagnostics.missing_annotations += 1
        diagnostics.warn(f"{where}: no annotation record; entities assumed empty")
        return build_annotated_text(text)
    sentences = (
        tuple(_span_from(s) for s in ann["sentences"])
        if ann.get("sentences") is not None else None
    )
    tokens = (
        tuple(_span_from(s) for s in ann["tokens"])
        if ann.get("tokens") is not None else None
    )
    return build_annotated_text(
        text, ann.get("entities", ()), sentences, tokens, diagnostics, where
    )


def iter_corpus(
    dataset_path,
    annotations_path=None,
    strict: bool = False,
    diagnostics: Optional[LoadDiagnostics] = None,
) -> Iterator[Example]:
    """Stream Examples from a dataset file joined with its annotations.

    Each example is validated; examples with validation errors are
    rejected with a line-numbered diagnostic (fatal under strict).
    Duplicate ids are always fatal.  Annotations never claimed by any
    record are counted as orphans at the end.
    """
    diag = diagnostics if diagnostics is not None else LoadDiagnostics()
    stream = _AnnotationStream(annotations_path, diag, strict)
    seen_ids: set[str] = set()
    for lineno, obj in read_jsonl(dataset_path, diag, strict):
        problems = [k for k in ("id", "source", "summary") if not isinstance(obj.get(k), str)]
        if problems:
            msg = f"{dataset_path}:{lineno}: missing or non-string field(s) {problems}"
            if strict:
                raise CorpusError(msg)
            diag.rejected_examples += 1
            diag.warn(msg)
            continue
        rec_id = obj["id"]
        if rec_id in seen_ids:
            raise CorpusError(f"{dataset_path}:{lineno}: duplicate id {rec_id!r}")
        seen_ids.add(rec_id)
        hyp_text = obj.get("hypothesis")
        ex = Example(
            id=rec_id,
            source=_annotated_from(rec_id, "source", obj["source"],
                                   stream.take(rec_id, "source"), diag),
            summary=_annotated_from(rec_id, "summary", obj["summary"],
                                    stream.take(rec_id, "summary"), diag),
            hypothesis=(
                _annotated_from(rec_id, "hypothesis", hyp_text,
                                stream.take(rec_id, "hypothesis"), diag)
                if isinstance(hyp_text, str) else None
            ),
        )
        findings = validate_example(ex)
        errors = [f for f in findings if f.severity == "error"]
        for f in findings:
            if f.severity == "warning":
                diag.warn(f"{dataset_path}:{lineno}: {f}")
        if errors:
            msg = f"{dataset_path}:{lineno}: rejected: " + "; ".join(str(e) for e in errors)
            if strict:
                raise CorpusError(msg)
            diag.rejected_examples += 1
            diag.warn(msg)
            continue
        yield ex
    orphans = stream.leftover()
    if orphans:
        diag.orphan_annotations += orphans
        diag.warn(f"{annotations_path}: {orphans} annotation record(s) reference unknown ids")


def load_corpus(
    dataset_path,
    annotations_path=None,
    strict: bool = False,
    diagnostics: Optional[LoadDiagnostics] = None,
) -> list[Example]:
    """Materialize iter_corpus into a list."""
    return list(iter_corpus(dataset_path, annotations_path, strict, diagnostics))


def dataset_record(ex: Example) -> dict:
    rec = {"id": ex.id, "source": ex.source.text, "summary": ex.summary.text}
    if ex.hypothesis is not None:
        rec["hypothesis"] = ex.hypothesis.text
    return rec


def annotation_records(ex: Example) -> list[dict]:
    records = []
    for fieldname in FIELDS:
        at: Optional[AnnotatedText] = getattr(ex, fieldname)
        if at is None:
            continue
        records.append({
            "id": ex.id,
            "field": fieldname,
            "entities": [
                {"text": e.surface, "type": e.etype.value,
                 "start": e.span.start, "end": e.span.end}
                for e in at.entities
            ],
            "sentences": [{"start": s.start, "end": s.end} for s in at.sentences],
            "tokens": [{"start": s.start, "end": s.end} for s in at.tokens],
        })
    return records


def write_corpus(examples: Iterable[Example], dataset_path, annotations_path) -> None:
    """Serialize examples to dataset and annotation JSONL files (inverse of load_corpus)."""
    with open(dataset_path, "w", encoding="utf-8") as dfh, \
            open(annotations_path, "w", encoding="utf-8") as afh:
        for ex in examples:
            dfh.write(json.dumps(dataset_record(ex), ensure_ascii=False) + "\n")
            for rec in annotation_records(ex):
                afh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def _pct(value: Optional[float]) -> Optional[float]:
    # Presentation-layer rounding, half-to-even, one decimal place.
    return None if value is None else round(value * 100.0, 1)


def report_to_dict(report: MetricReport) -> dict:
    """Report JSON payload: counters, fraction and percent metric values, skip counts."""
    metrics = {}
    for name in ("prec_s", "prec_t", "recall_t", "f1_t"):
        pair = getattr(report, name)
        metrics[name] = {
            "macro": pair.macro,
            "micro": pair.micro,
            "macro_pct": _pct(pair.macro),
            "micro_pct": _pct(pair.micro),
        }
    c = report.counts
    sk = report.examples_skipped
    return {
        "counts": {
            "n_h": c.n_h,
            "n_t": c.n_t,
            "n_h_in_s": c.n_h_in_s,
            "n_h_in_t": c.n_h_in_t,
            "n_t_in_s": c.n_t_in_s,
        },
        "metrics": metrics,
        "examples_total": report.examples_total,
        "examples_skipped": {
            "prec_s": sk.prec_s,
            "prec_t": sk.prec_t,
            "recall_t": sk.recall_t,
            "f1_t": sk.f1_t,
        },
    }
