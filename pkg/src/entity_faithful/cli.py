"""Command-line surface tying the pipelines together.

Subcommands: annotate, score, stats, filter, prep-bio, prep-jaens,
parse-jaens.  Exit codes: 0 success, 1 fatal error, 2 usage error.
Identical inputs and flags produce byte-identical JSON outputs,
independent of the worker count.
"""

from __future__ import annotations

import argparse
import functools
import json
import multiprocessing
import os
import shlex
import subprocess
import sys
import tempfile
from typing import Callable, Iterable, Iterator, Optional

from .corpus_io import (
    CorpusError,
    LoadDiagnostics,
    annotation_records,
    dataset_record,
    dump_json,
    dump_json_file,
    iter_corpus,
    read_jsonl,
    report_to_dict,
)
from .filtering import filter_example
from .metrics import aggregate_corpus, count_matches, gold_corpus_stats
from .model import (
    BioLabel,
    Example,
    JaensConfig,
    RECOMMENDED_ALPHA,
    TrainingPrepMeta,
)
from .prep import bio_labels, build_jaens_target, parse_jaens_output

ANNOTATOR_ENV = "ENTITY_FAITHFUL_ANNOTATOR"


class CliError(Exception):
    """Fatal CLI problem reported on stderr with exit code 1."""


def _resolve_annotator(args) -> str:
    cmd = getattr(args, "annotator", None) or os.environ.get(ANNOTATOR_ENV)
    if not cmd:
        raise CliError(
            "no annotator command configured; run the `annotate` subcommand with "
            f"--annotator, or set {ANNOTATOR_ENV}, to produce an annotations file first"
        )
    return cmd


def _run_annotator(cmd: str, dataset_path: str, out_fh) -> None:
    with open(dataset_path, encoding="utf-8") as fin:
        proc = subprocess.run(shlex.split(cmd), stdin=fin, stdout=out_fh)
    if proc.returncode != 0:
        raise CliError(f"annotator command failed with exit code {proc.returncode}")


def _materialize_annotations(args, tmpdir: str) -> Optional[str]:
    """Return the annotations path, invoking the annotator when self-annotating."""
    if getattr(args, "self_annotate", False):
        cmd = _resolve_annotator(args)
        path = os.path.join(tmpdir, "annotations.jsonl")
        with open(path, "w", encoding="utf-8") as fh:
            _run_annotator(cmd, args.dataset, fh)
        return path
    if args.annotations is None:
        raise CliError(
            "no annotations file given; run the `annotate` subcommand first "
            "(or pass --self-annotate with a configured annotator)"
        )
    return args.annotations


def _examples(args, annotations_path: Optional[str],
              diagnostics: LoadDiagnostics) -> Iterator[Example]:
    return iter_corpus(args.dataset, annotations_path, args.strict, diagnostics)


def _map_examples(fn: Callable, examples: Iterable[Example], workers: int) -> Iterator:
    """Order-preserving map, optionally fanned out to a process pool.

    Results are reduced in input order, so output never depends on the
    worker count.
    """
    if workers <= 1:
        yield from map(fn, examples)
        return
    with multiprocessing.Pool(workers) as pool:
        yield from pool.imap(fn, examples, chunksize=16)


def _emit_diagnostics(diag: LoadDiagnostics) -> None:
    for msg in diag.messages:
        print(f"warning: {msg}", file=sys.stderr)


def _write_or_print(payload: dict, out: Optional[str]) -> None:
    if out:
        dump_json_file(payload, out)
    else:
        dump_json(payload, sys.stdout)


def _filtered_examples(examples: Iterable[Example]) -> Iterator[Example]:
    for ex in examples:
        outcome = filter_example(ex)
        if outcome.example_dropped:
            continue
        yield Example(ex.id, ex.source, outcome.rewritten_summary, ex.hypothesis)


def _filter_one(ex: Example) -> tuple[int, int, Optional[Example]]:
    """Worker task: (summary sentences before, sentences dropped, kept example)."""
    outcome = filter_example(ex)
    kept = (
        None if outcome.example_dropped
        else Example(ex.id, ex.source, outcome.rewritten_summary, ex.hypothesis)
    )
    return len(ex.summary.sentences), len(outcome.dropped_sentences), kept


def _bio_record(ex: Example) -> dict:
    return {"id": ex.id, "labels": list(bio_labels(ex).labels)}


def _jaens_record(ex: Example, cfg: JaensConfig) -> dict:
    return {"id": ex.id, "target": build_jaens_target(ex, cfg)}


def cmd_annotate(args) -> int:
    cmd = _resolve_annotator(args)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            _run_annotator(cmd, args.dataset, fh)
    else:
        _run_annotator(cmd, args.dataset, sys.stdout)
    return 0


def cmd_score(args) -> int:
    diag = LoadDiagnostics()
    with tempfile.TemporaryDirectory() as tmpdir:
        annotations = _materialize_annotations(args, tmpdir)
        examples = _examples(args, annotations, diag)
        if args.filter_test:
            examples = _filtered_examples(examples)
        counts = list(_map_examples(count_matches, examples, args.workers))
    _emit_diagnostics(diag)
    if not counts:
        raise CliError("no examples survived loading; nothing to score")
    report = aggregate_corpus(counts)
    _write_or_print(report_to_dict(report), args.out)
    return 0


def cmd_stats(args) -> int:
    diag = LoadDiagnostics()
    with tempfile.TemporaryDirectory() as tmpdir:
        annotations = _materialize_annotations(args, tmpdir)
        dataset = list(_examples(args, annotations, diag))
    _emit_diagnostics(diag)
    if not dataset:
        raise CliError("no examples survived loading; nothing to report")
    stats = gold_corpus_stats(dataset)
    micro = stats.micro_prec_s
    payload = {
        "examples": stats.examples,
        "avg_entities": stats.avg_entities,
        "avg_matched_in_source": stats.avg_matched_in_source,
        "prec_s": {
            "micro": micro,
            "micro_pct": None if micro is None else round(micro * 100.0, 1),
        },
    }
    _write_or_print(payload, args.out)
    return 0


def cmd_filter(args) -> int:
    diag = LoadDiagnostics()
    with tempfile.TemporaryDirectory() as tmpdir:
        annotations = _materialize_annotations(args, tmpdir)
        before = 0
        after = 0
        sentences_before = 0
        sentences_after = 0
        sentences_dropped = 0
        ann_out = args.annotations_out
        with open(args.out, "w", encoding="utf-8") as dfh:
            afh = open(ann_out, "w", encoding="utf-8") if ann_out else None
            try:
                results = _map_examples(_filter_one, _examples(args, annotations, diag),
                                        args.workers)
                for n_before, n_dropped, kept in results:
                    before += 1
                    sentences_before += n_before
                    sentences_dropped += n_dropped
                    if kept is None:
                        continue
                    after += 1
                    sentences_after += len(kept.summary.sentences)
                    dfh.write(_jsonl_line(dataset_record(kept)))
                    if afh is not None:
                        for rec in annotation_records(kept):
                            afh.write(_jsonl_line(rec))
            finally:
                if afh is not None:
                    afh.close()
    _emit_diagnostics(diag)
    if before == 0:
        raise CliError("no examples survived loading; nothing to filter")
    payload = {
        "examples_before": before,
        "examples_after": after,
        "examples_dropped": before - after,
        "avg_sentences_before": sentences_before / before,
        "avg_sentences_after": (sentences_after / after) if after else 0.0,
        "sentences_dropped": sentences_dropped,
    }
    if args.stats_out:
        dump_json_file(payload, args.stats_out)
    else:
        _write_or_print(payload, None)
    return 0


def _jsonl_line(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False) + "\n"


def _prep_meta(args, cfg: JaensConfig) -> dict:
    name = args.dataset_name
    alpha = args.alpha if args.alpha is not None else RECOMMENDED_ALPHA.get(name, 0.3)
    meta = TrainingPrepMeta(alpha=alpha, dataset_name=name)
    return {
        "alpha": meta.alpha,
        "dataset_name": meta.dataset_name,
        "label_encoding": {"B": BioLabel.B, "I": BioLabel.I, "O": BioLabel.O},
        "entity_delimiter": cfg.entity_delimiter,
        "boundary_token": cfg.boundary_token,
        "dedupe": cfg.dedupe,
    }


def _jaens_config(args) -> JaensConfig:
    return JaensConfig(
        entity_delimiter=args.entity_delimiter,
        boundary_token=args.boundary_token,
        dedupe=not getattr(args, "no_dedupe", False),
    )


def cmd_prep_bio(args) -> int:
    diag = LoadDiagnostics()
    cfg = _jaens_config(args)
    with tempfile.TemporaryDirectory() as tmpdir:
        annotations = _materialize_annotations(args, tmpdir)
        with open(args.out, "w", encoding="utf-8") as fh:
            for rec in _map_examples(_bio_record, _examples(args, annotations, diag),
                                     args.workers):
                fh.write(_jsonl_line(rec))
    _emit_diagnostics(diag)
    if args.meta_out:
        dump_json_file(_prep_meta(args, cfg), args.meta_out)
    return 0


def cmd_prep_jaens(args) -> int:
    diag = LoadDiagnostics()
    cfg = _jaens_config(args)
    with tempfile.TemporaryDirectory() as tmpdir:
        annotations = _materialize_annotations(args, tmpdir)
        task = functools.partial(_jaens_record, cfg=cfg)
        with open(args.out, "w", encoding="utf-8") as fh:
            for rec in _map_examples(task, _examples(args, annotations, diag),
                                     args.workers):
                fh.write(_jsonl_line(rec))
    _emit_diagnostics(diag)
    if args.meta_out:
        dump_json_file(_prep_meta(args, cfg), args.meta_out)
    return 0


def cmd_parse_jaens(args) -> int:
    cfg = JaensConfig(entity_delimiter=args.entity_delimiter,
                      boundary_token=args.boundary_token)
    diag = LoadDiagnostics()
    with open(args.out, "w", encoding="utf-8") as fh:
        for lineno, obj in read_jsonl(args.input, diag, args.strict):
            text = obj.get("target", obj.get("text"))
            if not isinstance(text, str):
                diag.warn(f"{args.input}:{lineno}: no 'target' or 'text' string field")
                continue
            parsed = parse_jaens_output(text, cfg)
            fh.write(_jsonl_line({
                "id": obj.get("id"),
                "entities": list(parsed.entities),
                "summary": parsed.summary,
                "missing_boundary": parsed.missing_boundary,
            }))
    _emit_diagnostics(diag)
    return 0


def _add_io_flags(p: argparse.ArgumentParser, workers: bool = True) -> None:
    p.add_argument("--dataset", required=True, help="dataset JSONL path")
    p.add_argument("--annotations", help="annotations JSONL path")
    p.add_argument("--self-annotate", action="store_true",
                   help="invoke the configured annotator instead of reading a file")
    p.add_argument("--annotator", help=f"annotator command (default: ${ANNOTATOR_ENV})")
    p.add_argument("--strict", action="store_true",
                   help="escalate per-line rejections to fatal errors")
    if workers:
        p.add_argument("--workers", type=int, default=1,
                       help="worker processes for per-example computation")


def _add_prep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", required=True, help="output JSONL path")
    p.add_argument("--meta-out", help="metadata JSON path")
    p.add_argument("--dataset-name", default="", help="dataset name recorded in metadata")
    p.add_argument("--alpha", type=float, default=None,
                   help="multi-task weight recorded in metadata")
    _add_jaens_flags(p)


def _add_jaens_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--entity-delimiter", default=" ; ")
    p.add_argument("--boundary-token", default="<ent-summary-sep>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entity-faithful",
        description="Entity-level factual consistency metrics and data pipelines "
                    "for abstractive summarization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="run the external annotator over a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", help="annotations JSONL path (default: stdout)")
    p.add_argument("--annotator", help=f"annotator command (default: ${ANNOTATOR_ENV})")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("score", help="score hypotheses against sources and gold summaries")
    _add_io_flags(p)
    p.add_argument("--out", help="report JSON path (default: stdout)")
    p.add_argument("--filter-test", action="store_true",
                   help="apply entity-based filtering to the corpus before scoring")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("stats", help="gold-summary entity statistics vs. sources")
    _add_io_flags(p, workers=False)
    p.add_argument("--out", help="stats JSON path (default: stdout)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("filter", help="drop gold sentences with unmatched entities")
    _add_io_flags(p)
    p.add_argument("--out", required=True, help="filtered dataset JSONL path")
    p.add_argument("--annotations-out",
                   help="annotations JSONL for the filtered corpus")
    p.add_argument("--stats-out", help="filter statistics JSON path (default: stdout)")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("prep-bio", help="emit B/I/O labels over source tokens")
    _add_io_flags(p)
    _add_prep_flags(p)
    p.set_defaults(func=cmd_prep_bio)

    p = sub.add_parser("prep-jaens", help="emit joint entity+summary target sequences")
    _add_io_flags(p)
    _add_prep_flags(p)
    p.add_argument("--no-dedupe", action="store_true",
                   help="keep repeated salient entities in targets")
    p.set_defaults(func=cmd_prep_jaens)

    p = sub.add_parser("parse-jaens", help="parse joint-format model outputs")
    p.add_argument("--input", required=True, help="JSONL with a 'target' or 'text' field")
    p.add_argument("--out", required=True, help="parsed JSONL path")
    p.add_argument("--strict", action="store_true")
    _add_jaens_flags(p)
    p.set_defaults(func=cmd_parse_jaens)

    return parser


def run_cli(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    try:
        return args.func(args)
    except (CliError, CorpusError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())
