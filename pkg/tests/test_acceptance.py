"""Acceptance suite: one test per release criterion.

Each test prints an `ACCEPTANCE PASS/FAIL: <criterion>` line (visible
with `pytest -s` or in captured output).  Tolerances and runtime budgets
are asserted, not advisory.
"""

import functools
import json
import os
import random
import time

import pytest

from entity_faithful import (
    AnnotatedText,
    BioLabel,
    EntityCounts,
    EntitySpan,
    JaensConfig,
    Span,
    aggregate_corpus,
    bio_labels,
    build_jaens_target,
    compute_metrics,
    count_matches,
    filter_corpus,
    find_match,
    gold_corpus_stats,
    parse_jaens_output,
    salient_entities,
    stopwords,
    tokenize,
)
from entity_faithful.cli import run_cli

from helpers import annotated, example
from oracles import brute_force_match
from test_filtering import make_corpus

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def criterion(name):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"\nACCEPTANCE FAIL: {name}")
                raise
            print(f"\nACCEPTANCE PASS: {name}")
        return wrapper
    return deco


def ent(surface, etype="PERSON"):
    from entity_faithful import EntityType
    return EntitySpan(Span(0, len(surface)), surface, EntityType.parse(etype))


@criterion("matching rule suite (shortening, case folding, stopword guard; < 1 s)")
def test_matching_rule_suite():
    t0 = time.monotonic()
    r = find_match(ent("Barack Obama"), annotated("President Obama spoke."))
    assert r.matched and r.matched_ngram == ("Obama",)
    r = find_match(ent("Harvard University", "ORG"), annotated("Harvard opened."))
    assert r.matched and r.matched_ngram == ("Harvard",)
    assert find_match(ent("UK", "GPE"), annotated("the uk votes")).matched
    assert find_match(ent("uk", "GPE"), annotated("the UK votes")).matched
    r = find_match(ent("The Order", "ORG"), annotated("the shipment arrived"))
    assert not r.matched
    elapsed = time.monotonic() - t0
    assert elapsed < 1.0, f"matching suite took {elapsed:.3f}s"


@criterion("oracle equivalence on 10,000 randomized instances (< 30 s)")
def test_oracle_equivalence_10k():
    stop = stopwords()
    vocab = ["Obama", "Barack", "the", "UK", "study", "Harvard", "of", "city",
             "New", "York", "bank", "in", "a", "Wales", "storm", "U.K."]
    rng = random.Random(20260808)
    t0 = time.monotonic()
    for i in range(10_000):
        n_ent = rng.randint(1, 6)
        n_hay = rng.randint(0, 30)
        ent_tokens = [rng.choice(vocab) for _ in range(n_ent)]
        hay_tokens = [rng.choice(vocab) for _ in range(n_hay)]
        if rng.random() < 0.5:
            ent_tokens = [t.upper() if rng.random() < 0.5 else t.lower()
                          for t in ent_tokens]
        surface = " ".join(ent_tokens)
        hay_text = " ".join(hay_tokens)
        hay = AnnotatedText(hay_text, tokenize(hay_text))
        got = find_match(ent(surface), hay)
        ent_toks = [surface[s.start:s.end] for s in tokenize(surface)]
        hay_toks = [hay_text[s.start:s.end] for s in hay.tokens]
        want_gram, want_starts = brute_force_match(ent_toks, hay_toks, stop)
        assert got.matched == (want_gram is not None), (surface, hay_text)
        if want_gram is not None:
            assert got.matched_ngram == want_gram, (surface, hay_text)
            n = len(want_gram)
            want_spans = tuple(Span(hay.tokens[j].start, hay.tokens[j + n - 1].end)
                               for j in want_starts)
            assert got.occurrences == want_spans, (surface, hay_text)
    elapsed = time.monotonic() - t0
    assert elapsed < 30.0, f"10k oracle comparison took {elapsed:.1f}s"


@criterion("metric correctness: fixture vs oracle at 1e-12, macro=micro on "
           "singletons, undefined handling")
def test_metric_correctness():
    # checked-in fixture vs the oracle-generated expected report
    with open(os.path.join(FIXTURES, "tenfold_expected_report.json"),
              encoding="utf-8") as fh:
        want = json.load(fh)
    from entity_faithful import load_corpus
    corpus = load_corpus(os.path.join(FIXTURES, "tenfold_dataset.jsonl"),
                         os.path.join(FIXTURES, "tenfold_annotations.jsonl"))
    counts = [count_matches(ex) for ex in corpus]
    report = aggregate_corpus(counts)
    assert {
        "n_h": report.counts.n_h, "n_t": report.counts.n_t,
        "n_h_in_s": report.counts.n_h_in_s, "n_h_in_t": report.counts.n_h_in_t,
        "n_t_in_s": report.counts.n_t_in_s,
    } == want["counts"]
    for name in ("prec_s", "prec_t", "recall_t", "f1_t"):
        pair = getattr(report, name)
        for side in ("macro", "micro"):
            got_v = getattr(pair, side)
            want_v = want["metrics"][name][side]
            assert (got_v is None) == (want_v is None), name
            if got_v is not None:
                assert abs(got_v - want_v) <= 1e-12, (name, side)
        assert getattr(report.examples_skipped, name) == \
            want["examples_skipped"][name]

    # macro equals micro on singleton corpora
    rng = random.Random(5)
    for _ in range(100):
        n_h, n_t = rng.randint(0, 5), rng.randint(0, 5)
        c = EntityCounts(n_h, n_t, rng.randint(0, n_h),
                         rng.randint(0, min(n_h, n_t) if min(n_h, n_t) else 0),
                         rng.randint(0, n_t))
        single = aggregate_corpus([c])
        for name in ("prec_s", "prec_t", "recall_t", "f1_t"):
            pair = getattr(single, name)
            assert (pair.macro is None) == (pair.micro is None)
            if pair.macro is not None:
                assert abs(pair.macro - pair.micro) <= 1e-12

    # undefined-denominator handling, exactly as specified
    m = compute_metrics(EntityCounts(0, 0, 0, 0, 0))
    assert m.prec_s is None and m.prec_t is None and m.recall_t is None \
        and m.f1_t is None
    m = compute_metrics(EntityCounts(0, 2, 0, 0, 1))
    assert m.prec_s is None and m.prec_t is None and m.recall_t == 0.0
    m = compute_metrics(EntityCounts(2, 2, 1, 0, 0))
    assert m.f1_t is None  # prec_t = recall_t = 0
    degenerate = aggregate_corpus([EntityCounts(0, 0, 0, 0, 0)] * 4)
    assert degenerate.prec_s.macro is None and degenerate.prec_s.micro is None
    assert degenerate.examples_skipped.prec_s == 4


@criterion("filter guarantee: gold micro prec_s = 1.0 exactly and idempotence "
           "on 1,000 randomized corpora (< 60 s)")
def test_filter_guarantee_1000_corpora():
    rng = random.Random(31337)
    t0 = time.monotonic()
    for _ in range(1_000):
        corpus = make_corpus(rng, size=rng.randint(1, 5))
        filtered, stats = filter_corpus(corpus)
        assert stats.examples_after <= stats.examples_before
        if not filtered:
            continue
        micro = gold_corpus_stats(filtered).micro_prec_s
        assert micro is None or micro == 1.0
        refiltered, stats2 = filter_corpus(filtered)
        assert refiltered == filtered
        assert stats2.sentences_dropped == 0
        assert stats2.examples_after == stats2.examples_before
    elapsed = time.monotonic() - t0
    assert elapsed < 60.0, f"1000-corpus filter check took {elapsed:.1f}s"


@criterion("BIO suite: well-formedness, run decoding on 1,000 randomized "
           "examples, and the two-entity fixture")
def test_bio_suite():
    ex = example(
        "fixture",
        "Barack Obama visited Paris.",
        "Barack Obama went to Paris.",
        summary_entities=[("Barack Obama", "PERSON"), ("Paris", "GPE")],
    )
    assert ex.source.token_strings() == ["Barack", "Obama", "visited", "Paris", "."]
    assert bio_labels(ex).symbols() == ["B", "I", "O", "B", "O"]

    rng = random.Random(90210)
    vocab = ["alpha", "beta", "Paris", "Obama", "Wales", "New", "York", "City",
             "delta", "omega"]
    for _ in range(1_000):
        src_tokens = [rng.choice(vocab) for _ in range(rng.randint(1, 20))]
        pieces = []
        for _ in range(rng.randint(0, 3)):
            n = rng.randint(1, 3)
            start = rng.randint(0, max(0, len(src_tokens) - n))
            pieces.append(" ".join(src_tokens[start:start + n]))
        source = " ".join(src_tokens)
        summary = (". ".join(pieces) + ".") if pieces else "Nothing here."
        decls = []
        used = {}
        for surface in pieces:
            nth = used.get(surface, 0)
            used[surface] = nth + 1
            if summary.count(surface) > nth:
                decls.append((surface, "ORG", nth))
        ex = example("r", source, summary, summary_entities=decls)
        sal = salient_entities(ex)
        labels = bio_labels(ex, sal)
        # well-formedness is enforced by the type; recheck structurally
        assert len(labels) == len(ex.source.tokens)
        prev = BioLabel.O
        for lab in labels.labels:
            assert not (lab == BioLabel.I and prev == BioLabel.O)
            prev = lab
        # every maximal B..I run decodes to some matched n-gram
        grams = {tuple(t.casefold() for t in s.matched_ngram)
                 for s in sal.entities}
        toks = ex.source.token_strings()
        i = 0
        while i < len(labels.labels):
            if labels.labels[i] == BioLabel.B:
                j = i + 1
                while j < len(labels.labels) and labels.labels[j] == BioLabel.I:
                    j += 1
                assert tuple(t.casefold() for t in toks[i:j]) in grams
                i = j
            else:
                i += 1


@criterion("JAENS round-trip on 200 randomized pairs, collision error, "
           "boundary-absent fallback")
def test_jaens_suite():
    cfg = JaensConfig()
    rng = random.Random(424242)
    words = ["Wales", "Obama", "Melbourne", "City", "Paris", "NASA", "Delta",
             "Storm", "Dennis"]
    for _ in range(200):
        entities = []
        for _ in range(rng.randint(0, 4)):
            entities.append(" ".join(rng.choice(words)
                                     for _ in range(rng.randint(1, 3))))
        summary = " ".join(rng.choice(words) for _ in range(rng.randint(1, 8)))
        prefix = cfg.entity_delimiter.join(entities)
        text = " ".join(p for p in (prefix, cfg.boundary_token, summary) if p)
        parsed = parse_jaens_output(text, cfg)
        assert list(parsed.entities) == entities
        assert parsed.summary == summary
        assert not parsed.missing_boundary

    collision = example(
        "c", "Wales won.", "Wales won <ent-summary-sep> again.",
        summary_entities=[("Wales", "GPE")])
    with pytest.raises(ValueError):
        build_jaens_target(collision, cfg)

    parsed = parse_jaens_output("free-form model output", cfg)
    assert parsed.missing_boundary
    assert parsed.summary == "free-form model output"
    assert parsed.entities == ()


@criterion("CLI end-to-end: stats -> filter -> stats reaches exactly 100.0 with "
           "expected drop counts; byte-identical reports")
def test_cli_end_to_end(tmp_path):
    dataset = os.path.join(FIXTURES, "planted_dataset.jsonl")
    annotations = os.path.join(FIXTURES, "planted_annotations.jsonl")

    before = tmp_path / "before.json"
    assert run_cli(["stats", "--dataset", dataset, "--annotations", annotations,
                    "--out", str(before)]) == 0
    b = json.loads(before.read_text())
    assert b["examples"] == 5
    assert b["prec_s"]["micro_pct"] == 60.0

    filtered = tmp_path / "filtered.jsonl"
    filtered_ann = tmp_path / "filtered_ann.jsonl"
    fstats = tmp_path / "fstats.json"
    assert run_cli(["filter", "--dataset", dataset, "--annotations", annotations,
                    "--out", str(filtered), "--annotations-out", str(filtered_ann),
                    "--stats-out", str(fstats)]) == 0
    fs = json.loads(fstats.read_text())
    assert fs["examples_before"] == 5 and fs["examples_after"] == 4
    assert fs["examples_dropped"] == 1 and fs["sentences_dropped"] == 3

    after = tmp_path / "after.json"
    assert run_cli(["stats", "--dataset", str(filtered),
                    "--annotations", str(filtered_ann),
                    "--out", str(after)]) == 0
    a = json.loads(after.read_text())
    assert a["prec_s"]["micro"] == 1.0
    assert a["prec_s"]["micro_pct"] == 100.0

    # byte-identical outputs across repeated runs and worker counts
    blobs = []
    for i, workers in enumerate(["1", "1", "2", "4"]):
        out = tmp_path / f"report{i}.json"
        assert run_cli(["score", "--dataset", dataset,
                        "--annotations", annotations,
                        "--workers", workers, "--out", str(out)]) == 0
        blobs.append(out.read_bytes())
    assert len(set(blobs)) == 1


XSUM_DATASET = os.environ.get("ENTITY_FAITHFUL_XSUM_DATASET")
XSUM_ANNOTATIONS = os.environ.get("ENTITY_FAITHFUL_XSUM_ANNOTATIONS")
XSUM_TRAIN_DATASET = os.environ.get("ENTITY_FAITHFUL_XSUM_TRAIN_DATASET")
XSUM_TRAIN_ANNOTATIONS = os.environ.get("ENTITY_FAITHFUL_XSUM_TRAIN_ANNOTATIONS")


@pytest.mark.skipif(
    not (XSUM_DATASET and XSUM_ANNOTATIONS),
    reason="dataset-scale check: set ENTITY_FAITHFUL_XSUM_DATASET and "
           "ENTITY_FAITHFUL_XSUM_ANNOTATIONS to run",
)
@criterion("dataset-scale gold statistics within published tolerances (optional)")
def test_xsum_gold_stats_scale():
    from entity_faithful import load_corpus
    corpus = load_corpus(XSUM_DATASET, XSUM_ANNOTATIONS)
    stats = gold_corpus_stats(corpus)
    assert abs(stats.avg_entities - 2.08) <= 1.0
    assert abs(stats.avg_matched_in_source - 1.64) <= 1.0
    assert abs(stats.micro_prec_s * 100 - 79.3) <= 1.0


@pytest.mark.skipif(
    not (XSUM_TRAIN_DATASET and XSUM_TRAIN_ANNOTATIONS),
    reason="dataset-scale check: set ENTITY_FAITHFUL_XSUM_TRAIN_DATASET and "
           "ENTITY_FAITHFUL_XSUM_TRAIN_ANNOTATIONS to run",
)
@criterion("dataset-scale train filtering within published tolerances (optional)")
def test_xsum_train_filtering_scale():
    from entity_faithful import load_corpus
    corpus = load_corpus(XSUM_TRAIN_DATASET, XSUM_TRAIN_ANNOTATIONS)
    filtered, stats = filter_corpus(corpus)
    assert stats.examples_before == pytest.approx(203_540, rel=0.02)
    assert stats.examples_after == pytest.approx(135_155, rel=0.02)
