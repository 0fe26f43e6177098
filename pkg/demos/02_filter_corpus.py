"""Entity-based corpus filtering, before/after.

Gold-summary sentences whose entities have no source match are dropped;
a pair whose summary loses every sentence is removed.  After filtering,
the gold summaries are hallucination-free by construction: micro prec_s
is exactly 1.0.
"""

from entity_faithful import filter_corpus, gold_corpus_stats
from entity_faithful.corpus_io import build_annotated_text
from entity_faithful import Example


def annotate(text, entities=()):
    decls = [{"text": s, "type": t, "start": text.index(s),
              "end": text.index(s) + len(s)} for s, t in entities]
    return build_annotated_text(text, decls)


corpus = [
    Example(
        id="keep-partial",
        source=annotate("Alice met Bob in London before the storm arrived.",
                        [("Alice", "PERSON"), ("Bob", "PERSON"),
                         ("London", "GPE")]),
        summary=annotate("Alice met Bob in London. Cthulhu watched them leave.",
                         [("Alice", "PERSON"), ("Bob", "PERSON"),
                          ("London", "GPE"), ("Cthulhu", "PERSON")]),
    ),
    Example(
        id="drop-entirely",
        source=annotate("The harvest festival went ahead despite the rain."),
        summary=annotate("Queen Mab opened the festival.",
                         [("Queen Mab", "PERSON")]),
    ),
    Example(
        id="untouched",
        source=annotate("NASA launched a probe toward Europa.",
                        [("NASA", "ORG"), ("Europa", "LOC")]),
        summary=annotate("NASA launched a probe.", [("NASA", "ORG")]),
    ),
]

before = gold_corpus_stats(corpus)
print(f"before: {before.examples} examples, "
      f"micro prec_s = {before.micro_prec_s:.3f}")

filtered, stats = filter_corpus(corpus)
print(f"filtering: {stats.examples_before} -> {stats.examples_after} examples, "
      f"{stats.sentences_dropped} sentence(s) dropped")
for ex in filtered:
    print(f"  {ex.id}: {ex.summary.text!r}")

after = gold_corpus_stats(filtered)
print(f"after: micro prec_s = {after.micro_prec_s:.3f}")
assert after.micro_prec_s == 1.0
