"""Score model summaries for entity-level factual consistency.

Builds a tiny in-memory corpus, counts entity-mention matches, and prints
the four metrics.  prec_s is the share of hypothesis mentions found in
the source (low = hallucination); prec_t / recall_t / f1_t measure the
hypothesis against the gold summary's mentions.
"""

from entity_faithful import (
    aggregate_corpus,
    build_annotated_text,
    count_matches,
    Example,
    report_to_dict,
)
import json


def annotate(text, entities):
    # entities: (surface, type) pairs located at their first occurrence
    decls = [{"text": s, "type": t, "start": text.index(s),
              "end": text.index(s) + len(s)} for s, t in entities]
    return build_annotated_text(text, decls)


corpus = [
    Example(
        id="coffee",
        source=annotate(
            "People in Italy and the Netherlands tend to drink fewer cups "
            "of coffee, a genetic study suggests.",
            [("Italy", "GPE"), ("Netherlands", "GPE")]),
        summary=annotate(
            "A study links genetics to coffee habits in Italy and the Netherlands.",
            [("Italy", "GPE"), ("Netherlands", "GPE")]),
        # the model hallucinated "the UK": it never appears in the source
        hypothesis=annotate(
            "People in Italy and the UK drink fewer cups of coffee, a study says.",
            [("Italy", "GPE"), ("UK", "GPE")]),
    ),
    Example(
        id="match",
        source=annotate(
            "Wales midfielder Becky Lawrence spoke about her season with "
            "Melbourne City.",
            [("Wales", "GPE"), ("Becky Lawrence", "PERSON"),
             ("Melbourne City", "ORG")]),
        summary=annotate(
            "Becky Lawrence reflected on her Melbourne City season.",
            [("Becky Lawrence", "PERSON"), ("Melbourne City", "ORG")]),
        # "Lawrence" alone still matches "Becky Lawrence" (shortened form)
        hypothesis=annotate(
            "Lawrence reflected on a season with Melbourne City and Wales.",
            [("Lawrence", "PERSON"), ("Melbourne City", "ORG"),
             ("Wales", "GPE")]),
    ),
]

counts = [count_matches(ex) for ex in corpus]
for ex, c in zip(corpus, counts):
    print(f"{ex.id}: n_h={c.n_h} n_h_in_s={c.n_h_in_s} n_h_in_t={c.n_h_in_t} "
          f"n_t={c.n_t} n_t_in_s={c.n_t_in_s}")

report = aggregate_corpus(counts)
print(json.dumps(report_to_dict(report)["metrics"], indent=2, sort_keys=True))
