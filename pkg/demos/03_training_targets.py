"""Training-data preparation: B/I/O source labels and joint targets.

Summary-worthy entities are gold-summary mentions that match the source.
Every source occurrence of each matched n-gram gets B/I labels; the
joint target serializes the entities, a boundary token, then the summary,
and parses back losslessly.
"""

from entity_faithful import (
    JaensConfig,
    bio_labels,
    build_jaens_target,
    parse_jaens_output,
    salient_entities,
    Example,
)
from entity_faithful.corpus_io import build_annotated_text


def annotate(text, entities=()):
    decls = [{"text": s, "type": t, "start": text.index(s),
              "end": text.index(s) + len(s)} for s, t in entities]
    return build_annotated_text(text, decls)


ex = Example(
    id="demo",
    source=annotate(
        "Barack Obama visited Paris. Obama later flew home to Washington.",
        [("Barack Obama", "PERSON"), ("Paris", "GPE"), ("Obama", "PERSON"),
         ("Washington", "GPE")]),
    summary=annotate("Barack Obama toured Paris.",
                     [("Barack Obama", "PERSON"), ("Paris", "GPE")]),
)

salient = salient_entities(ex)
print("summary-worthy entities:")
for s in salient.entities:
    occ = [ex.source.text[o.start:o.end] for o in s.occurrences]
    print(f"  {s.mention.surface!r} matched as {' '.join(s.matched_ngram)!r} "
          f"at {len(occ)} source occurrence(s)")

labels = bio_labels(ex, salient)
print("\nsource tokens with B/I/O labels:")
for token, symbol in zip(ex.source.token_strings(), labels.symbols()):
    print(f"  {symbol}  {token}")

cfg = JaensConfig()
target = build_jaens_target(ex, cfg)
print(f"\njoint target: {target!r}")
parsed = parse_jaens_output(target, cfg)
print(f"parsed back: entities={list(parsed.entities)} summary={parsed.summary!r}")
assert parsed.summary == ex.summary.text
