"""Builders for compact corpus construction in tests and fixtures."""

from __future__ import annotations

from typing import Optional, Sequence, Union

from entity_faithful import (
    AnnotatedText,
    EntitySpan,
    EntityType,
    Example,
    Span,
    segment_sentences,
    tokenize,
)

EntityDecl = Union[str, tuple]


def annotated(text: str, entities: Sequence[EntityDecl] = ()) -> AnnotatedText:
    """Annotated text with tokens/sentences synthesized and entities located.

    Each entity is a surface string, (surface, type) or (surface, type, nth)
    tuple; the nth occurrence of the surface in the text is annotated
    (0-based, default first).
    """
    spans: list[EntitySpan] = []
    for decl in entities:
        if isinstance(decl, str):
            surface, etype, nth = decl, "PERSON", 0
        elif len(decl) == 2:
            (surface, etype), nth = decl, 0
        else:
            surface, etype, nth = decl
        start = -1
        for _ in range(nth + 1):
            start = text.index(surface, start + 1)
        parsed = etype if isinstance(etype, EntityType) else EntityType.parse(etype)
        spans.append(EntitySpan(Span(start, start + len(surface)), surface, parsed))
    spans.sort(key=lambda e: (e.span.start, e.span.end))
    return AnnotatedText(text, tokenize(text), segment_sentences(text), tuple(spans))


def example(
    ex_id: str,
    source: Union[str, AnnotatedText],
    summary: Union[str, AnnotatedText],
    hypothesis: Union[str, AnnotatedText, None] = None,
    source_entities: Sequence[EntityDecl] = (),
    summary_entities: Sequence[EntityDecl] = (),
    hypothesis_entities: Sequence[EntityDecl] = (),
) -> Example:
    def coerce(value, entities) -> Optional[AnnotatedText]:
        if value is None:
            return None
        if isinstance(value, AnnotatedText):
            return value
        return annotated(value, entities)

    return Example(
        id=ex_id,
        source=coerce(source, source_entities),
        summary=coerce(summary, summary_entities),
        hypothesis=coerce(hypothesis, hypothesis_entities),
    )


def build_fixture_corpus():
    """Ten varied examples used across metric and CLI tests."""
    return [
        example("e01",
                "Alice met Bob in London. They toured the city together.",
                "Alice met Bob in London.",
                "Alice met Bob in Paris.",
                source_entities=[("Alice", "PERSON"), ("Bob", "PERSON"),
                                 ("London", "GPE")],
                summary_entities=[("Alice", "PERSON"), ("Bob", "PERSON"),
                                  ("London", "GPE")],
                hypothesis_entities=[("Alice", "PERSON"), ("Bob", "PERSON"),
                                     ("Paris", "GPE")]),
        example("e02",
                "Barack Obama visited Harvard University last week.",
                "Obama visited Harvard.",
                "Barack Obama went to Yale.",
                source_entities=[("Barack Obama", "PERSON"),
                                 ("Harvard University", "ORG")],
                summary_entities=[("Obama", "PERSON"), ("Harvard", "ORG")],
                hypothesis_entities=[("Barack Obama", "PERSON"),
                                     ("Yale", "ORG")]),
        example("e03",
                "people in the uk drink tea, a study found.",
                "A study covered the UK.",
                "The UK study covered tea.",
                summary_entities=[("UK", "GPE")],
                hypothesis_entities=[("UK", "GPE")]),
        example("e04",
                "No names appear in this source text at all.",
                "Nothing is named here either.",
                "Nothing is named in this output."),
        example("e05",
                "Wales beat Melbourne City in the final.",
                "Wales beat Melbourne City.",
                "Melbourne City lost to Wales and Scotland.",
                source_entities=[("Wales", "GPE"), ("Melbourne City", "ORG")],
                summary_entities=[("Wales", "GPE"), ("Melbourne City", "ORG")],
                hypothesis_entities=[("Melbourne City", "ORG"), ("Wales", "GPE"),
                                     ("Scotland", "GPE")]),
        example("e06",
                "The committee met on Tuesday to discuss the budget.",
                "The Order reviewed the budget.",
                "The Order met.",
                summary_entities=[("The Order", "ORG")],
                hypothesis_entities=[("The Order", "ORG")]),
        example("e07",
                "NASA launched a probe toward Europa on Monday.",
                "NASA launched a probe.",
                None,
                source_entities=[("NASA", "ORG"), ("Europa", "LOC")],
                summary_entities=[("NASA", "ORG")]),
        example("e08",
                "München's Straße hosted the Oktoberfest parade.",
                "Oktoberfest happened in München.",
                "OKTOBERFEST happened in MÜNCHEN.",
                source_entities=[("München", "GPE"), ("Oktoberfest", "EVENT")],
                summary_entities=[("Oktoberfest", "EVENT"), ("München", "GPE")],
                hypothesis_entities=[("OKTOBERFEST", "EVENT"),
                                     ("MÜNCHEN", "GPE")]),
        example("e09",
                "The U.K.'s parliament debated the bill with France.",
                "The U.K. debated with France.",
                "The U.K. debated alone.",
                source_entities=[("U.K.", "GPE"), ("France", "GPE")],
                summary_entities=[("U.K.", "GPE"), ("France", "GPE")],
                hypothesis_entities=[("U.K.", "GPE")]),
        example("e10",
                "Storm Dennis hit the coast of Ireland.",
                "Storm Dennis reached Ireland.",
                "Storm Dennis hit Iceland and Greenland.",
                source_entities=[("Storm Dennis", "EVENT"), ("Ireland", "GPE")],
                summary_entities=[("Storm Dennis", "EVENT"), ("Ireland", "GPE")],
                hypothesis_entities=[("Storm Dennis", "EVENT"), ("Iceland", "GPE"),
                                     ("Greenland", "GPE")]),
    ]
