"""Entity-to-text matching.

An entity matches a text when any contiguous n-gram of the entity's
tokens occurs as a contiguous token subsequence of the text,
case-insensitively; unigram candidates must not be stopwords.  Matching
is token-sequence based, never substring based: "art" does not match
inside "Barack".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

from .model import AnnotatedText, EntitySpan, Span

# A token-edge punctuation character is any non-word, non-space character.
_PUNCT = re.compile(r"[^\w\s]")
_WORDCHAR = re.compile(r"\w")
# Dotted abbreviations such as "U.K." keep their trailing period.
_ABBREV = re.compile(r"(?:[^\W\d_]\.){2,}")
# Possessive/contraction clitic split off as its own token: "U.K.'s" -> "U.K.", "'s".
_CLITIC = re.compile(r"['’][sS]")
_CHUNK = re.compile(r"\S+")


def _is_punct(ch: str) -> bool:
    return bool(_PUNCT.fullmatch(ch))


def _chunk_token_bounds(chunk: str) -> list[tuple[int, int]]:
    """Token boundaries within one whitespace-delimited chunk (relative offsets).

    The core runs from the first to the last word character, so internal
    punctuation stays glued; edge punctuation becomes single-character
    tokens, with two exceptions: a dotted abbreviation keeps one trailing
    period, and a final 's clitic splits off as its own token.
    """
    n = len(chunk)
    first = next((i for i, c in enumerate(chunk) if _WORDCHAR.fullmatch(c)), None)
    if first is None:
        return [(i, i + 1) for i in range(n)]
    last = next(i for i in range(n - 1, -1, -1) if _WORDCHAR.fullmatch(chunk[i]))
    lo, hi = first, last + 1
    if lo >= 1 and _CLITIC.fullmatch(chunk[lo - 1:hi]):
        lo -= 1  # a bare clitic: pull its apostrophe into the core
    if hi < n and chunk[hi] == "." and _ABBREV.fullmatch(chunk[lo:hi + 1]):
        hi += 1  # dotted abbreviation keeps its final period
    bounds = [(i, i + 1) for i in range(lo)]
    core = chunk[lo:hi]
    if len(core) > 2 and _CLITIC.fullmatch(core[-2:]):
        left_hi = hi - 2
        inner: list[tuple[int, int]] = []
        while left_hi > lo:
            seg = chunk[lo:left_hi]
            if _is_punct(seg[-1]) and not _ABBREV.fullmatch(seg):
                inner.append((left_hi - 1, left_hi))
                left_hi -= 1
            else:
                break
        if left_hi > lo:
            bounds.append((lo, left_hi))
        bounds.extend(reversed(inner))
        bounds.append((hi - 2, hi))
    else:
        bounds.append((lo, hi))
    bounds.extend((i, i + 1) for i in range(hi, n))
    return bounds


def tokenize(text: str) -> tuple[Span, ...]:
    """Split text into token spans.

    Whitespace separates chunks; leading and trailing punctuation become
    single-character tokens, except that dotted abbreviations ("U.K.")
    stay whole and a final 's clitic splits off as one token.  Internal
    punctuation is kept ("don't", "state-of-the-art", "3.14").  Every
    non-whitespace character belongs to exactly one token.
    """
    spans: list[Span] = []
    for m in _CHUNK.finditer(text):
        base = m.start()
        for lo, hi in _chunk_token_bounds(m.group(0)):
            spans.append(Span(base + lo, base + hi))
    return tuple(spans)


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    """The built-in stopword list (lowercase, one word per line in the resource file)."""
    data = resources.files("entity_faithful").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(w for w in data.splitlines() if w)


def fold(token: str) -> str:
    """Case-fold one token for comparison."""
    return token.casefold()


@dataclass(frozen=True)
class MatchResult:
    """Outcome of matching one entity against a haystack text."""

    matched: bool
    matched_ngram: Optional[tuple[str, ...]]
    occurrences: tuple[Span, ...]

    def __post_init__(self) -> None:
        ok = self.matched_ngram is not None and len(self.occurrences) > 0
        if self.matched != ok:
            raise ValueError("matched flag inconsistent with ngram/occurrences")


def best_ngram_windows(
    entity_tokens: Sequence[str],
    haystack_folded: Sequence[str],
    stop: Optional[frozenset[str]] = None,
) -> tuple[Optional[tuple[str, ...]], list[int]]:
    """Longest entity n-gram occurring in the haystack, with its window starts.

    Candidates are tried longest first, then leftmost within the entity;
    unigram candidates are skipped when the token is a stopword.  Returns
    (None, []) when nothing matches.
    """
    if stop is None:
        stop = stopwords()
    folded = [fold(t) for t in entity_tokens]
    length = len(folded)
    hay_len = len(haystack_folded)
    for n in range(length, 0, -1):
        for i in range(length - n + 1):
            gram = folded[i:i + n]
            if n == 1 and gram[0] in stop:
                continue
            starts = [j for j in range(hay_len - n + 1)
                      if list(haystack_folded[j:j + n]) == gram]
            if starts:
                return tuple(entity_tokens[i:i + n]), starts
    return None, []


def folded_tokens(at: AnnotatedText) -> list[str]:
    """Case-folded token strings of an annotated text, ready for window scans."""
    return [fold(at.text[s.start:s.end]) for s in at.tokens]


def surface_matches(surface: str, haystack_folded: Sequence[str]) -> bool:
    """Whether an entity surface matches a pre-folded haystack token list.

    Whitespace-only surfaces (zero tokens) match nothing; validated
    corpora never contain them.
    """
    spans = tokenize(surface)
    if not spans:
        return False
    tokens = [surface[s.start:s.end] for s in spans]
    gram, _ = best_ngram_windows(tokens, haystack_folded)
    return gram is not None


def find_match(entity: EntitySpan, haystack: AnnotatedText) -> MatchResult:
    """Match one entity mention against an annotated text.

    Raises ValueError when the entity surface tokenizes to zero tokens.
    Occurrences are character spans in the haystack covering each window
    where the matched n-gram occurs.
    """
    ent_spans = tokenize(entity.surface)
    if not ent_spans:
        raise ValueError(f"empty entity: surface {entity.surface!r} has no tokens")
    ent_tokens = [entity.surface[s.start:s.end] for s in ent_spans]
    hay_folded = folded_tokens(haystack)
    gram, starts = best_ngram_windows(ent_tokens, hay_folded)
    if gram is None:
        return MatchResult(False, None, ())
    n = len(gram)
    occ = tuple(Span(haystack.tokens[j].start, haystack.tokens[j + n - 1].end)
                for j in starts)
    return MatchResult(True, gram, occ)
