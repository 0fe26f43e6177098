/**
 * Core annotation logic: entities (whitelisted types only), sentence
 * spans, and token spans for each text field of a dataset record.
 *
 * Entity detection uses compromise's tagger; only PERSON, GPE, LOC, ORG
 * and NORP are ever produced here, a subset of the consumer's 7-type
 * whitelist {PERSON, FAC, GPE, ORG, NORP, LOC, EVENT}.  Dates, times and
 * numerals are never emitted.  All emitted offsets index Unicode scalar
 * values, and every entity span slices the original text to exactly the
 * emitted surface string.
 */

import nlp from 'compromise';

import { buildScalarIndex, toScalarSpan } from './offsets.js';

export const FIELDS = ['source', 'summary', 'hypothesis'] as const;
export type FieldName = (typeof FIELDS)[number];

export interface SpanOut {
  start: number;
  end: number;
}

export interface EntityOut extends SpanOut {
  text: string;
  type: string;
}

export interface AnnotationRecord {
  id: string;
  field: FieldName;
  entities: EntityOut[];
  sentences: SpanOut[];
  tokens: SpanOut[];
}

export interface DatasetRecord {
  id: string;
  source: string;
  summary: string;
  hypothesis?: string | null;
}

/** GPE is the political subset of compromise's Place tags; the rest is LOC. */
const GPE_TAGS = new Set(['Country', 'City', 'Region', 'Town']);

const WORDY = /[\p{L}\p{N}]/u;
const DOTTED_ABBREV = /^(?:[^\W\d_]\.){2,}$/u;

interface RawPhrase {
  start: number; // UTF-16 code units
  end: number;
  type: string;
}

/**
 * Shrink a phrase span to its content: leading and trailing characters
 * that are neither letters nor digits are dropped, except that a dotted
 * abbreviation ("U.S.") keeps its final period.
 */
export function trimSpan(
  text: string,
  start: number,
  end: number,
): { start: number; end: number } | null {
  while (start < end && !WORDY.test(text[start])) start += 1;
  while (end > start) {
    const seg = text.slice(start, end);
    if (WORDY.test(seg[seg.length - 1])) break;
    if (seg.endsWith('.') && DOTTED_ABBREV.test(seg)) break;
    end -= 1;
  }
  return start < end ? { start, end } : null;
}

interface CompromiseTerm {
  text: string;
  tags?: string[];
  offset: { start: number; length: number };
}

interface CompromisePhrase {
  text: string;
  terms?: CompromiseTerm[];
  offset: { start: number; length: number };
}

function phrases(view: { json(opts: object): CompromisePhrase[] }): CompromisePhrase[] {
  return view.json({ offset: true, terms: { tags: true, offset: true } });
}

function collectRaw(doc: ReturnType<typeof nlp>): RawPhrase[] {
  const raw: RawPhrase[] = [];
  const push = (p: CompromisePhrase, type: string) => {
    raw.push({ start: p.offset.start, end: p.offset.start + p.offset.length, type });
  };
  for (const p of phrases(doc.people())) push(p, 'PERSON');
  for (const p of phrases(doc.organizations())) push(p, 'ORG');
  for (const p of phrases(doc.places())) {
    const tags = (p.terms ?? []).flatMap((t) => t.tags ?? []);
    push(p, tags.some((t) => GPE_TAGS.has(t)) ? 'GPE' : 'LOC');
  }
  for (const p of phrases(doc.match('#Demonym'))) push(p, 'NORP');
  return raw;
}

/** Annotate one text: whitelisted entities plus sentence and token spans. */
export function annotateText(text: string): {
  entities: EntityOut[];
  sentences: SpanOut[];
  tokens: SpanOut[];
} {
  const doc = nlp(text);
  const index = buildScalarIndex(text);

  const entities: EntityOut[] = [];
  const seen = new Set<string>();
  for (const raw of collectRaw(doc)) {
    const trimmed = trimSpan(text, raw.start, raw.end);
    if (trimmed === null) continue;
    const span = toScalarSpan(index, trimmed.start, trimmed.end);
    const key = `${span.start}:${span.end}:${raw.type}`;
    if (seen.has(key)) continue;
    seen.add(key);
    entities.push({
      text: text.slice(trimmed.start, trimmed.end),
      type: raw.type,
      ...span,
    });
  }
  entities.sort((a, b) => a.start - b.start || a.end - b.end
    || a.type.localeCompare(b.type));

  const sentences: SpanOut[] = [];
  const tokens: SpanOut[] = [];
  const sentenceJson = doc.json({ offset: true }) as Array<{
    terms: CompromiseTerm[];
  }>;
  const starts: number[] = [];
  for (const s of sentenceJson) {
    if (s.terms.length > 0) starts.push(s.terms[0].offset.start);
    for (const t of s.terms) {
      if (t.offset.length <= 0) continue;
      const prev = tokens[tokens.length - 1];
      const span = toScalarSpan(index, t.offset.start, t.offset.start + t.offset.length);
      if (prev && span.start < prev.end) continue; // defensive: keep spans disjoint
      tokens.push(span);
    }
  }
  for (let i = 0; i < starts.length; i++) {
    const limit = i + 1 < starts.length ? starts[i + 1] : text.length;
    let end = limit;
    while (end > starts[i] && /\s/.test(text[end - 1])) end -= 1;
    if (end > starts[i]) {
      sentences.push(toScalarSpan(index, starts[i], end));
    }
  }
  return { entities, sentences, tokens };
}

/** One annotation record per non-empty text field, in schema field order. */
export function annotateRecord(rec: DatasetRecord): AnnotationRecord[] {
  const out: AnnotationRecord[] = [];
  for (const field of FIELDS) {
    const text = rec[field];
    if (typeof text !== 'string' || text.length === 0) continue;
    out.push({ id: rec.id, field, ...annotateText(text) });
  }
  return out;
}
