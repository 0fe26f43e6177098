/**
 * Index conversion between JavaScript's UTF-16 code units and Unicode
 * scalar values.
 *
 * The annotation contract indexes characters as Unicode scalar values,
 * while every offset produced in-process (string slicing, NLP term
 * offsets) counts UTF-16 code units; astral characters such as emoji
 * occupy two code units but one scalar value.
 */

/** Precomputed code-unit -> scalar-value index map for one text. */
export type ScalarIndex = Uint32Array;

export function buildScalarIndex(text: string): ScalarIndex {
  const map = new Uint32Array(text.length + 1);
  let unit = 0;
  let scalar = 0;
  for (const ch of text) {
    for (let k = 0; k < ch.length; k++) {
      map[unit + k] = scalar;
    }
    unit += ch.length;
    scalar += 1;
  }
  map[unit] = scalar;
  return map;
}

/** Convert a [start, end) code-unit span to scalar-value indices. */
export function toScalarSpan(
  index: ScalarIndex,
  start: number,
  end: number,
): { start: number; end: number } {
  return { start: index[start], end: index[end] };
}
