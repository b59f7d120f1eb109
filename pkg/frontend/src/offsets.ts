/**
 * Offset helpers.  The service counts Unicode scalar values, while JS
 * string indices count UTF-16 code units; these converters keep the two
 * views consistent for any script, including astral-plane characters.
 */

/** Number of Unicode scalar values in s. */
export function scalarLength(s: string): number {
  let n = 0;
  for (const _ of s) n++;
  return n;
}

/** Substring by scalar offsets, mirroring the service's span semantics. */
export function scalarSlice(s: string, start: number, length: number): string {
  const scalars = Array.from(s);
  return scalars.slice(start, start + length).join("");
}

/** Convert a UTF-16 code-unit index into a scalar index. */
export function utf16ToScalar(s: string, utf16Index: number): number {
  return scalarLength(s.slice(0, utf16Index));
}

/** Convert a scalar index into a UTF-16 code-unit index. */
export function scalarToUtf16(s: string, scalarIndex: number): number {
  let units = 0;
  let seen = 0;
  for (const ch of s) {
    if (seen >= scalarIndex) break;
    units += ch.length;
    seen++;
  }
  return units;
}
