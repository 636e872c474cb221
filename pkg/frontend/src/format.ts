/** Number formatting for readouts: 6 significant digits, no trailing cruft. */

export function sig6(value: number | null | undefined): string {
  if (value === null || value === undefined || Number.isNaN(value)) return "—";
  if (value === 0) return "0";
  const formatted = value.toPrecision(6);
  // strip trailing zeros in plain decimals (keep exponent notation as-is)
  if (!formatted.includes("e") && formatted.includes(".")) {
    return formatted.replace(/\.?0+$/, "");
  }
  return formatted;
}

export function pct1(value: number): string {
  return value.toFixed(1);
}

/** Deterministic client-side JSON: sorted keys, 2-space indent, trailing
 * newline.  Applying it to two parsed bodies yields byte-identical text iff
 * the bodies are equal, which is what scenario round-trip checks compare. */
export function canonicalJson(value: unknown): string {
  return `${stringifySorted(value, 0)}\n`;
}

function stringifySorted(value: unknown, depth: number): string {
  const pad = "  ".repeat(depth);
  const inner = "  ".repeat(depth + 1);
  if (Array.isArray(value)) {
    if (value.length === 0) return "[]";
    const items = value.map((v) => inner + stringifySorted(v, depth + 1));
    return `[\n${items.join(",\n")}\n${pad}]`;
  }
  if (value !== null && typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>).sort(([a], [b]) =>
      a < b ? -1 : a > b ? 1 : 0,
    );
    if (entries.length === 0) return "{}";
    const items = entries.map(
      ([k, v]) => `${inner}${JSON.stringify(k)}: ${stringifySorted(v, depth + 1)}`,
    );
    return `{\n${items.join(",\n")}\n${pad}}`;
  }
  return JSON.stringify(value);
}
