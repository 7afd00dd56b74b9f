const REPLACEMENTS: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

/** Escape text for use in HTML content or attribute values. */
export function esc(text: string): string {
  return text.replace(/[&<>"']/g, (c) => REPLACEMENTS[c]!);
}

/** A formula span: infix text, exact server s-expression in the tooltip. */
export function formulaSpan(raw: string, display: string, cls = "formula"): string {
  return `<span class="${cls}" title="${esc(raw)}">${esc(display)}</span>`;
}
