/** Client-side scope checks for line citations.
 *
 * Mirrors the server's visibility rule: a line stops being citable once its
 * subproof closes, and strict boundaries block citations from outside.  The
 * server re-checks every application; these checks only catch mistakes
 * before they travel.  Subproofs closed behind a strict boundary are not
 * listed in the snapshot, so the server stays authoritative.
 */

import type { LineSnapshot } from "./api.js";

export function citableLines(snap: LineSnapshot): number[] {
  const out: number[] = [];
  for (let i = 1; i <= snap.lines.length; i++) {
    if (snap.subproofs.some(([s, e]) => s <= i && i <= e)) continue;
    if (snap.frames.some((fr) => fr.strict && fr.start > i)) continue;
    out.push(i);
  }
  return out;
}

export interface CitationProblem {
  field: string;
  message: string;
}

export function checkCitations(
  snap: LineSnapshot,
  cites: Record<string, number>,
  ranges: Record<string, [number, number]> = {},
): CitationProblem[] {
  const visible = new Set(citableLines(snap));
  const problems: CitationProblem[] = [];
  for (const [role, i] of Object.entries(cites)) {
    if (!Number.isInteger(i) || i < 1 || i > snap.lines.length) {
      problems.push({ field: role, message: `line ${i} does not exist` });
    } else if (!visible.has(i)) {
      problems.push({ field: role, message: `line ${i} is out of scope here` });
    }
  }
  for (const [role, [s, e]] of Object.entries(ranges)) {
    if (!snap.subproofs.some(([a, b]) => a === s && b === e)) {
      problems.push({
        field: role,
        message: `lines ${s}-${e} are not a closed subproof in scope`,
      });
    }
  }
  return problems;
}
