/** Line-oriented view for fitch and hilbert proofs.
 *
 * Lines are numbered and indented by subproof depth.  All interaction goes
 * through a single form: pick a rule, then the form reveals what that rule
 * needs: enumerated candidates fetched from the server, line-citation
 * inputs, a subproof range, a formula, an axiom substitution, and an
 * optional result formula.  Citations are scope-checked before anything is
 * sent.
 */

import type { Assignment, LineSnapshot, ProofLine, RuleInfo } from "./api.js";
import { infix } from "./formula.js";
import { esc, formulaSpan } from "./html.js";
import { checkCitations } from "./scope.js";
import { assignmentLabel } from "./goaltree.js";

export interface FormState {
  rule: string | null;
  candidates: Assignment[] | null;
  chosen: number | null;
  cites: Record<string, string>;
  ranges: Record<string, string>;
  formula: string;
  result: string;
  subst: Record<string, string>;
}

export function emptyForm(): FormState {
  return {
    rule: null,
    candidates: null,
    chosen: null,
    cites: {},
    ranges: {},
    formula: "",
    result: "",
    subst: {},
  };
}

export type Submission =
  | { args: Assignment; resultFormula?: string }
  | { problems: string[] };

/** Turn the form into a wire assignment, or report what is still wrong. */
export function buildSubmission(
  info: RuleInfo,
  form: FormState,
  snap: LineSnapshot,
): Submission {
  if (form.chosen !== null && form.candidates && form.candidates[form.chosen]) {
    return { args: form.candidates[form.chosen]! };
  }

  const args: Assignment = {};
  const problems: string[] = [];
  const cites: Record<string, number> = {};
  const ranges: Record<string, [number, number]> = {};

  for (const role of info.lines ?? []) {
    const raw = (form.cites[role] ?? "").trim();
    if (!raw) {
      problems.push(`cite a line for ${role}`);
      continue;
    }
    const i = Number(raw);
    if (!Number.isInteger(i)) {
      problems.push(`${role} must be a line number`);
      continue;
    }
    cites[role] = i;
  }

  for (const role of info.ranges ?? []) {
    const raw = (form.ranges[role] ?? "").trim();
    const m = /^(\d+)-(\d+)$/.exec(raw);
    if (!m) {
      problems.push(`pick a subproof for ${role}`);
      continue;
    }
    ranges[role] = [Number(m[1]), Number(m[2])];
  }

  for (const p of checkCitations(snap, cites, ranges)) {
    problems.push(p.message);
  }

  if (info.formula) {
    const text = form.formula.trim();
    if (!text) problems.push(`enter a formula for ${info.formula}`);
    else args[info.formula] = text;
  }

  if (info.schemaAtoms && info.schemaAtoms.length > 0) {
    const mapping: Record<string, string> = {};
    for (const atom of info.schemaAtoms) {
      const text = (form.subst[atom] ?? "").trim();
      if (!text) problems.push(`give a formula for schema atom ${atom}`);
      else mapping[atom] = text;
    }
    if (Object.keys(mapping).length === info.schemaAtoms.length) {
      args["substitution"] = { subst: mapping };
    }
  }

  if (problems.length > 0) return { problems };

  for (const [role, i] of Object.entries(cites)) args[role] = i;
  for (const [role, r] of Object.entries(ranges)) args[role] = r;

  const result = form.result.trim();
  if (info.resultFree && result) return { args, resultFormula: result };
  return { args };
}

function justification(line: ProofLine): string {
  const parts: string[] = [line.rule];
  if (line.cites.length > 0) parts.push(line.cites.join(", "));
  for (const [s, e] of line.ranges) parts.push(`${s}-${e}`);
  return parts.join(" ");
}

function lineHtml(line: ProofLine): string {
  const bars = `<span class="bar"></span>`.repeat(line.depth);
  const cls = line.kind === "hypothesis" ? "line hypothesis" : "line";
  return (
    `<div class="${cls}" data-line="${line.index}">` +
    `<span class="num">${line.index}</span>` +
    `<span class="indent">${bars}</span>` +
    formulaSpan(line.formula, infix(line.formula)) +
    `<span class="just">${esc(justification(line))}</span>` +
    `</div>`
  );
}

function fieldInputs(info: RuleInfo, form: FormState, snap: LineSnapshot): string {
  const parts: string[] = [];
  for (const role of info.lines ?? []) {
    const value = esc(form.cites[role] ?? "");
    parts.push(
      `<label>${esc(role)} <input type="number" min="1" data-cite="${esc(role)}"` +
        ` value="${value}"></label>`,
    );
  }
  for (const role of info.ranges ?? []) {
    const current = form.ranges[role] ?? "";
    const options = snap.subproofs
      .map(([s, e]) => {
        const v = `${s}-${e}`;
        const selected = v === current ? " selected" : "";
        return `<option value="${v}"${selected}>lines ${v}</option>`;
      })
      .join("");
    parts.push(
      `<label>${esc(role)} <select data-range="${esc(role)}">` +
        `<option value="">pick a subproof</option>${options}</select></label>`,
    );
  }
  if (info.formula) {
    parts.push(
      `<label>${esc(info.formula)} <input type="text" data-field="formula"` +
        ` value="${esc(form.formula)}" placeholder="for example (and A B)"></label>`,
    );
  }
  if (info.schemaAtoms && info.schemaAtoms.length > 0) {
    parts.push(`<span class="schema">${esc(info.schema ?? "")}</span>`);
    for (const atom of info.schemaAtoms) {
      parts.push(
        `<label>${esc(atom)} := <input type="text" data-subst="${esc(atom)}"` +
          ` value="${esc(form.subst[atom] ?? "")}"></label>`,
      );
    }
  }
  if (info.resultFree) {
    parts.push(
      `<label>result (optional) <input type="text" data-field="result"` +
        ` value="${esc(form.result)}"></label>`,
    );
  }
  return parts.join("");
}

function candidateButtons(form: FormState): string {
  if (!form.candidates || form.candidates.length === 0) return "";
  const buttons = form.candidates
    .map(
      (a, i) =>
        `<button class="candidate" data-action="fitch-candidate" data-index="${i}">` +
        `${esc(assignmentLabel(a))}</button>`,
    )
    .join("");
  return `<div class="candidates">${buttons}</div>`;
}

export function renderFitch(
  snap: LineSnapshot,
  ruleInfo: RuleInfo[],
  form: FormState,
): string {
  const lines = snap.lines.map(lineHtml).join("");
  const depth = snap.frames.length;
  const pending =
    depth > 0
      ? `<div class="line pending"><span class="num"></span>` +
        `<span class="indent">${`<span class="bar"></span>`.repeat(depth)}</span>` +
        `<span class="next">next line goes here</span></div>`
      : "";

  const options = ruleInfo
    .map((r) => {
      const selected = r.name === form.rule ? " selected" : "";
      return `<option value="${esc(r.name)}"${selected}>${esc(r.name)}</option>`;
    })
    .join("");
  const info = form.rule ? ruleInfo.find((r) => r.name === form.rule) : undefined;
  const fields = info ? fieldInputs(info, form, snap) : "";
  const candidates = info ? candidateButtons(form) : "";
  const submit = info
    ? `<button class="submit" data-action="fitch-submit">add line</button>`
    : "";

  const badge = snap.complete
    ? `<div class="badge complete">Proof complete</div>`
    : `<div class="badge open">goal ${formulaSpan(snap.goal, infix(snap.goal))}</div>`;

  return (
    `<div class="fitch">` +
    `<div class="lines">${lines}${pending}</div>` +
    `<form class="application" onsubmit="return false">` +
    `<select data-action="fitch-rule"><option value="">pick a rule</option>${options}</select>` +
    `<span class="fields">${fields}</span>` +
    candidates +
    submit +
    `</form>` +
    badge +
    `</div>`
  );
}
