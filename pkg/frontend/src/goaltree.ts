/** Goal-tree view for backward proofs.
 *
 * The tree keeps the conventional orientation: premises sit above the
 * conclusions they support, so the root goal stays at the bottom and the
 * proof grows upward.  Node colors come verbatim from the server statuses
 * (goal, leaf, regular), and every open goal carries exactly one
 * interaction area for picking a rule and a candidate assignment.
 */

import type { Assignment, ArgValue, RuleCandidates, TreeSnapshot } from "./api.js";
import { infix } from "./formula.js";
import { esc, formulaSpan } from "./html.js";

export interface PickerState {
  goalId: number;
  rules: RuleCandidates[];
  chosenRule: string | null;
}

export interface TreeUi {
  picker: PickerState | null;
}

function argLabel(key: string, value: ArgValue): string {
  if (typeof value === "number") return `${key}: line ${value}`;
  if (Array.isArray(value)) return `${key}: lines ${value[0]}-${value[1]}`;
  if (typeof value === "string") return `${key}: ${value}`;
  if ("f" in value) return `${key}: ${infix(value.f)}`;
  const pairs = Object.entries(value.subst)
    .sort(([a], [b]) => (a < b ? -1 : 1))
    .map(([name, f]) => `${name} := ${infix(f)}`);
  return `${key}: ${pairs.join(", ")}`;
}

export function assignmentLabel(assignment: Assignment): string {
  const keys = Object.keys(assignment).sort();
  if (keys.length === 0) return "apply";
  return keys.map((k) => argLabel(k, assignment[k]!)).join(";  ");
}

function candidateList(picker: PickerState): string {
  const chosen = picker.rules.find((r) => r.rule === picker.chosenRule);
  if (!chosen) return "";
  if (chosen.assignments.length === 0) {
    return `<p class="empty">no candidates for ${esc(chosen.rule)} at this goal</p>`;
  }
  const buttons = chosen.assignments
    .map(
      (a, i) =>
        `<button class="candidate" data-action="apply-candidate"` +
        ` data-goal="${picker.goalId}" data-index="${i}">${esc(assignmentLabel(a))}</button>`,
    )
    .join("");
  return `<div class="candidates">${buttons}</div>`;
}

function pickerHtml(picker: PickerState): string {
  const options = picker.rules
    .map((r) => {
      const selected = r.rule === picker.chosenRule ? " selected" : "";
      return `<option value="${esc(r.rule)}"${selected}>${esc(r.rule)} (${r.assignments.length})</option>`;
    })
    .join("");
  return (
    `<select data-action="picker-rule" data-goal="${picker.goalId}">` +
    `<option value="">pick a rule</option>${options}</select>` +
    candidateList(picker) +
    `<button class="cancel" data-action="close-picker">cancel</button>`
  );
}

export function renderGoalTree(snap: TreeSnapshot, ui: TreeUi): string {
  const byId = new Map(snap.nodes.map((n) => [n.id, n]));

  function nodeHtml(id: number): string {
    const node = byId.get(id);
    if (!node) return "";
    const premises = node.children.map(nodeHtml).join("");
    const annotation = node.rule
      ? `<span class="rule-label">${esc(node.rule)}</span>`
      : node.leafKind
        ? `<span class="leaf-label">${esc(node.leafKind)}</span>`
        : "";
    const hyps =
      node.hypotheses.length > 0
        ? `<span class="hyps">[${node.hypotheses
            .map((h) => formulaSpan(h, infix(h), "formula hyp"))
            .join(", ")}]</span>`
        : "";
    let interaction = "";
    if (node.status === "goal") {
      const body =
        ui.picker && ui.picker.goalId === node.id
          ? pickerHtml(ui.picker)
          : `<button data-action="open-picker" data-goal="${node.id}">apply a rule</button>`;
      interaction = `<div class="interaction" data-goal="${node.id}">${body}</div>`;
    }
    return (
      `<div class="branch">` +
      (premises ? `<div class="premises">${premises}</div>` : "") +
      `<div class="node status-${node.status}" data-node="${node.id}">` +
      formulaSpan(node.formula, infix(node.formula)) +
      annotation +
      hyps +
      `</div>` +
      interaction +
      `</div>`
    );
  }

  const badge = snap.complete
    ? `<div class="badge complete">Proof complete</div>`
    : `<div class="badge open">${snap.openGoals.length} open goal${
        snap.openGoals.length === 1 ? "" : "s"
      }</div>`;
  const legend =
    `<div class="legend">` +
    `<span class="swatch status-goal">goal</span>` +
    `<span class="swatch status-leaf">leaf</span>` +
    `<span class="swatch status-regular">regular</span>` +
    `</div>`;
  return `<div class="goal-tree">${legend}<div class="tree">${nodeHtml(snap.root)}</div>${badge}</div>`;
}
