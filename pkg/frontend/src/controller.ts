/** Session controller.
 *
 * What is shown is a pure function of the latest server snapshot plus the
 * in-flight form state kept here.  Every proof transition happens on the
 * server: this file only sends requests, stores the returned snapshot, and
 * surfaces errors.  A stale-version response refreshes the snapshot and
 * leaves a notice; any other failure leaves the proof exactly as it was.
 */

import {
  ApiError,
  Client,
  type Assignment,
  type LineSnapshot,
  type RuleInfo,
  type Snapshot,
  type SystemInfo,
  type TreeSnapshot,
} from "./api.js";
import { infix } from "./formula.js";
import { esc, formulaSpan } from "./html.js";
import { renderGoalTree, type TreeUi } from "./goaltree.js";
import { buildSubmission, emptyForm, renderFitch, type FormState } from "./fitch.js";

export class SessionController {
  snapshot: Snapshot | null = null;
  systems: SystemInfo[] = [];
  notice: string | null = null;
  lastTrace: [string, Assignment][] | null = null;
  tree: TreeUi = { picker: null };
  form: FormState = emptyForm();
  strategyName = "auto";
  tacticText = "";

  constructor(readonly client: Client) {}

  get sessionId(): string | null {
    return this.snapshot?.sessionId ?? null;
  }

  get version(): number {
    return this.snapshot?.version ?? 0;
  }

  systemInfo(): SystemInfo | null {
    if (!this.snapshot) return null;
    return this.systems.find((s) => s.name === this.snapshot!.system) ?? null;
  }

  ruleInfo(name: string | null): RuleInfo | null {
    if (!name) return null;
    return this.systemInfo()?.ruleInfo.find((r) => r.name === name) ?? null;
  }

  private reset(): void {
    this.notice = null;
    this.lastTrace = null;
    this.tree = { picker: null };
    this.form = emptyForm();
  }

  async loadSystems(): Promise<void> {
    this.systems = (await this.client.systems()).systems;
  }

  async createSession(system: string, goal: string): Promise<void> {
    if (this.systems.length === 0) await this.loadSystems();
    const r = await this.client.createSession(system, goal);
    this.snapshot = r.state;
    this.reset();
  }

  async loadSession(id: string): Promise<void> {
    if (this.systems.length === 0) await this.loadSystems();
    this.snapshot = await this.client.getSession(id);
    this.reset();
  }

  async refresh(): Promise<void> {
    if (this.sessionId) this.snapshot = await this.client.getSession(this.sessionId);
  }

  private async handleError(e: unknown): Promise<void> {
    if (e instanceof ApiError) {
      if (e.status === 409) {
        await this.refresh();
        this.notice = "proof changed elsewhere";
        return;
      }
      this.notice = `${e.error}: ${e.detail}`;
      return;
    }
    this.notice = e instanceof Error ? e.message : String(e);
  }

  private async mutate(op: () => Promise<Snapshot>): Promise<boolean> {
    try {
      this.snapshot = await op();
      this.notice = null;
      return true;
    } catch (e) {
      await this.handleError(e);
      return false;
    }
  }

  // -- goal-tree flow -------------------------------------------------------

  async openPicker(goalId: number): Promise<void> {
    if (!this.sessionId) return;
    try {
      const r = await this.client.applicable(this.sessionId, goalId);
      this.tree.picker = { goalId, rules: r.rules, chosenRule: null };
    } catch (e) {
      await this.handleError(e);
    }
  }

  choosePickerRule(rule: string | null): void {
    if (this.tree.picker) this.tree.picker.chosenRule = rule;
  }

  pickerCandidates(): Assignment[] {
    const p = this.tree.picker;
    if (!p || !p.chosenRule) return [];
    return p.rules.find((r) => r.rule === p.chosenRule)?.assignments ?? [];
  }

  closePicker(): void {
    this.tree.picker = null;
  }

  async submitCandidate(index: number): Promise<boolean> {
    const p = this.tree.picker;
    if (!this.sessionId || !p || !p.chosenRule) return false;
    const args = this.pickerCandidates()[index];
    if (!args) return false;
    const ok = await this.mutate(() =>
      this.client.apply(this.sessionId!, {
        version: this.version,
        rule: p.chosenRule!,
        target: p.goalId,
        args,
      }),
    );
    if (ok) this.tree.picker = null;
    return ok;
  }

  // -- line-proof form flow ---------------------------------------------------

  async selectFormRule(rule: string | null): Promise<void> {
    this.form = emptyForm();
    this.form.rule = rule;
    if (!rule || !this.sessionId) return;
    try {
      const r = await this.client.applicable(this.sessionId, null);
      this.form.candidates = r.rules.find((x) => x.rule === rule)?.assignments ?? [];
    } catch (e) {
      await this.handleError(e);
    }
  }

  setCite(role: string, value: string): void {
    this.form.cites[role] = value;
  }

  setRange(role: string, value: string): void {
    this.form.ranges[role] = value;
  }

  setSubst(atom: string, value: string): void {
    this.form.subst[atom] = value;
  }

  setFormField(field: "formula" | "result", value: string): void {
    this.form[field] = value;
  }

  async submitForm(): Promise<boolean> {
    const info = this.ruleInfo(this.form.rule);
    if (!this.sessionId || !info || !this.snapshot) return false;
    if (this.snapshot.style === "backward") return false;
    const built = buildSubmission(info, this.form, this.snapshot);
    if ("problems" in built) {
      this.notice = built.problems.join("; ");
      return false;
    }
    const ok = await this.mutate(() =>
      this.client.apply(this.sessionId!, {
        version: this.version,
        rule: info.name,
        args: built.args,
        ...(built.resultFormula ? { resultFormula: built.resultFormula } : {}),
      }),
    );
    if (ok) this.form = emptyForm();
    return ok;
  }

  async submitFormCandidate(index: number): Promise<boolean> {
    this.form.chosen = index;
    return this.submitForm();
  }

  // -- strategies, tactics, undo ----------------------------------------------

  async runStrategy(name?: string, fuel?: number): Promise<boolean> {
    return this.runTacticRequest({ strategy: name ?? this.strategyName, fuel });
  }

  async runTacticText(text?: string, fuel?: number): Promise<boolean> {
    const tactic = (text ?? this.tacticText).trim();
    if (!tactic) return false;
    return this.runTacticRequest({ tactic, fuel });
  }

  private async runTacticRequest(req: {
    tactic?: string;
    strategy?: string;
    fuel?: number;
  }): Promise<boolean> {
    if (!this.sessionId) return false;
    try {
      const r = await this.client.tactic(this.sessionId, {
        version: this.version,
        ...req,
      });
      this.snapshot = r.state;
      this.lastTrace = r.trace;
      this.notice = r.outcome === "success" ? null : (r.reason ?? "tactic failed");
      this.tree.picker = null;
      return r.outcome === "success";
    } catch (e) {
      await this.handleError(e);
      return false;
    }
  }

  async undo(): Promise<boolean> {
    if (!this.sessionId) return false;
    return this.mutate(() => this.client.undo(this.sessionId!, this.version));
  }

  // -- rendering ---------------------------------------------------------------

  render(): string {
    if (!this.snapshot) return `<div class="empty">no session loaded</div>`;
    const snap = this.snapshot;
    const header =
      `<header class="session">` +
      `<span class="system">${esc(snap.system)}</span>` +
      `<span class="goal">goal ${formulaSpan(snap.goal, infix(snap.goal))}</span>` +
      `<span class="meta">v${snap.version}, ${snap.steps} step${snap.steps === 1 ? "" : "s"}</span>` +
      `</header>`;
    const notice = this.notice
      ? `<div class="notice">${esc(this.notice)}</div>`
      : "";
    const strategies = this.systemInfo()?.strategies ?? [];
    const options = strategies
      .map((s) => {
        const selected = s === this.strategyName ? " selected" : "";
        return `<option value="${esc(s)}"${selected}>${esc(s)}</option>`;
      })
      .join("");
    const controls =
      `<div class="controls">` +
      `<select data-action="strategy-name">${options}</select>` +
      `<button data-action="run-strategy">run strategy</button>` +
      `<input type="text" data-field="tactic" placeholder="Atomic(impI)"` +
      ` value="${esc(this.tacticText)}">` +
      `<button data-action="run-tactic">run tactic</button>` +
      `<button data-action="undo">undo</button>` +
      `</div>`;
    const trace =
      this.lastTrace && this.lastTrace.length > 0
        ? `<div class="trace">${this.lastTrace
            .map(([rule]) => `<span class="chip">${esc(rule)}</span>`)
            .join("")}</div>`
        : "";
    const view =
      snap.style === "backward"
        ? renderGoalTree(snap as TreeSnapshot, this.tree)
        : renderFitch(
            snap as LineSnapshot,
            this.systemInfo()?.ruleInfo ?? [],
            this.form,
          );
    return header + notice + controls + trace + view;
  }
}
