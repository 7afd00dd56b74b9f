import { describe, expect, it } from "vitest";

import type { RuleInfo } from "../src/api.js";
import { assignmentLabel, renderGoalTree } from "../src/goaltree.js";
import { buildSubmission, emptyForm, renderFitch } from "../src/fitch.js";
import {
  countMatches,
  formulaTitles,
  lineSnapshot,
  systemsFixture,
  treeSnapshot,
} from "./support.js";

const SYSTEMS = systemsFixture();

function ruleInfoOf(system: string, rule: string): RuleInfo {
  const sys = SYSTEMS.find((s) => s.name === system)!;
  return sys.ruleInfo.find((r) => r.name === rule)!;
}

describe("goal tree rendering", () => {
  const snap = treeSnapshot("tree-midproof");
  const html = renderGoalTree(snap, { picker: null });

  it("colors nodes exactly by their server status", () => {
    for (const node of snap.nodes) {
      expect(html).toContain(`class="node status-${node.status}" data-node="${node.id}"`);
    }
    expect(countMatches(html, '"node status-goal"')).toBe(2);
    expect(countMatches(html, '"node status-leaf"')).toBe(1);
    expect(countMatches(html, '"node status-regular"')).toBe(5);
  });

  it("gives every open goal exactly one interaction area", () => {
    expect(countMatches(html, 'class="interaction"')).toBe(snap.openGoals.length);
    for (const goal of snap.openGoals) {
      expect(countMatches(html, `<div class="interaction" data-goal="${goal}">`)).toBe(1);
    }
  });

  it("keeps the exact server formulas in the tooltips", () => {
    const titles = new Set(formulaTitles(html));
    for (const node of snap.nodes) {
      expect(titles.has(node.formula)).toBe(true);
    }
  });

  it("draws the root at the bottom, premises above", () => {
    const root = html.indexOf(`data-node="${snap.root}"`);
    for (const node of snap.nodes) {
      if (node.id === snap.root) continue;
      expect(html.indexOf(`data-node="${node.id}"`)).toBeLessThan(root);
    }
  });

  it("counts the open goals in the badge", () => {
    expect(html).toContain("2 open goals");
  });

  it("shows the completeness badge and no interaction areas when done", () => {
    const done = renderGoalTree(treeSnapshot("tree-complete"), { picker: null });
    expect(done).toContain("Proof complete");
    expect(done).not.toContain('class="interaction"');
    expect(done).not.toContain("status-goal\" data-node");
  });

  it("lists rules with candidate counts and clickable candidates", () => {
    const ui = {
      picker: {
        goalId: 15,
        rules: [
          { rule: "close", assignments: [{ hypothesis: { f: "A" } }] },
          { rule: "impI", assignments: [] },
        ],
        chosenRule: "close",
      },
    };
    const picked = renderGoalTree(snap, ui);
    expect(picked).toContain("close (1)");
    expect(picked).toContain("impI (0)");
    expect(picked).toContain('data-action="apply-candidate" data-goal="15" data-index="0"');
    expect(picked).toContain("hypothesis: A");
  });
});

describe("assignment labels", () => {
  it("names every wire shape", () => {
    expect(assignmentLabel({})).toBe("apply");
    expect(assignmentLabel({ left: 1, right: 2 })).toBe("left: line 1;  right: line 2");
    expect(assignmentLabel({ implication: { f: "(-> A B)" } })).toBe(
      "implication: A → B",
    );
    expect(assignmentLabel({ left: [2, 4] })).toBe("left: lines 2-4");
    expect(assignmentLabel({ substitution: { subst: { b: "q", a: "p" } } })).toBe(
      "substitution: a := p, b := q",
    );
  });
});

describe("fitch rendering", () => {
  const open = lineSnapshot("fitch-open-frame");
  const fitchRules = SYSTEMS.find((s) => s.name === "fitch-intuitionistic")!.ruleInfo;

  it("numbers lines and indents them by depth", () => {
    const html = renderFitch(open, fitchRules, emptyForm());
    for (const line of open.lines) {
      expect(html).toContain(`data-line="${line.index}"`);
    }
    const first = html.slice(html.indexOf('<div class="line'), html.indexOf('data-line="2"'));
    expect(countMatches(first, '<span class="bar">')).toBe(1);
    expect(first).toContain('class="line hypothesis" data-line="1"');
    expect(html).toContain("andE 1");
    expect(html).toContain("andI 2, 3");
  });

  it("marks where the next line goes while a subproof is open", () => {
    const html = renderFitch(open, fitchRules, emptyForm());
    expect(html).toContain("next line goes here");
    const closed = renderFitch(lineSnapshot("fitch-closed"), fitchRules, emptyForm());
    expect(closed).not.toContain("next line goes here");
    expect(closed).toContain("impI 1-4");
    expect(closed).toContain("Proof complete");
  });

  it("keeps the exact server formulas in the tooltips", () => {
    const html = renderFitch(open, fitchRules, emptyForm());
    const titles = new Set(formulaTitles(html));
    for (const line of open.lines) {
      expect(titles.has(line.formula)).toBe(true);
    }
  });

  it("reveals citation inputs for a line rule", () => {
    const form = emptyForm();
    form.rule = "andI";
    const html = renderFitch(open, fitchRules, form);
    expect(html).toContain('data-cite="left"');
    expect(html).toContain('data-cite="right"');
    expect(html).not.toContain('data-field="formula"');
    expect(html).toContain('data-action="fitch-submit"');
  });

  it("reveals a formula input for premises and a result input for orI", () => {
    const form = emptyForm();
    form.rule = "premise";
    expect(renderFitch(open, fitchRules, form)).toContain('data-field="formula"');
    form.rule = "orI";
    const html = renderFitch(open, fitchRules, form);
    expect(html).toContain('data-cite="disjunct"');
    expect(html).toContain('data-field="result"');
  });

  it("offers the closed subproofs for range slots", () => {
    const form = emptyForm();
    form.rule = "orE";
    const html = renderFitch(lineSnapshot("fitch-closed"), fitchRules, form);
    expect(html).toContain('data-range="left"');
    expect(html).toContain('<option value="1-4">lines 1-4</option>');
  });

  it("reveals substitution inputs for an axiom schema", () => {
    const hilbertRules = SYSTEMS.find((s) => s.name === "hilbert-k")!.ruleInfo;
    const form = emptyForm();
    form.rule = "K1";
    const html = renderFitch(lineSnapshot("hilbert-axiom"), hilbertRules, form);
    expect(html).toContain('data-subst="a"');
    expect(html).toContain('data-subst="b"');
    expect(html).toContain("(-&gt; a (-&gt; b a))");
  });

  it("renders fetched candidates as buttons", () => {
    const form = emptyForm();
    form.rule = "andI";
    form.candidates = [{ left: 2, right: 3 }];
    const html = renderFitch(open, fitchRules, form);
    expect(html).toContain('data-action="fitch-candidate" data-index="0"');
    expect(html).toContain("left: line 2");
  });
});

describe("buildSubmission", () => {
  const open = lineSnapshot("fitch-open-frame");
  const closed = lineSnapshot("fitch-closed");
  const andI = ruleInfoOf("fitch-intuitionistic", "andI");
  const premise = ruleInfoOf("fitch-intuitionistic", "premise");
  const orE = ruleInfoOf("fitch-intuitionistic", "orE");
  const k1 = ruleInfoOf("hilbert-k", "K1");

  it("turns citation text into wire integers", () => {
    const form = emptyForm();
    form.rule = "andI";
    form.cites = { left: "2", right: "3" };
    expect(buildSubmission(andI, form, open)).toEqual({ args: { left: 2, right: 3 } });
  });

  it("refuses incomplete or unparseable citations", () => {
    const form = emptyForm();
    form.rule = "andI";
    form.cites = { left: "2" };
    const out = buildSubmission(andI, form, open);
    expect(out).toHaveProperty("problems");
    form.cites = { left: "2.5", right: "3" };
    expect(buildSubmission(andI, form, open)).toHaveProperty("problems");
  });

  it("refuses citations that are out of scope", () => {
    const form = emptyForm();
    form.rule = "andI";
    form.cites = { left: "2", right: "5" };
    const out = buildSubmission(andI, form, closed);
    expect("problems" in out && out.problems.join(" ")).toContain("out of scope");
  });

  it("passes premise formulas through as text for the server to parse", () => {
    const form = emptyForm();
    form.rule = "premise";
    form.formula = " (and A B) ";
    expect(buildSubmission(premise, form, open)).toEqual({
      args: { formula: "(and A B)" },
    });
  });

  it("collects ranges and line citations together", () => {
    const form = emptyForm();
    form.rule = "orE";
    form.cites = { disjunction: "5" };
    form.ranges = { left: "1-4", right: "1-4" };
    expect(buildSubmission(orE, form, closed)).toEqual({
      args: { disjunction: 5, left: [1, 4], right: [1, 4] },
    });
  });

  it("wraps axiom substitutions in the wire shape", () => {
    const form = emptyForm();
    form.rule = "K1";
    form.subst = { a: "p", b: "(-> q q)" };
    expect(buildSubmission(k1, form, lineSnapshot("hilbert-axiom"))).toEqual({
      args: { substitution: { subst: { a: "p", b: "(-> q q)" } } },
    });
    form.subst = { a: "p" };
    expect(buildSubmission(k1, form, lineSnapshot("hilbert-axiom"))).toHaveProperty(
      "problems",
    );
  });

  it("prefers a chosen enumerated candidate over the manual fields", () => {
    const form = emptyForm();
    form.rule = "andI";
    form.candidates = [{ left: 2, right: 3 }];
    form.chosen = 0;
    form.cites = { left: "9", right: "9" };
    expect(buildSubmission(andI, form, open)).toEqual({ args: { left: 2, right: 3 } });
  });

  it("forwards an optional result formula separately", () => {
    const orI = ruleInfoOf("fitch-intuitionistic", "orI");
    const form = emptyForm();
    form.rule = "orI";
    form.cites = { disjunct: "2" };
    form.result = "(or B C)";
    expect(buildSubmission(orI, form, open)).toEqual({
      args: { disjunct: 2 },
      resultFormula: "(or B C)",
    });
  });
});
