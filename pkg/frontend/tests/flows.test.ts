/** End-to-end flows against a live service process.
 *
 * These tests spawn the Python server, drive it exactly the way the browser
 * code does (controller methods over the HTTP client), and check that the
 * final exports match the repository's golden documents byte for byte.
 */

import { readFileSync } from "node:fs";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Client, type TreeSnapshot } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { startServer, type RunningServer } from "./server.js";
import { canonicalJson, formulaTitles } from "./support.js";

const WORKED_GOAL = "(-> (-> (and A B) C) (-> B (-> A C)))";

function golden(name: string): string {
  return readFileSync(new URL(`../../tests/golden/${name}.json`, import.meta.url), "utf8");
}

let server: RunningServer;
let client: Client;

beforeAll(async () => {
  server = await startServer();
  client = new Client(server.baseUrl);
});

afterAll(async () => {
  await server.stop();
});

function tree(c: SessionController): TreeSnapshot {
  expect(c.snapshot?.style).toBe("backward");
  return c.snapshot as TreeSnapshot;
}

/** All formula strings a snapshot carries, for tooltip round-trip checks. */
function serverFormulas(c: SessionController): Set<string> {
  const snap = c.snapshot!;
  const out = new Set<string>([snap.goal]);
  if (snap.style === "backward") {
    for (const n of snap.nodes) {
      out.add(n.formula);
      for (const h of n.hypotheses) out.add(h);
    }
  } else {
    for (const l of snap.lines) out.add(l.formula);
    for (const f of snap.frames) {
      if (f.hypothesis) out.add(f.hypothesis);
      if (f.target) out.add(f.target);
    }
  }
  return out;
}

describe("goal-tree flow reconstructs the conjunction-to-nested-implications proof", () => {
  it("drives rule picker, candidate, submit for every step and matches the golden export", async () => {
    const c = new SessionController(client);
    await c.loadSystems();
    await c.createSession("nd-intuitionistic", WORKED_GOAL);

    const rootId = tree(c).root;
    expect(tree(c).nodes.find((n) => n.id === rootId)?.status).toBe("goal");

    const script = ["impI", "impI", "impI", "impE", "andI", "close", "close", "close"];
    for (const rule of script) {
      const snap = tree(c);
      let target = snap.openGoals[0]!;
      if (rule === "andI") {
        const conj = snap.openGoals.find((g) =>
          snap.nodes.find((n) => n.id === g)!.formula.startsWith("(and"),
        );
        expect(conj).toBeDefined();
        target = conj!;
      }
      await c.openPicker(target);
      expect(c.tree.picker?.goalId).toBe(target);
      c.choosePickerRule(rule);
      const candidates = c.pickerCandidates();
      expect(candidates.length).toBeGreaterThan(0);
      if (rule === "impI") expect(candidates).toHaveLength(1);
      const ok = await c.submitCandidate(0);
      expect(ok).toBe(true);
      expect(c.notice).toBeNull();

      if (rule === script[0] && snap.steps === 0) {
        const after = tree(c);
        expect(after.nodes.find((n) => n.id === rootId)?.status).toBe("regular");
        const child = after.nodes.find((n) => n.parent === rootId);
        expect(child?.status).toBe("goal");
      }
    }

    const final = tree(c);
    expect(final.complete).toBe(true);
    expect(final.openGoals).toHaveLength(0);
    expect(final.steps).toBe(script.length);

    const html = c.render();
    expect(html).toContain("Proof complete");
    const known = serverFormulas(c);
    const titles = formulaTitles(html);
    expect(titles.length).toBeGreaterThan(0);
    for (const t of titles) expect(known.has(t)).toBe(true);

    const doc = await client.exportDocument(c.sessionId!);
    expect(canonicalJson(doc)).toBe(golden("worked-example-export"));
  });
});

describe("single-form flow builds the three-line conjunction proof", () => {
  it("enters premises and the introduction step through the form and matches the golden export", async () => {
    const c = new SessionController(client);
    await c.loadSystems();
    await c.createSession("fitch-intuitionistic", "(and A B)");

    for (const letter of ["A", "B"]) {
      await c.selectFormRule("premise");
      c.setFormField("formula", letter);
      expect(await c.submitForm()).toBe(true);
    }
    expect(c.snapshot?.style).toBe("fitch");
    if (c.snapshot?.style !== "backward") {
      expect(c.snapshot?.lines.map((l) => l.formula)).toEqual(["A", "B"]);
    }

    // a citation of a line that does not exist is stopped before any request
    const versionBefore = c.version;
    await c.selectFormRule("andI");
    c.setCite("left", "9");
    c.setCite("right", "2");
    expect(await c.submitForm()).toBe(false);
    expect(c.notice).toContain("line 9 does not exist");
    expect(c.version).toBe(versionBefore);

    await c.selectFormRule("andI");
    c.setCite("left", "1");
    c.setCite("right", "2");
    expect(await c.submitForm()).toBe(true);

    const snap = c.snapshot!;
    expect(snap.complete).toBe(true);
    if (snap.style !== "backward") {
      expect(snap.lines).toHaveLength(3);
      expect(snap.lines[2]?.cites).toEqual([1, 2]);
    }
    expect(c.render()).toContain("Proof complete");

    const doc = await client.exportDocument(c.sessionId!);
    expect(canonicalJson(doc)).toBe(golden("fitch-conjunction-export"));
  });
});

describe("strategy runs and undo", () => {
  it("closes the proof with the automatic strategy and backs out the last step", async () => {
    const c = new SessionController(client);
    await c.loadSystems();
    await c.createSession("nd-intuitionistic", WORKED_GOAL);

    expect(await c.runStrategy("auto")).toBe(true);
    expect(c.snapshot?.complete).toBe(true);
    expect(c.lastTrace?.length).toBeGreaterThan(0);
    expect(c.render()).toContain("Proof complete");
    for (const n of tree(c).nodes) expect(n.status).not.toBe("goal");

    const stepsBefore = c.snapshot!.steps;
    expect(await c.undo()).toBe(true);
    expect(c.snapshot?.steps).toBe(stepsBefore - 1);
    expect(c.snapshot?.complete).toBe(false);
  });
});

describe("concurrent edits", () => {
  it("tells the stale controller the proof changed elsewhere and refreshes it", async () => {
    const a = new SessionController(client);
    await a.loadSystems();
    await a.createSession("nd-intuitionistic", WORKED_GOAL);
    const sid = a.sessionId!;

    const b = new SessionController(client);
    await b.loadSession(sid);

    // b prepares an application, then a wins the race
    await b.openPicker(tree(b).openGoals[0]!);
    b.choosePickerRule("impI");

    await a.openPicker(tree(a).openGoals[0]!);
    a.choosePickerRule("impI");
    expect(await a.submitCandidate(0)).toBe(true);

    expect(await b.submitCandidate(0)).toBe(false);
    expect(b.notice).toBe("proof changed elsewhere");
    expect(b.version).toBe(a.version);
    expect(b.render()).toContain("proof changed elsewhere");
  });
});
