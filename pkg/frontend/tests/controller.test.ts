import { afterEach, describe, expect, it, vi } from "vitest";

import { Client } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { systemsFixture, treeSnapshot } from "./support.js";

type Handler = (body: unknown) => { status: number; json: unknown };

/** Route table standing in for the service; keys are "METHOD path". */
function stubFetch(routes: Record<string, Handler>): string[] {
  const calls: string[] = [];
  vi.stubGlobal("fetch", async (url: string, init?: RequestInit) => {
    const method = init?.method ?? "GET";
    const path = url.replace("http://stub", "");
    const key = `${method} ${path}`;
    calls.push(key);
    const handler = routes[key];
    if (!handler) throw new TypeError(`fetch failed: no route for ${key}`);
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    const { status, json } = handler(body);
    return new Response(JSON.stringify(json), {
      status,
      headers: { "content-type": "application/json" },
    });
  });
  return calls;
}

function midproofController(): SessionController {
  const controller = new SessionController(new Client("http://stub"));
  controller.systems = systemsFixture();
  controller.snapshot = treeSnapshot("tree-midproof");
  return controller;
}

const SID = treeSnapshot("tree-midproof").sessionId;

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("stale version handling", () => {
  it("refreshes the snapshot and posts a notice on 409", async () => {
    const fresh = treeSnapshot("tree-midproof");
    fresh.version = 99;
    const calls = stubFetch({
      [`POST /api/v1/sessions/${SID}/applicable`]: () => ({
        status: 200,
        json: { target: 15, rules: [{ rule: "close", assignments: [{ hypothesis: { f: "A" } }] }] },
      }),
      [`POST /api/v1/sessions/${SID}/apply`]: () => ({
        status: 409,
        json: { error: "StaleVersion", detail: "session is at version 99, request says 6" },
      }),
      [`GET /api/v1/sessions/${SID}`]: () => ({ status: 200, json: fresh }),
    });

    const controller = midproofController();
    await controller.openPicker(15);
    controller.choosePickerRule("close");
    const ok = await controller.submitCandidate(0);

    expect(ok).toBe(false);
    expect(controller.notice).toBe("proof changed elsewhere");
    expect(controller.version).toBe(99);
    expect(calls).toContain(`GET /api/v1/sessions/${SID}`);
  });
});

describe("engine rejections", () => {
  it("surfaces the engine error name and leaves the proof unchanged", async () => {
    stubFetch({
      [`POST /api/v1/sessions/${SID}/applicable`]: () => ({
        status: 200,
        json: { target: 15, rules: [{ rule: "close", assignments: [{ hypothesis: { f: "A" } }] }] },
      }),
      [`POST /api/v1/sessions/${SID}/apply`]: () => ({
        status: 422,
        json: { error: "RuleNotApplicable", detail: "no hypothesis matches the goal" },
      }),
    });

    const controller = midproofController();
    const before = controller.snapshot;
    await controller.openPicker(15);
    controller.choosePickerRule("close");
    const ok = await controller.submitCandidate(0);

    expect(ok).toBe(false);
    expect(controller.notice).toContain("RuleNotApplicable");
    expect(controller.snapshot).toBe(before);
    expect(controller.version).toBe(before!.version);
  });

  it("keeps rendering after a network failure", async () => {
    stubFetch({});
    const controller = midproofController();
    const ok = await controller.undo();
    expect(ok).toBe(false);
    expect(controller.notice).toContain("fetch failed");
    expect(controller.render()).toContain("fetch failed");
  });
});

describe("tactic outcomes", () => {
  it("stores the reason and returned state when a run fails", async () => {
    const same = treeSnapshot("tree-midproof");
    stubFetch({
      [`POST /api/v1/sessions/${SID}/tactic`]: (body) => {
        expect((body as { strategy: string }).strategy).toBe("auto");
        return {
          status: 200,
          json: { outcome: "failure", reason: "proof left unfinished", trace: [], state: same },
        };
      },
    });

    const controller = midproofController();
    const ok = await controller.runStrategy("auto");
    expect(ok).toBe(false);
    expect(controller.notice).toBe("proof left unfinished");
    expect(controller.version).toBe(same.version);
  });

  it("keeps the applied trace on success", async () => {
    const done = treeSnapshot("tree-complete");
    stubFetch({
      [`POST /api/v1/sessions/${SID}/tactic`]: () => ({
        status: 200,
        json: {
          outcome: "success",
          reason: null,
          trace: [
            ["impI", {}],
            ["close", { hypothesis: { f: "A" } }],
          ],
          state: done,
        },
      }),
    });

    const controller = midproofController();
    const ok = await controller.runStrategy("auto");
    expect(ok).toBe(true);
    expect(controller.lastTrace?.map(([r]) => r)).toEqual(["impI", "close"]);
    expect(controller.notice).toBeNull();
    expect(controller.render()).toContain("Proof complete");
  });
});

describe("form rule selection", () => {
  it("fetches and filters the enumerated candidates for the picked rule", async () => {
    const fitch = systemsFixture();
    const controller = new SessionController(new Client("http://stub"));
    controller.systems = fitch;
    const snap = treeSnapshot("tree-midproof");
    controller.snapshot = snap;
    stubFetch({
      [`POST /api/v1/sessions/${SID}/applicable`]: (body) => {
        expect((body as { target: null }).target).toBeNull();
        return {
          status: 200,
          json: {
            target: null,
            rules: [
              { rule: "premise", assignments: [{}] },
              { rule: "andI", assignments: [{ left: 1, right: 2 }] },
            ],
          },
        };
      },
    });

    await controller.selectFormRule("andI");
    expect(controller.form.rule).toBe("andI");
    expect(controller.form.candidates).toEqual([{ left: 1, right: 2 }]);
  });
});
