/** Browser bootstrap: wires DOM events to the session controller. */

import { Client } from "./api.js";
import { SessionController } from "./controller.js";
import { esc } from "./html.js";
import { infix } from "./formula.js";

const client = new Client("");
const controller = new SessionController(client);

const app = document.getElementById("app")!;
const startForm = document.getElementById("start") as HTMLFormElement;
const systemSelect = document.getElementById("system") as HTMLSelectElement;
const exampleSelect = document.getElementById("examples") as HTMLSelectElement;
const goalInput = document.getElementById("goal") as HTMLInputElement;
const sessionInput = document.getElementById("session-id") as HTMLInputElement;
const startError = document.getElementById("start-error")!;

function redraw(): void {
  app.innerHTML = controller.render();
}

function refreshExamples(): void {
  const system = controller.systems.find((s) => s.name === systemSelect.value);
  const options = (system?.examples ?? [])
    .map((e) => `<option value="${esc(e)}">${esc(infix(e))}</option>`)
    .join("");
  exampleSelect.innerHTML = `<option value="">examples</option>` + options;
}

async function boot(): Promise<void> {
  await controller.loadSystems();
  systemSelect.innerHTML = controller.systems
    .map((s) => `<option value="${esc(s.name)}">${esc(s.name)}</option>`)
    .join("");
  refreshExamples();
}

systemSelect.addEventListener("change", refreshExamples);

exampleSelect.addEventListener("change", () => {
  if (exampleSelect.value) goalInput.value = exampleSelect.value;
});

startForm.addEventListener("submit", (ev) => {
  ev.preventDefault();
  startError.textContent = "";
  const existing = sessionInput.value.trim();
  const task = existing
    ? controller.loadSession(existing)
    : controller.createSession(systemSelect.value, goalInput.value.trim());
  task.then(redraw).catch((e) => {
    startError.textContent = e instanceof Error ? e.message : String(e);
  });
});

app.addEventListener("click", async (ev) => {
  const el = (ev.target as HTMLElement).closest<HTMLElement>("[data-action]");
  if (!el || el instanceof HTMLSelectElement) return;
  switch (el.dataset["action"]) {
    case "open-picker":
      await controller.openPicker(Number(el.dataset["goal"]));
      break;
    case "close-picker":
      controller.closePicker();
      break;
    case "apply-candidate":
      await controller.submitCandidate(Number(el.dataset["index"]));
      break;
    case "fitch-candidate":
      await controller.submitFormCandidate(Number(el.dataset["index"]));
      break;
    case "fitch-submit":
      await controller.submitForm();
      break;
    case "run-strategy":
      await controller.runStrategy();
      break;
    case "run-tactic":
      await controller.runTacticText();
      break;
    case "undo":
      await controller.undo();
      break;
    default:
      return;
  }
  redraw();
});

app.addEventListener("change", async (ev) => {
  const el = ev.target;
  if (!(el instanceof HTMLSelectElement)) return;
  const action = el.dataset["action"];
  if (action === "picker-rule") {
    controller.choosePickerRule(el.value || null);
    redraw();
  } else if (action === "fitch-rule") {
    await controller.selectFormRule(el.value || null);
    redraw();
  } else if (action === "strategy-name") {
    controller.strategyName = el.value;
  } else if (el.dataset["range"] !== undefined) {
    controller.setRange(el.dataset["range"]!, el.value);
  }
});

// text fields update state silently so typing never loses focus
app.addEventListener("input", (ev) => {
  const el = ev.target;
  if (!(el instanceof HTMLInputElement)) return;
  if (el.dataset["cite"] !== undefined) controller.setCite(el.dataset["cite"]!, el.value);
  else if (el.dataset["subst"] !== undefined) controller.setSubst(el.dataset["subst"]!, el.value);
  else if (el.dataset["field"] === "formula") controller.setFormField("formula", el.value);
  else if (el.dataset["field"] === "result") controller.setFormField("result", el.value);
  else if (el.dataset["field"] === "tactic") controller.tacticText = el.value;
});

boot().catch((e) => {
  startError.textContent = `could not reach the service: ${e instanceof Error ? e.message : e}`;
});
