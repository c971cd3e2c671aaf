// DOM wiring: panels for the program text (with identifier badges), the
// stores, the auxiliary store and the enabled-rule buttons.

import { SessionApi } from "./api.js";
import { DebuggerController, type ControllerState } from "./controller.js";
import {
  deltaHtml, diagnosticHtml, programHtml, redexListHtml, statusHtml,
  storesHtml,
} from "./view.js";

const DEFAULT_SOURCE = `par {
  while w1 ((m - c - r - 1) >= 0) do
    c = c + 1;
  end;
} {
  r = 2;
}
`;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function parseInit(text: string): Record<string, number> {
  const init: Record<string, number> = {};
  for (const piece of text.split(",")) {
    const item = piece.trim();
    if (!item) continue;
    const [name, value] = item.split("=");
    init[name.trim()] = Number(value);
  }
  return init;
}

function render(state: ControllerState): void {
  const program = el<HTMLDivElement>("program");
  const stores = el<HTMLDivElement>("stores");
  const delta = el<HTMLDivElement>("delta");
  const redexes = el<HTMLDivElement>("redexes");
  const status = el<HTMLDivElement>("status");
  const error = el<HTMLDivElement>("error");

  error.innerHTML = state.error ? diagnosticHtml(state.error) : "";
  if (!state.view) {
    status.innerHTML = "load a program to start a session";
    return;
  }
  program.innerHTML = programHtml(state.view.renderedProgram, state.lastIdent);
  stores.innerHTML = storesHtml(state.view.stores);
  delta.innerHTML = deltaHtml(state.view.delta);
  redexes.innerHTML = redexListHtml(state.view.enabledRedexes, state.busy);
  status.innerHTML = statusHtml(state.view);

  el<HTMLButtonElement>("btn-back").disabled =
    state.busy || state.panel === "reverse" || state.view.stepIndex === 0;
  el<HTMLButtonElement>("btn-run").disabled = state.busy || state.view.terminal;
  el<HTMLButtonElement>("btn-reverse").disabled =
    state.busy || state.panel === "reverse" || !state.view.terminal;
  el<HTMLButtonElement>("btn-forward-panel").disabled =
    state.busy || state.panel === "forward";
  el<HTMLDivElement>("panel-title").textContent =
    state.panel === "reverse" ? "inverted program (reverse session)"
      : "annotated program";
}

export function boot(): void {
  const api = new SessionApi("");
  const controller = new DebuggerController(api, render);

  el<HTMLTextAreaElement>("source").value = DEFAULT_SOURCE;
  el<HTMLInputElement>("init").value = "m=4,c=0,r=0";

  el<HTMLButtonElement>("btn-load").addEventListener("click", () => {
    void controller.loadProgram(
      el<HTMLTextAreaElement>("source").value,
      parseInit(el<HTMLInputElement>("init").value),
    );
  });
  el<HTMLButtonElement>("btn-back").addEventListener("click", () => {
    void controller.stepBack();
  });
  el<HTMLButtonElement>("btn-run").addEventListener("click", () => {
    void controller.runToCompletion();
  });
  el<HTMLButtonElement>("btn-reverse").addEventListener("click", () => {
    void controller.reverseRun();
  });
  el<HTMLButtonElement>("btn-forward-panel").addEventListener("click", () => {
    void controller.showForward();
  });
  el<HTMLDivElement>("redexes").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const index = target.dataset?.index;
    if (index !== undefined) {
      void controller.stepChoice(Number(index));
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("program")) {
  boot();
}
