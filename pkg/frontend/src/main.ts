// Entry point: wires the session state machine to the DOM. Edits are
// debounced into a single what-if request (at most one in flight, stale
// responses dropped by sequence number); interventions are explicit.

import { ApiClient } from "./api.js";
import {
  applyIntervention,
  applyWhatifResponse,
  editFeature,
  exportSession,
  initSession,
  nextRequest,
  SessionState,
  undoLastIntervention,
} from "./state.js";
import {
  formatPrediction,
  renderFeatureEditors,
  renderHistory,
  renderModelPicker,
  renderRanking,
} from "./render.js";

const DEBOUNCE_MS = 300;

const api = new ApiClient(
  new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8765",
);

let state: SessionState | null = null;
let debounceTimer: number | undefined;
let inFlight = false;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function redraw(): void {
  if (!state) return;
  el("prediction").textContent = formatPrediction(state);
  el("editors").innerHTML = renderFeatureEditors(state);
  el("ranking").innerHTML = renderRanking(state);
  el("history").innerHTML = renderHistory(state.history);
  bindEditors();
  bindApplyButtons();
}

function scheduleWhatif(): void {
  window.clearTimeout(debounceTimer);
  debounceTimer = window.setTimeout(() => void runWhatif(), DEBOUNCE_MS);
}

async function runWhatif(): Promise<void> {
  if (!state || inFlight) {
    if (state) scheduleWhatif(); // retry after the current request lands
    return;
  }
  const [next, seq] = nextRequest(state);
  state = next;
  inFlight = true;
  try {
    const report = await api.whatif(state.modelId, state.instance, state.k, state.delta);
    state = applyWhatifResponse(state, seq, report);
  } catch (err) {
    el("status").textContent = String(err);
  } finally {
    inFlight = false;
  }
  redraw();
}

function bindEditors(): void {
  document.querySelectorAll<HTMLInputElement>("#editors input").forEach((input) => {
    input.addEventListener("change", () => {
      if (!state) return;
      const name = input.dataset.feature!;
      const value = input.type === "checkbox" ? (input.checked ? 1 : 0)
        : Number(input.value);
      state = editFeature(state, name, value);
      scheduleWhatif();
    });
  });
}

function bindApplyButtons(): void {
  document.querySelectorAll<HTMLButtonElement>("button[data-apply]").forEach((btn) => {
    btn.addEventListener("click", () => void runIntervention(btn.dataset.apply!));
  });
}

async function runIntervention(feature: string): Promise<void> {
  if (!state) return;
  const entry = state.entries.find((e) => e.feature === feature);
  if (!entry) return;
  const resp = await api.intervene(
    state.modelId, state.instance, entry.feature, entry.treated,
    state.k, state.delta,
  );
  state = applyIntervention(state, entry, resp.new_prediction, resp.report);
  redraw();
}

async function selectModel(modelId: string): Promise<void> {
  const meta = await api.getModel(modelId);
  const k = Number((el("top-k") as HTMLInputElement).value) || 3;
  const delta = Number((el("delta") as HTMLInputElement).value) || 1.0;
  state = initSession(meta, k, delta);
  redraw();
  await runWhatif();
}

async function boot(): Promise<void> {
  const models = await api.listModels();
  el("picker").innerHTML = renderModelPicker(models, models[0]?.model_id ?? null);
  const picker = document.getElementById("model-picker") as HTMLSelectElement | null;
  if (!picker) return; // empty registry: empty-state message is shown
  picker.addEventListener("change", () => void selectModel(picker.value));
  el("export").addEventListener("click", () => {
    if (!state) return;
    const blob = new Blob([JSON.stringify(exportSession(state), null, 2)],
      { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = `whatif-session-${state.modelId}.json`;
    link.click();
  });
  el("undo").addEventListener("click", () => {
    if (!state) return;
    state = undoLastIntervention(state);
    redraw();
    scheduleWhatif();
  });
  await selectModel(picker.value);
}

void boot().catch((err) => {
  el("status").textContent = `failed to start: ${err}`;
});
