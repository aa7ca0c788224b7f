// Session state and its pure transition functions. The UI layer owns timing
// (debounce, in-flight limits); everything here is synchronous and
// deterministic so the decision loop can be tested without a browser.

import type { ModelMeta, ReportEntry, WhatIfReport } from "./schema.js";

export interface HistoryRow {
  feature: string;
  oldValue: number;
  newValue: number;
  cde: number | null;
  predictionBefore: number;
  predictionAfter: number;
  instanceBefore: Record<string, number>;
  undone: boolean;
}

export interface SessionState {
  modelId: string;
  meta: ModelMeta;
  instance: Record<string, number>;
  prediction: number | null;
  entries: ReportEntry[];
  lastReport: WhatIfReport | null;
  history: HistoryRow[];
  requestSeq: number; // last issued request id
  appliedSeq: number; // last response folded into the state
  k: number;
  delta: number;
}

/** Default instance: binary features start at their observed minimum,
 *  continuous ones at the midpoint of the observed range. */
export function defaultInstance(meta: ModelMeta): Record<string, number> {
  const instance: Record<string, number> = {};
  for (const f of meta.features) {
    instance[f.name] = f.kind === "binary" ? f.min : (f.min + f.max) / 2;
  }
  return instance;
}

export function initSession(meta: ModelMeta, k = 3, delta = 1.0): SessionState {
  return {
    modelId: meta.model_id,
    meta,
    instance: defaultInstance(meta),
    prediction: null,
    entries: [],
    lastReport: null,
    history: [],
    requestSeq: 0,
    appliedSeq: 0,
    k,
    delta,
  };
}

export function editFeature(
  state: SessionState,
  name: string,
  value: number,
): SessionState {
  if (!(name in state.instance)) {
    throw new Error(`unknown feature ${name}`);
  }
  return { ...state, instance: { ...state.instance, [name]: value } };
}

/** Allocate a sequence number for an outgoing what-if request. */
export function nextRequest(state: SessionState): [SessionState, number] {
  const seq = state.requestSeq + 1;
  return [{ ...state, requestSeq: seq }, seq];
}

/** Fold a what-if response into the state; stale responses (older than the
 *  newest applied one) are discarded unchanged. */
export function applyWhatifResponse(
  state: SessionState,
  seq: number,
  report: WhatIfReport,
): SessionState {
  if (seq <= state.appliedSeq) {
    return state;
  }
  return {
    ...state,
    appliedSeq: seq,
    prediction: report.prediction,
    entries: report.entries,
    lastReport: report,
  };
}

export function applyIntervention(
  state: SessionState,
  entry: ReportEntry,
  newPrediction: number,
  report: WhatIfReport,
): SessionState {
  const row: HistoryRow = {
    feature: entry.feature,
    oldValue: state.instance[entry.feature],
    newValue: entry.treated,
    cde: entry.cde,
    predictionBefore: state.prediction ?? Number.NaN,
    predictionAfter: newPrediction,
    instanceBefore: { ...state.instance },
    undone: false,
  };
  return {
    ...state,
    instance: { ...state.instance, [entry.feature]: entry.treated },
    prediction: newPrediction,
    entries: report.entries,
    lastReport: report,
    history: [...state.history, row],
  };
}

/** Undo the most recent intervention: the history row stays (append-only log)
 *  but is flagged, and the working instance reverts; the caller re-queries. */
export function undoLastIntervention(state: SessionState): SessionState {
  for (let i = state.history.length - 1; i >= 0; i -= 1) {
    if (!state.history[i].undone) {
      const history = state.history.map((row, j) =>
        j === i ? { ...row, undone: true } : row,
      );
      return { ...state, history, instance: { ...state.history[i].instanceBefore } };
    }
  }
  return state;
}

export interface SessionExport {
  model_id: string;
  instance: Record<string, number>;
  prediction: number | null;
  history: Omit<HistoryRow, "instanceBefore">[];
  report: WhatIfReport | null;
}

export function exportSession(state: SessionState): SessionExport {
  return {
    model_id: state.modelId,
    instance: { ...state.instance },
    prediction: state.prediction,
    history: state.history.map(({ instanceBefore, ...row }) => row),
    report: state.lastReport,
  };
}
