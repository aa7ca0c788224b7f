// Deterministic HTML string templates. All numbers come straight from server
// responses; the only formatting applied is fixed-precision display.

import type { ModelMeta } from "./schema.js";
import type { HistoryRow, SessionState } from "./state.js";

export const DISPLAY_DECIMALS = 3;

export function formatNumber(value: number | null): string {
  return value === null ? "–" : value.toFixed(DISPLAY_DECIMALS);
}

export function formatPrediction(state: SessionState): string {
  if (state.prediction === null) return "no prediction yet";
  const value = formatNumber(state.prediction);
  if (state.meta.outcome.kind === "binary") {
    const cls = state.meta.class_of_interest ?? 1;
    return `P(${state.meta.outcome.name} = ${cls}) = ${value}`;
  }
  return `${state.meta.outcome.name} = ${value}`;
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderModelPicker(models: ModelMeta[], selected: string | null): string {
  if (models.length === 0) {
    return '<p class="empty">No models registered yet. POST one to /api/models.</p>';
  }
  const options = models
    .map((m) => {
      const sel = m.model_id === selected ? " selected" : "";
      return `<option value="${escapeHtml(m.model_id)}"${sel}>` +
        `${escapeHtml(m.name)} (${escapeHtml(m.model_kind)})</option>`;
    })
    .join("");
  return `<select id="model-picker">${options}</select>`;
}

export function renderFeatureEditors(state: SessionState): string {
  const rows = state.meta.features.map((f) => {
    const value = state.instance[f.name];
    const input =
      f.kind === "binary"
        ? `<input type="checkbox" data-feature="${escapeHtml(f.name)}"` +
          `${value === 1 ? " checked" : ""}>`
        : `<input type="number" data-feature="${escapeHtml(f.name)}" ` +
          `value="${value}" min="${f.min}" max="${f.max}" step="any" ` +
          `title="observed range ${f.min} to ${f.max}">`;
    return `<label class="feature"><span>${escapeHtml(f.name)}</span>${input}</label>`;
  });
  return rows.join("\n");
}

export function renderRanking(state: SessionState): string {
  if (state.entries.length === 0) {
    return '<p class="empty">No ranked effects yet.</p>';
  }
  const maxAbs = Math.max(...state.entries.map((e) => Math.abs(e.cde)), 1e-12);
  const rows = state.entries.map((e) => {
    const width = Math.round((Math.abs(e.cde) / maxAbs) * 100);
    const sign = e.cde >= 0 ? "pos" : "neg";
    return (
      `<li class="cde-row" data-feature="${escapeHtml(e.feature)}">` +
      `<span class="rank">#${e.rank}</span>` +
      `<span class="name">${escapeHtml(e.feature)}</span>` +
      `<span class="bar ${sign}" style="width:${width}%"></span>` +
      `<span class="value">${formatNumber(e.cde)}</span>` +
      `<span class="move">${e.control} &rarr; ${e.treated}</span>` +
      `<button data-apply="${escapeHtml(e.feature)}">Apply</button></li>`
    );
  });
  return `<ol class="ranking">${rows.join("\n")}</ol>`;
}

export function renderHistory(history: HistoryRow[]): string {
  if (history.length === 0) {
    return '<p class="empty">No interventions applied.</p>';
  }
  const rows = history.map((h) => {
    const cls = h.undone ? ' class="undone"' : "";
    return (
      `<tr${cls}><td>${escapeHtml(h.feature)}</td>` +
      `<td>${formatNumber(h.cde)}</td>` +
      `<td>do(${escapeHtml(h.feature)} = ${h.newValue})</td>` +
      `<td>${formatNumber(h.predictionBefore)} &rarr; ` +
      `${formatNumber(h.predictionAfter)}</td></tr>`
    );
  });
  return (
    "<table class=\"history\"><thead><tr>" +
    "<th>Feature</th><th>CDE</th><th>Intervention</th><th>Outcome</th>" +
    `</tr></thead><tbody>${rows.join("\n")}</tbody></table>`
  );
}
