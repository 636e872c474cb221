/** HTML renderers.  Pure functions from state to markup; event wiring lives
 * in main.ts so these stay testable without a DOM. */

import { sig6, pct1 } from "./format.js";
import type { DisplayModel, SessionState } from "./state.js";

function esc(text: string): string {
  return text.replace(/[&<>"]/g, (c) =>
    c === "&" ? "&amp;" : c === "<" ? "&lt;" : c === ">" ? "&gt;" : "&quot;",
  );
}

export function renderBanner(state: SessionState): string {
  if (!state.banner) return "";
  return `<div class="banner" role="alert">
    ${esc(state.banner)}
    <button data-action="retry">retry</button>
  </div>`;
}

export function renderSourceTable(state: SessionState): string {
  const errorFor = (path: string) => {
    const hit = state.fieldErrors.find((e) => e.path.startsWith(path));
    return hit ? `<div class="field-error">${esc(hit.message)}</div>` : "";
  };
  const rows = state.scenario.sources
    .map(
      (s, i) => `<tr data-row="${i}">
      <td><input data-field="id" data-row="${i}" value="${esc(s.id)}"></td>
      <td><input data-field="theta" data-row="${i}" type="number" step="any" value="${s.theta}">
          ${errorFor(`sources[${i}].theta`)}</td>
      <td><input data-field="tau_sq" data-row="${i}" type="number" step="any" value="${s.tau_sq}">
          ${errorFor(`sources[${i}].tau_sq`)}</td>
      <td><button data-action="remove-source" data-row="${i}" title="remove">×</button></td>
    </tr>`,
    )
    .join("");
  return `<table class="sources">
    <thead><tr><th>source</th><th>effect θ</th><th>variance τ²</th><th></th></tr></thead>
    <tbody>${rows}</tbody>
  </table>
  <button data-action="add-source">add source</button>`;
}

export function renderSliders(state: SessionState, model: DisplayModel): string {
  const rows = model.perSource
    .map(
      (row, i) => `<div class="slider-row" data-row="${i}">
      <span class="slider-label">${esc(row.id)}</span>
      <input type="range" min="0" max="1" step="0.01" value="${row.w}"
             data-action="weight" data-row="${i}"
             aria-label="discrepancy weight for ${esc(row.id)}">
      <span class="w-value">w = ${row.w.toFixed(2)}</span>
      <span class="w-prime">w′ = ${row.wPrime === null ? "…" : sig6(row.wPrime)}</span>
      <span class="share">share = ${row.share === null ? "…" : sig6(row.share)}</span>
    </div>`,
    )
    .join("");
  return `<div class="sliders">${rows}</div>`;
}

export function renderHeadline(model: DisplayModel): string {
  const pendingBadge = model.pending ? `<span class="pending">computing…</span>` : "";
  const n = model.pending || model.headlineN === null ? "…" : String(model.headlineN);
  const decisive = model.decisiveByPrior
    ? `<span class="badge decisive">prior alone is decisive</span>`
    : "";
  const hazard =
    model.rawWouldGiveN === null
      ? ""
      : `<div class="hazard">raw weights would give n = <strong>${
          model.pending ? "…" : model.rawWouldGiveN
        }</strong> (over-discounting)</div>`;
  const noBorrow =
    model.noBorrowN === null
      ? ""
      : `<div class="no-borrow">no-borrowing baseline n = ${
          model.pending ? "…" : model.noBorrowN
        }</div>`;
  const warnings = model.warnings.map((w) => `<div class="warning">${esc(w)}</div>`).join("");
  return `<div class="headline">
    <div class="n-readout">n = <strong>${n}</strong> ${pendingBadge} ${decisive}</div>
    <div class="prior-readout">prior mean = ${
      model.pending ? "…" : sig6(model.priorMean)
    }, variance = ${model.pending ? "…" : sig6(model.priorVariance)}</div>
    ${hazard}${noBorrow}${warnings}
  </div>`;
}

export function renderLegacyPanel(model: DisplayModel): string {
  if (model.legacyMean === null) return "";
  return `<div class="legacy-panel">
    <h3>legacy aggregation (for illustration of nonmonotonicity; read-only)</h3>
    <div>mean = ${sig6(model.legacyMean)}, variance = ${sig6(model.legacyVariance)}</div>
  </div>`;
}

/** n-versus-weight curve for one source, before and after linearization. */
export function renderCurve(state: SessionState, model: DisplayModel): string {
  const options = state.scenario.sources
    .map(
      (s, i) =>
        `<option value="${i}" ${i === state.curveSource ? "selected" : ""}>${esc(s.id)}</option>`,
    )
    .join("");
  const selector = `<label>curve source
    <select data-action="curve-source">${options}</select></label>`;
  const curve = model.curve;
  if (!curve || curve.w.length === 0) {
    return `<div class="curve">${selector}<div class="curve-empty">no curve yet</div></div>`;
  }
  const width = 420;
  const height = 240;
  const all = [...curve.rawN, ...curve.linearizedN];
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const spanY = hi - lo || 1;
  const x = (w: number) => 40 + w * (width - 60);
  const y = (n: number) => height - 30 - ((n - lo) / spanY) * (height - 50);
  const path = (values: number[]) =>
    values.map((n, i) => `${x(curve.w[i]).toFixed(1)},${y(n).toFixed(1)}`).join(" ");
  return `<div class="curve">${selector}
    <svg viewBox="0 0 ${width} ${height}" role="img" aria-label="sample size versus weight">
      <polyline class="curve-raw" fill="none" points="${path(curve.rawN)}"/>
      <polyline class="curve-linearized" fill="none" points="${path(curve.linearizedN)}"/>
      <text x="40" y="14" class="curve-legend-raw">before transform</text>
      <text x="200" y="14" class="curve-legend-lin">after transform</text>
      <text x="${width / 2}" y="${height - 6}">w</text>
      <text x="6" y="${height / 2}" transform="rotate(-90 10 ${height / 2})">n</text>
    </svg>
  </div>`;
}

export function renderScenarioPanel(state: SessionState): string {
  return `<div class="scenario-panel">
    <input data-field="scenario-id" placeholder="scenario id"
           value="${esc(state.savedId ?? "")}">
    <button data-action="save-scenario">save</button>
    <button data-action="load-scenario">load</button>
    <button data-action="export-scenario">export JSON</button>
    <label class="toggle"><input type="checkbox" data-action="toggle-linearized"
      ${state.useLinearized ? "checked" : ""}> linearized weights</label>
    <label class="toggle"><input type="checkbox" data-action="toggle-legacy"
      ${state.showLegacy ? "checked" : ""}> show legacy aggregation</label>
  </div>`;
}

export function renderSimulationPanel(state: SessionState): string {
  const result = state.simulation;
  const defaultSeed = state.scenario.simulation?.seed ?? 1;
  const table = !result
    ? ""
    : `<table class="simulation">
      <thead><tr><th>n</th><th>true effect</th><th>% efficacious</th><th>% futile</th>
        <th>% inconclusive</th><th>total %</th></tr></thead>
      <tbody><tr>
        <td>${result.n}</td>
        <td>${result.true_mu_delta}</td>
        <td>${pct1(result.pct_efficacious)}</td>
        <td>${pct1(result.pct_futile)}</td>
        <td>${pct1(result.pct_inconclusive)}</td>
        <td>${pct1(result.pct_efficacious + result.pct_futile + result.pct_inconclusive)}</td>
      </tr></tbody>
    </table>
    <div class="sim-meta">replicates = ${result.replicates}, seed = ${result.seed}</div>`;
  return `<div class="simulation-panel">
    <label>seed <input data-field="seed" type="number" value="${defaultSeed}"></label>
    <button data-action="simulate" ${state.simulationPending ? "disabled" : ""}>
      ${state.simulationPending ? "running…" : "run simulation"}</button>
    ${table}
  </div>`;
}
