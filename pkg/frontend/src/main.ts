/** Bootstrap: wire the store to the DOM.  Apart from slider drags (which
 * patch readouts in place so the drag is not interrupted), every state change
 * re-renders the affected panel from scratch. */

import { Client } from "./api.js";
import { sig6 } from "./format.js";
import { SessionStore, displayModel } from "./state.js";
import type { Scenario } from "./types.js";
import {
  renderBanner,
  renderCurve,
  renderHeadline,
  renderLegacyPanel,
  renderScenarioPanel,
  renderSimulationPanel,
  renderSliders,
  renderSourceTable,
} from "./views.js";

const STARTER: Scenario = {
  schema_version: 1,
  sources: [
    { id: "source-1", theta: 1.0, tau_sq: 0.5, w: 0.3 },
    { id: "source-2", theta: 0.2, tau_sq: 1.0, w: 0.6 },
  ],
  hyper: { a01: 1.01, b01: 1.01, a02: 1e6, b02: 1.0, c0: 0.05 },
  design: {
    delta: 1.0, R: 0.5, eta: 0.95, zeta: 0.8,
    sigma0_sq: 13.6161, mu0: 0.0, s0_sq: 100.0, alpha: 0.05, beta: 0.2,
  },
  endpoint: { model: "normal" },
  simulation: { true_mu_delta: 1.0, replicates: 10000, seed: 1 },
};

function mount(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const store = new SessionStore(new Client(""), STARTER);

  const sections = {
    banner: document.createElement("div"),
    scenario: document.createElement("div"),
    sourceTable: document.createElement("div"),
    sliders: document.createElement("div"),
    headline: document.createElement("div"),
    legacy: document.createElement("div"),
    curve: document.createElement("div"),
    simulation: document.createElement("div"),
  };
  for (const el of Object.values(sections)) root.appendChild(el);

  let dragging = false;

  function render(): void {
    const state = store.getState();
    const model = displayModel(state);
    sections.banner.innerHTML = renderBanner(state);
    sections.scenario.innerHTML = renderScenarioPanel(state);
    sections.sourceTable.innerHTML = renderSourceTable(state);
    sections.headline.innerHTML = renderHeadline(model);
    sections.legacy.innerHTML = renderLegacyPanel(model);
    sections.curve.innerHTML = renderCurve(state, model);
    sections.simulation.innerHTML = renderSimulationPanel(state);
    if (dragging) {
      // patch readouts only; replacing the slider mid-drag would drop it
      model.perSource.forEach((row, i) => {
        const holder = sections.sliders.querySelector(`.slider-row[data-row="${i}"]`);
        if (!holder) return;
        const wPrime = holder.querySelector(".w-prime");
        const wValue = holder.querySelector(".w-value");
        const share = holder.querySelector(".share");
        if (wValue) wValue.textContent = `w = ${row.w.toFixed(2)}`;
        if (wPrime) wPrime.textContent = `w′ = ${row.wPrime === null ? "…" : sig6(row.wPrime)}`;
        if (share) share.textContent = `share = ${row.share === null ? "…" : sig6(row.share)}`;
      });
    } else {
      sections.sliders.innerHTML = renderSliders(state, model);
    }
  }

  store.subscribe(render);

  root.addEventListener("pointerdown", (event) => {
    if ((event.target as HTMLElement).matches('input[type="range"]')) dragging = true;
  });
  root.addEventListener("pointerup", () => {
    if (dragging) {
      dragging = false;
      render();
    }
  });

  root.addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement;
    const row = Number(target.dataset.row ?? "-1");
    if (target.dataset.action === "weight") {
      store.setWeight(row, Number(target.value));
    } else if (target.dataset.field === "theta" || target.dataset.field === "tau_sq") {
      const value = Number(target.value);
      if (Number.isFinite(value)) store.setSourceField(row, target.dataset.field, value);
    } else if (target.dataset.field === "id") {
      store.setSourceField(row, "id", target.value);
    }
  });

  root.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement | HTMLSelectElement;
    const action = target.dataset.action;
    if (action === "toggle-linearized") {
      store.setUseLinearized((target as HTMLInputElement).checked);
    } else if (action === "toggle-legacy") {
      store.setShowLegacy((target as HTMLInputElement).checked);
    } else if (action === "curve-source") {
      store.setCurveSource(Number((target as HTMLSelectElement).value));
    }
  });

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("[data-action]") as HTMLElement | null;
    if (!target) return;
    const action = target.dataset.action;
    const idInput = root.querySelector<HTMLInputElement>('input[data-field="scenario-id"]');
    if (action === "add-source") {
      store.addSource();
    } else if (action === "remove-source") {
      store.removeSource(Number(target.dataset.row));
    } else if (action === "retry") {
      store.scheduleRecompute();
    } else if (action === "save-scenario" && idInput?.value) {
      void store.saveScenario(idInput.value);
    } else if (action === "load-scenario" && idInput?.value) {
      void store.loadScenario(idInput.value);
    } else if (action === "export-scenario") {
      const blob = new Blob([store.exportScenarioText()], { type: "application/json" });
      const link = document.createElement("a");
      link.href = URL.createObjectURL(blob);
      link.download = `${idInput?.value || "scenario"}.scenario.json`;
      link.click();
      URL.revokeObjectURL(link.href);
    } else if (action === "simulate") {
      const seedInput = root.querySelector<HTMLInputElement>('input[data-field="seed"]');
      void store.runSimulation(Number(seedInput?.value ?? 1));
    }
  });

  store.scheduleRecompute();
}

mount();
