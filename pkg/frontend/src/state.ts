/** Session state and recompute orchestration.
 *
 * Edits mark the state dirty and schedule a debounced recompute (~150 ms).
 * Each recompute takes a token; responses from superseded recomputes are
 * dropped (newest wins), so the screen never shows results that do not match
 * the current inputs unless the pending flag says a recompute is in flight.
 * All numbers on screen come from service responses; nothing is computed here.
 */

import { Client, ServiceError } from "./api.js";
import { canonicalJson } from "./format.js";
import type {
  FieldError,
  PriorResponse,
  SampleSizeResponse,
  Scenario,
  SimulateResponse,
  SourceRow,
} from "./types.js";

export interface CurveData {
  w: number[];
  rawN: number[];
  linearizedN: number[];
}

export interface ComputedResults {
  /** sample-size response with linearize=true; carries prior + transformed weights */
  main: SampleSizeResponse;
  /** sample-size response with linearize=false; feeds the hazard panel */
  rawHazard: SampleSizeResponse;
  /** no-borrowing baseline, when the scenario has a vague prior */
  noBorrow: SampleSizeResponse | null;
  /** read-only legacy-aggregation prior, when that view is toggled on */
  legacyPrior: PriorResponse | null;
  curve: CurveData | null;
}

export interface SessionState {
  scenario: Scenario;
  useLinearized: boolean;
  showLegacy: boolean;
  curveSource: number;
  dirty: boolean;
  pending: boolean;
  results: ComputedResults | null;
  simulation: SimulateResponse | null;
  simulationPending: boolean;
  banner: string | null;
  fieldErrors: FieldError[];
  savedId: string | null;
  lastSavedText: string | null;
}

export const DEBOUNCE_MS = 150;

type Listener = (state: SessionState) => void;

export class SessionStore {
  private state: SessionState;
  private listeners: Listener[] = [];
  private timer: ReturnType<typeof setTimeout> | null = null;
  private computeToken = 0;
  private simulateToken = 0;

  constructor(private client: Client, scenario: Scenario) {
    this.state = {
      scenario,
      useLinearized: true,
      showLegacy: false,
      curveSource: 0,
      dirty: true,
      pending: false,
      results: null,
      simulation: null,
      simulationPending: false,
      banner: null,
      fieldErrors: [],
      savedId: null,
      lastSavedText: null,
    };
  }

  getState(): SessionState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Any input edit: invalidate results and schedule a recompute. */
  private touch(scenario: Scenario): void {
    this.emit({ scenario, dirty: true, simulation: null });
    this.scheduleRecompute();
  }

  setWeight(index: number, w: number): void {
    const sources = this.state.scenario.sources.map((s, i) =>
      i === index ? { ...s, w } : s,
    );
    this.touch({ ...this.state.scenario, sources });
  }

  setSourceField(index: number, field: "id" | "theta" | "tau_sq", value: string | number): void {
    const sources = this.state.scenario.sources.map((s, i) =>
      i === index ? { ...s, [field]: value } : s,
    );
    this.touch({ ...this.state.scenario, sources });
  }

  addSource(): void {
    const n = this.state.scenario.sources.length + 1;
    const row: SourceRow = { id: `source-${n}`, theta: 0, tau_sq: 1, w: 0.5 };
    this.touch({
      ...this.state.scenario,
      sources: [...this.state.scenario.sources, row],
    });
  }

  removeSource(index: number): void {
    const sources = this.state.scenario.sources.filter((_, i) => i !== index);
    const curveSource = Math.min(this.state.curveSource, Math.max(0, sources.length - 1));
    this.emit({ curveSource });
    this.touch({ ...this.state.scenario, sources });
  }

  setUseLinearized(on: boolean): void {
    this.emit({ useLinearized: on, dirty: true });
    this.scheduleRecompute();
  }

  setShowLegacy(on: boolean): void {
    this.emit({ showLegacy: on, dirty: true });
    this.scheduleRecompute();
  }

  setCurveSource(index: number): void {
    this.emit({ curveSource: index, dirty: true });
    this.scheduleRecompute();
  }

  replaceScenario(scenario: Scenario): void {
    this.emit({ curveSource: 0 });
    this.touch(scenario);
  }

  scheduleRecompute(): void {
    this.emit({ pending: true });
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.recomputeNow();
    }, DEBOUNCE_MS);
  }

  /** Run all compute calls for the current inputs; drop results if superseded. */
  async recomputeNow(): Promise<void> {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    const token = ++this.computeToken;
    const { scenario, showLegacy, curveSource } = this.state;
    this.emit({ pending: true });
    try {
      const calls: [
        Promise<SampleSizeResponse>,
        Promise<SampleSizeResponse>,
        Promise<SampleSizeResponse | null>,
        Promise<PriorResponse | null>,
        Promise<CurveData | null>,
      ] = [
        this.client.sampleSize({ scenario, linearize: this.state.useLinearized }),
        this.client.sampleSize({ scenario, linearize: false }),
        scenario.design.s0_sq
          ? this.client.sampleSize({ scenario, mode: "no-borrow" })
          : Promise.resolve(null),
        showLegacy ? this.client.prior(this.priorPayload("legacy")) : Promise.resolve(null),
        scenario.sources.length > 0 ? this.fetchCurve(curveSource) : Promise.resolve(null),
      ];
      const [main, rawHazard, noBorrow, legacyPrior, curve] = await Promise.all(calls);
      if (token !== this.computeToken) return; // superseded; newest wins
      this.emit({
        results: { main, rawHazard, noBorrow, legacyPrior, curve },
        dirty: false,
        pending: false,
        banner: null,
        fieldErrors: [],
      });
    } catch (err) {
      if (token !== this.computeToken) return;
      if (err instanceof ServiceError && err.kind === "validation") {
        this.emit({ pending: false, fieldErrors: err.fieldErrors, results: null });
      } else if (err instanceof ServiceError && err.kind === "network") {
        this.emit({ pending: false, banner: err.message });
      } else {
        this.emit({ pending: false, banner: String(err instanceof Error ? err.message : err) });
      }
    }
  }

  private priorPayload(method: "precision" | "legacy") {
    const { scenario } = this.state;
    return {
      sources: scenario.sources.map(({ id, theta, tau_sq }) => ({ id, theta, tau_sq })),
      hyper: scenario.hyper,
      weights: scenario.sources.map((s) => s.w),
      weights_kind: "raw",
      method,
    };
  }

  private async fetchCurve(sourceIndex: number): Promise<CurveData> {
    const table = await this.client.sweep({
      scenario: this.state.scenario,
      axes: [sourceIndex],
      step: 0.02,
    });
    const wCol = table.columns.indexOf(`w${sourceIndex + 1}`);
    const rawCol = table.columns.indexOf("n_real_raw");
    const linCol = table.columns.indexOf("n_real_linearized");
    return {
      w: table.rows.map((r) => r[wCol]),
      rawN: table.rows.map((r) => r[rawCol]),
      linearizedN: table.rows.map((r) => r[linCol]),
    };
  }

  async runSimulation(seed: number): Promise<void> {
    const token = ++this.simulateToken;
    this.emit({ simulationPending: true });
    try {
      const result = await this.client.simulate({ scenario: this.state.scenario, seed });
      if (token !== this.simulateToken) return;
      this.emit({ simulation: result, simulationPending: false });
    } catch (err) {
      if (token !== this.simulateToken) return;
      this.emit({
        simulationPending: false,
        banner: err instanceof Error ? err.message : String(err),
      });
    }
  }

  async saveScenario(id: string): Promise<void> {
    try {
      const record = await this.client.saveScenario(id, this.state.scenario);
      this.emit({
        savedId: record.id,
        lastSavedText: canonicalJson(record.scenario),
        banner: null,
      });
    } catch (err) {
      this.emit({ banner: err instanceof Error ? err.message : String(err) });
    }
  }

  async loadScenario(id: string): Promise<string | null> {
    try {
      const record = await this.client.getScenario(id);
      this.replaceScenario(record.scenario);
      this.emit({ savedId: record.id });
      return canonicalJson(record.scenario);
    } catch (err) {
      this.emit({ banner: err instanceof Error ? err.message : String(err) });
      return null;
    }
  }

  /** The scenario as a canonical JSON document (for file export). */
  exportScenarioText(): string {
    return canonicalJson(this.state.scenario);
  }
}

/** Everything the screen shows, derived 1:1 from service response fields. */
export interface DisplayModel {
  headlineN: number | null;
  decisiveByPrior: boolean;
  priorMean: number | null;
  priorVariance: number | null;
  rawWouldGiveN: number | null;
  noBorrowN: number | null;
  perSource: {
    id: string;
    w: number;
    wPrime: number | null;
    share: number | null;
  }[];
  warnings: string[];
  legacyMean: number | null;
  legacyVariance: number | null;
  curve: CurveData | null;
  pending: boolean;
  dirty: boolean;
}

export function displayModel(state: SessionState): DisplayModel {
  const { results } = state;
  const main = results?.main ?? null;
  const prior = main?.prior ?? null;
  const transformed = main?.transformed_weights ?? null;
  return {
    headlineN: main ? main.n : null,
    decisiveByPrior: main ? main.decisive_by_prior : false,
    priorMean: prior ? prior.mean : null,
    priorVariance: prior ? prior.variance : null,
    rawWouldGiveN: results?.rawHazard ? results.rawHazard.n : null,
    noBorrowN: results?.noBorrow ? results.noBorrow.n : null,
    perSource: state.scenario.sources.map((source, i) => ({
      id: source.id,
      w: source.w,
      wPrime: state.useLinearized
        ? transformed?.[i] ?? null
        : source.w, // raw mode displays the elicited weight itself
      share: prior ? prior.synthesis_weights[i] ?? null : null,
    })),
    warnings: main?.warnings ?? [],
    legacyMean: results?.legacyPrior ? results.legacyPrior.mean : null,
    legacyVariance: results?.legacyPrior ? results.legacyPrior.variance : null,
    curve: results?.curve ?? null,
    pending: state.pending,
    dirty: state.dirty,
  };
}
