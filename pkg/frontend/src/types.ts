/** Shared shapes: the scenario schema and the /v1 response bodies. */

export interface SourceRow {
  id: string;
  theta: number;
  tau_sq: number;
  w: number;
}

export interface Hyper {
  a01: number;
  b01: number;
  a02: number;
  b02: number;
  c0: number | null;
}

export interface Design {
  delta: number;
  R: number;
  eta: number;
  zeta: number;
  sigma0_sq?: number;
  mu0?: number;
  s0_sq?: number;
  alpha?: number;
  beta?: number;
}

export interface Endpoint {
  model: "normal" | "binary_two_arm" | "time_to_event" | "single_arm_binary";
  sigma0_sq?: number;
  rho_t?: number;
  rho_c?: number;
  p?: number;
}

export interface SimulationFragment {
  true_mu_delta: number;
  replicates: number;
  seed: number;
}

export interface Scenario {
  schema_version: 1;
  notes?: string;
  sources: SourceRow[];
  hyper: Hyper;
  design: Design;
  endpoint: Endpoint;
  simulation?: SimulationFragment;
}

export interface FieldError {
  path: string;
  message: string;
}

export interface PriorResponse {
  mean: number;
  variance: number;
  precision: number;
  synthesis_weights: number[];
  method: string;
  built_from: string;
  near_degenerate: string[];
  warnings: string[];
}

export interface SampleSizeResponse {
  mode: string;
  n: number;
  n_real: number;
  per_arm: number | null;
  convention: string;
  prior_precision_used: number;
  decisive_by_prior: boolean;
  rounding: string;
  warnings: string[];
  prior?: Omit<PriorResponse, "warnings">;
  transformed_weights?: number[];
}

export interface SweepResponse {
  columns: string[];
  rows: number[][];
}

export interface SimulateResponse {
  n: number;
  true_mu_delta: number;
  pct_efficacious: number;
  pct_futile: number;
  pct_inconclusive: number;
  replicates: number;
  seed: number;
  mc_stderr: number;
}

export interface ScenarioRecord {
  id: string;
  scenario: Scenario;
  created_at: string;
  updated_at: string;
}
