/** Typed client for the /v1 service.  The UI computes nothing locally:
 * every displayed number comes back from one of these calls. */

import type {
  FieldError,
  PriorResponse,
  SampleSizeResponse,
  Scenario,
  ScenarioRecord,
  SimulateResponse,
  SweepResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(
    message: string,
    public kind: "validation" | "domain" | "network" | "http",
    public fieldErrors: FieldError[] = [],
    public status?: number,
  ) {
    super(message);
  }
}

async function parseBody(response: Response): Promise<unknown> {
  try {
    return await response.json();
  } catch {
    return null;
  }
}

export class Client {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ServiceError(`service unreachable: ${String(err)}`, "network");
    }
    if (response.ok) {
      return (await response.json()) as T;
    }
    const payload = (await parseBody(response)) as
      | { errors?: FieldError[]; error?: string }
      | null;
    if (response.status === 400 && payload?.errors) {
      throw new ServiceError("validation failed", "validation", payload.errors, 400);
    }
    const message = payload?.error ?? `HTTP ${response.status}`;
    const kind = response.status === 422 ? "domain" : "http";
    throw new ServiceError(message, kind, [], response.status);
  }

  linearize(body: unknown): Promise<{ transformed_weights: number[] }> {
    return this.request("POST", "/v1/linearize", body);
  }

  prior(body: unknown): Promise<PriorResponse> {
    return this.request("POST", "/v1/prior", body);
  }

  sampleSize(body: unknown): Promise<SampleSizeResponse> {
    return this.request("POST", "/v1/sample-size", body);
  }

  sweep(body: unknown): Promise<SweepResponse> {
    return this.request("POST", "/v1/sweep", body);
  }

  simulate(body: unknown): Promise<SimulateResponse> {
    return this.request("POST", "/v1/simulate", body);
  }

  listScenarios(): Promise<{ scenarios: { id: string }[] }> {
    return this.request("GET", "/v1/scenarios");
  }

  getScenario(id: string): Promise<ScenarioRecord> {
    return this.request("GET", `/v1/scenarios/${encodeURIComponent(id)}`);
  }

  saveScenario(id: string, scenario: Scenario): Promise<ScenarioRecord> {
    return this.request("PUT", `/v1/scenarios/${encodeURIComponent(id)}`, { scenario });
  }

  deleteScenario(id: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/v1/scenarios/${encodeURIComponent(id)}`);
  }
}
