/** Test plumbing: load recorded fixtures and replay them through a fake fetch. */

import { readFileSync, readdirSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";
import { canonicalJson } from "../src/format.js";
import type { Scenario } from "../src/types.js";

const FIXTURES_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export interface Fixture {
  request: { method: string; path: string; body: unknown };
  response: unknown;
}

export function loadFixture(name: string): Fixture {
  return JSON.parse(readFileSync(join(FIXTURES_DIR, `${name}.json`), "utf-8"));
}

export function loadAllFixtures(): Fixture[] {
  return readdirSync(FIXTURES_DIR)
    .filter((f) => f.endsWith(".json") && !f.endsWith(".scenario.json"))
    .map((f) => JSON.parse(readFileSync(join(FIXTURES_DIR, f), "utf-8")) as Fixture)
    .filter((doc) => doc.request !== undefined);
}

export function loadScenario(name: string): Scenario {
  return JSON.parse(readFileSync(join(FIXTURES_DIR, name), "utf-8"));
}

/** Replays recorded responses; throws on any request that was not recorded. */
export function fakeFetch(fixtures: Fixture[]): FetchLike & { calls: string[] } {
  const fn = (async (url: string, init?: RequestInit) => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(init.body as string) : null;
    const bodyKey = canonicalJson(body);
    for (const fixture of fixtures) {
      if (fixture.request.method !== method) continue;
      if (fixture.request.path !== url) continue;
      if (canonicalJson(fixture.request.body ?? null) !== bodyKey) continue;
      fn.calls.push(`${method} ${url}`);
      return new Response(JSON.stringify(fixture.response), {
        status: method === "POST" && url.startsWith("/v1/scenarios") ? 201 : 200,
        headers: { "content-type": "application/json" },
      });
    }
    throw new Error(`no fixture recorded for ${method} ${url}`);
  }) as FetchLike & { calls: string[] };
  fn.calls = [];
  return fn;
}

export function withWeights(scenario: Scenario, w: number): Scenario {
  return {
    ...scenario,
    sources: scenario.sources.map((s) => ({ ...s, w })),
  };
}
