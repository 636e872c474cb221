/** Slider endpoint criteria: w = 0 and w = 1 display transformed weights of
 * exactly 0 and 1, and the all-ones state displays the scenario's
 * no-borrowing sample size. */

import { describe, expect, it } from "vitest";

import { Client } from "../src/api.js";
import { SessionStore, displayModel } from "../src/state.js";
import type { SampleSizeResponse } from "../src/types.js";
import { fakeFetch, loadAllFixtures, loadFixture, loadScenario, withWeights } from "./helpers.js";

async function settled(weight: number) {
  const scenario = withWeights(loadScenario("alzheimers.scenario.json"), weight);
  const store = new SessionStore(new Client("", fakeFetch(loadAllFixtures())), scenario);
  await store.recomputeNow();
  return displayModel(store.getState());
}

describe("slider endpoints", () => {
  it("all sliders at 0 display transformed weights of exactly 0", async () => {
    const model = await settled(0.0);
    expect(model.perSource).toHaveLength(7);
    for (const row of model.perSource) {
      expect(row.wPrime).toBe(0);
    }
  });

  it("all sliders at 1 display transformed weights of exactly 1", async () => {
    const model = await settled(1.0);
    for (const row of model.perSource) {
      expect(row.wPrime).toBe(1);
    }
  });

  it("the all-ones state displays the scenario's no-borrowing n", async () => {
    const model = await settled(1.0);
    const noBorrow = loadFixture("alz.sample_size.no_borrow.all_ones")
      .response as SampleSizeResponse;
    expect(model.headlineN).toBe(noBorrow.n);
    expect(model.noBorrowN).toBe(noBorrow.n);
  });

  it("the all-zeros state is decisive by prior alone", async () => {
    const model = await settled(0.0);
    const main = loadFixture("alz.sample_size.all_zeros").response as SampleSizeResponse;
    expect(main.decisive_by_prior).toBe(true);
    expect(model.headlineN).toBe(main.n);
    expect(model.decisiveByPrior).toBe(true);
  });
});
