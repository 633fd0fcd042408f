/** Binding invariants against the recorded fixture sweep: every displayed
 *  number must equal the corresponding API response field. */

import { describe, expect, it } from "vitest";
import sweepFixture from "../fixtures/sweep.json";
import analyzeFixture from "../fixtures/analyze.json";
import type { WhatIfResult } from "../src/types.js";
import {
  distributionSeries,
  filterProducts,
  metricCards,
  sweepSeries,
} from "../src/viewmodel.js";

const sweep = sweepFixture as WhatIfResult[];
const analyze = analyzeFixture as WhatIfResult;

describe("metric cards", () => {
  it("copy the response fields verbatim for every fixture result", () => {
    for (const result of [...sweep, analyze]) {
      const cards = metricCards(result);
      const byId = Object.fromEntries(cards.map((c) => [c.id, c]));
      expect(byId["expectedQuantity"]!.value).toBe(result.expectedQuantity);
      expect(byId["undersupplyProbability"]!.value).toBe(result.undersupplyProbability);
      expect(byId["expectedSurplus"]!.value).toBe(result.expectedSurplus);
    }
  });

  it("render n/a for absent metrics", () => {
    const reducible: WhatIfResult = {
      ...analyze,
      irreducible: false,
      pi: null,
      expectedQuantity: null,
      undersupplyProbability: null,
      expectedSurplus: null,
      residual: null,
    };
    expect(metricCards(reducible).every((c) => c.display === "n/a")).toBe(true);
  });
});

describe("distribution series", () => {
  it("passes pi through untouched and sums to 1 within tolerance", () => {
    for (const result of sweep) {
      const series = distributionSeries(result);
      expect(series).not.toBeNull();
      expect(series!.probabilities).toBe(result.pi); // same array, not a recompute
      const sum = series!.probabilities.reduce((a, b) => a + b, 0);
      expect(Math.abs(sum - 1)).toBeLessThan(1e-6);
      expect(series!.states).toHaveLength(result.capacity + 1);
      expect(series!.thresholdIndex).toBe(result.threshold);
      expect(series!.undersupplyCutoff).toBe(result.maxQuantity);
    }
  });

  it("supports a client-side threshold override without touching pi", () => {
    const result = sweep[0]!;
    const series = distributionSeries(result, 42);
    expect(series!.thresholdIndex).toBe(42);
    expect(series!.probabilities).toBe(result.pi);
  });

  it("returns null for reducible results", () => {
    const reducible = { ...sweep[0]!, irreducible: false, pi: null };
    expect(distributionSeries(reducible)).toBeNull();
  });
});

describe("sweep series", () => {
  it("equals the payload fields in request order", () => {
    const series = sweepSeries(sweep);
    expect(series.rates).toEqual(sweep.map((r) => r.rate));
    expect(series.expectedQuantity).toEqual(sweep.map((r) => r.expectedQuantity));
    expect(series.undersupplyProbability).toEqual(
      sweep.map((r) => r.undersupplyProbability),
    );
    expect(series.expectedSurplus).toEqual(sweep.map((r) => r.expectedSurplus));
    expect(series.reducibleRates).toEqual([]);
  });

  it("exposes reducible entries as badges, not data points", () => {
    const mixed = [
      sweep[0]!,
      { ...sweep[1]!, irreducible: false, pi: null, expectedQuantity: null },
    ];
    const series = sweepSeries(mixed);
    expect(series.rates).toEqual([sweep[0]!.rate]);
    expect(series.reducibleRates).toEqual([sweep[1]!.rate]);
  });

  it("fixture sweep shows the shortage/waste trade-off", () => {
    const series = sweepSeries(sweep);
    for (let i = 1; i < series.rates.length; i++) {
      expect(series.undersupplyProbability[i]!).toBeLessThan(
        series.undersupplyProbability[i - 1]!,
      );
      expect(series.expectedSurplus[i]!).toBeGreaterThan(series.expectedSurplus[i - 1]!);
    }
  });
});

describe("product filter", () => {
  const products = [
    { id: "fruit_orange" },
    { id: "fruit_apple" },
    { id: "dairy_014" },
  ];

  it("matches case-insensitive substrings", () => {
    expect(filterProducts(products, "FRUIT").map((p) => p.id)).toEqual([
      "fruit_orange",
      "fruit_apple",
    ]);
    expect(filterProducts(products, " dairy ")).toHaveLength(1);
    expect(filterProducts(products, "")).toHaveLength(3);
  });
});
