/** Pure view-model builders: every displayed number is copied from an
 *  API response field, never recomputed client-side. */

import type { WhatIfResult } from "./types.js";

export interface MetricCard {
  id: "expectedQuantity" | "undersupplyProbability" | "expectedSurplus";
  label: string;
  value: number | null;
  display: string;
}

export function metricCards(result: WhatIfResult): MetricCard[] {
  const fmt = (v: number | null, digits: number) =>
    v === null ? "n/a" : v.toFixed(digits);
  return [
    {
      id: "expectedQuantity",
      label: "expected units on shelf",
      value: result.expectedQuantity,
      display: fmt(result.expectedQuantity, 2),
    },
    {
      id: "undersupplyProbability",
      label: "undersupply probability",
      value: result.undersupplyProbability,
      display: fmt(result.undersupplyProbability, 4),
    },
    {
      id: "expectedSurplus",
      label: `expected surplus above ${result.threshold}`,
      value: result.expectedSurplus,
      display: fmt(result.expectedSurplus, 4),
    },
  ];
}

export interface DistributionSeries {
  states: number[];
  probabilities: number[]; // the response's pi, verbatim
  thresholdIndex: number;
  undersupplyCutoff: number; // states below this are shortage states
}

export function distributionSeries(
  result: WhatIfResult,
  thresholdOverride?: number,
): DistributionSeries | null {
  if (!result.irreducible || result.pi === null) {
    return null;
  }
  return {
    states: result.pi.map((_, index) => index),
    probabilities: result.pi,
    thresholdIndex: thresholdOverride ?? result.threshold,
    undersupplyCutoff: result.maxQuantity,
  };
}

export interface SweepSeries {
  rates: number[];
  expectedQuantity: number[];
  undersupplyProbability: number[];
  expectedSurplus: number[];
  reducibleRates: number[]; // badge list for entries without metrics
}

export function sweepSeries(results: WhatIfResult[]): SweepSeries {
  const solved = results.filter(
    (r): r is WhatIfResult & { expectedQuantity: number } => r.irreducible,
  );
  return {
    rates: solved.map((r) => r.rate),
    expectedQuantity: solved.map((r) => r.expectedQuantity as number),
    undersupplyProbability: solved.map((r) => r.undersupplyProbability as number),
    expectedSurplus: solved.map((r) => r.expectedSurplus as number),
    reducibleRates: results.filter((r) => !r.irreducible).map((r) => r.rate),
  };
}

/** Discards responses that arrive after a newer request was issued. */
export class LatestWins {
  private issued = 0;
  private applied = 0;

  nextTicket(): number {
    return ++this.issued;
  }

  /** True exactly when this ticket is newer than everything applied so far. */
  tryApply(ticket: number): boolean {
    if (ticket <= this.applied) {
      return false;
    }
    this.applied = ticket;
    return true;
  }
}

export type Cancel = () => void;
export type Schedule = (fn: () => void, ms: number) => Cancel;

const defaultSchedule: Schedule = (fn, ms) => {
  const id = setTimeout(fn, ms);
  return () => clearTimeout(id);
};

/** Trailing-edge debouncer: at most one call per settling window. */
export class Debouncer {
  private cancel: Cancel | null = null;

  constructor(
    private readonly settleMs: number,
    private readonly schedule: Schedule = defaultSchedule,
  ) {}

  run(fn: () => void): void {
    if (this.cancel) {
      this.cancel();
    }
    this.cancel = this.schedule(() => {
      this.cancel = null;
      fn();
    }, this.settleMs);
  }

  flushPending(): boolean {
    return this.cancel !== null;
  }
}

/** Filters the product list on a case-insensitive substring of the id. */
export function filterProducts<T extends { id: string }>(products: T[], query: string): T[] {
  const needle = query.trim().toLowerCase();
  if (!needle) {
    return products;
  }
  return products.filter((p) => p.id.toLowerCase().includes(needle));
}
