/** Wire types mirroring the shelfwise HTTP API. */

export interface ProductSummary {
  id: string;
  count: number;
  firstTs: string;
  lastTs: string;
}

export interface WhatIfResult {
  rate: number;
  batch: number;
  capacity: number;
  threshold: number;
  maxQuantity: number;
  unit: string;
  pi: number[] | null;
  expectedQuantity: number | null;
  undersupplyProbability: number | null;
  expectedSurplus: number | null;
  irreducible: boolean;
  residual: number | null;
}

export interface ApiErrorBody {
  error: string;
  code: string;
  detail: unknown;
}

export interface ReducibleDetail {
  componentSizes: number[];
  witness: [number, number];
}

export interface AnalyzeRequest {
  product: string;
  rate: number;
  capacity: number;
  initial?: number;
  batch: number;
  threshold: number;
  maxQuantity?: number;
  unit: string;
}

export interface SweepRequest {
  product: string;
  rates: number[];
  capacity: number;
  batch: number;
  threshold: number;
  maxQuantity?: number;
  unit: string;
}
