/** Typed client for the shelfwise service; every failure maps to a distinct banner state. */

import type {
  AnalyzeRequest,
  ApiErrorBody,
  ProductSummary,
  SweepRequest,
  WhatIfResult,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly detail: unknown = null,
  ) {
    super(message);
  }
}

/** Banner states; each server error code gets its own human-readable entry. */
export type ErrorState =
  | { kind: "validation"; message: string }
  | { kind: "unknown-product"; message: string }
  | { kind: "no-log"; message: string }
  | { kind: "not-irreducible"; message: string; componentSizes: number[] }
  | { kind: "no-rates"; message: string }
  | { kind: "network"; message: string }
  | { kind: "unexpected"; message: string };

export function toErrorState(error: unknown): ErrorState {
  if (error instanceof ApiError) {
    switch (error.code) {
      case "validation":
        return { kind: "validation", message: `Invalid request: ${error.message}` };
      case "unknown-product":
        return { kind: "unknown-product", message: `Product not found: ${error.message}` };
      case "no-log":
        return { kind: "no-log", message: "The server has no transaction log loaded." };
      case "not-irreducible": {
        const detail = error.detail as { componentSizes?: number[] } | null;
        return {
          kind: "not-irreducible",
          message:
            "This configuration cannot be analyzed: some shelf quantities are " +
            `unreachable (${error.message})`,
          componentSizes: detail?.componentSizes ?? [],
        };
      }
      case "no-rates":
        return { kind: "no-rates", message: `Not enough data: ${error.message}` };
      default:
        return { kind: "unexpected", message: `${error.status}: ${error.message}` };
    }
  }
  return { kind: "network", message: `Cannot reach the server: ${String(error)}` };
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async products(): Promise<ProductSummary[]> {
    return this.request<ProductSummary[]>("GET", "/products");
  }

  async analyze(body: AnalyzeRequest): Promise<WhatIfResult> {
    return this.request<WhatIfResult>("POST", "/analyze", body);
  }

  async sweep(body: SweepRequest): Promise<WhatIfResult[]> {
    return this.request<WhatIfResult[]>("POST", "/sweep", body);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let payload: ApiErrorBody | null = null;
      try {
        payload = (await response.json()) as ApiErrorBody;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(
        response.status,
        payload?.code ?? "unexpected",
        payload?.error ?? response.statusText,
        payload?.detail ?? null,
      );
    }
    return (await response.json()) as T;
  }
}
