/** Debounced analyze loop: at most one request per settling window,
 *  invalid forms never fire, and stale responses are discarded. */

import { isValid, type StrategyForm } from "./form.js";
import type { AnalyzeRequest, WhatIfResult } from "./types.js";
import { Debouncer, LatestWins, type Schedule } from "./viewmodel.js";

export interface AnalyzeApi {
  analyze(body: AnalyzeRequest): Promise<WhatIfResult>;
}

export function toAnalyzeRequest(form: StrategyForm): AnalyzeRequest {
  return {
    product: form.product,
    rate: form.rate,
    capacity: form.capacity,
    batch: form.batch,
    threshold: form.threshold,
    unit: form.unit,
  };
}

export class AnalyzeLoop {
  private readonly gate = new LatestWins();
  private readonly debouncer: Debouncer;
  private form: StrategyForm | null = null;

  constructor(
    private readonly api: AnalyzeApi,
    private readonly onResult: (result: WhatIfResult) => void,
    private readonly onError: (error: unknown) => void,
    settleMs = 300,
    schedule?: Schedule,
  ) {
    this.debouncer =
      schedule === undefined ? new Debouncer(settleMs) : new Debouncer(settleMs, schedule);
  }

  /** Call on every form edit; only the settled latest state is sent. */
  formChanged(form: StrategyForm): void {
    this.form = { ...form, sweepRates: [...form.sweepRates] };
    if (!isValid(this.form)) {
      return;
    }
    this.debouncer.run(() => {
      void this.fire();
    });
  }

  private async fire(): Promise<void> {
    const form = this.form;
    if (form === null) {
      return;
    }
    const ticket = this.gate.nextTicket();
    try {
      const result = await this.api.analyze(toAnalyzeRequest(form));
      if (this.gate.tryApply(ticket)) {
        this.onResult(result);
      }
    } catch (error) {
      if (this.gate.tryApply(ticket)) {
        this.onError(error);
      }
    }
  }
}
