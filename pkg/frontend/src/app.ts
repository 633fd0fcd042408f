/** DOM wiring: product picker, strategy controls, charts and error banner.
 *
 * All computation happens server-side; this file only copies response
 * fields into the DOM. In-flight analyze/sweep requests are bounded to
 * one each, with superseded responses discarded via LatestWins.
 */

import { ApiClient, toErrorState, type ErrorState } from "./api.js";
import { distributionChartSvg, sweepChartSvg } from "./charts.js";
import { AnalyzeLoop } from "./controller.js";
import { DEFAULT_FORM, isValid, validateForm, type StrategyForm } from "./form.js";
import type { ProductSummary, WhatIfResult } from "./types.js";
import {
  LatestWins,
  distributionSeries,
  filterProducts,
  metricCards,
  sweepSeries,
} from "./viewmodel.js";

const SETTLE_MS = 300;

export class App {
  private form: StrategyForm = { ...DEFAULT_FORM };
  private products: ProductSummary[] = [];
  private lastResult: WhatIfResult | null = null;
  private logScale = false;

  private readonly sweepGate = new LatestWins();
  private readonly analyzeLoop: AnalyzeLoop;

  constructor(
    private readonly api: ApiClient,
    private readonly root: Document,
  ) {
    this.analyzeLoop = new AnalyzeLoop(
      api,
      (result) => {
        this.lastResult = result;
        this.clearError();
        this.renderMetrics(result);
        this.renderDistribution();
      },
      (error) => this.showError(toErrorState(error)),
      SETTLE_MS,
    );
  }

  async start(): Promise<void> {
    this.bindControls();
    try {
      this.products = await this.api.products();
      this.renderPicker("");
    } catch (error) {
      this.showError(toErrorState(error));
    }
  }

  private el<T extends HTMLElement>(id: string): T {
    const node = this.root.getElementById(id);
    if (!node) {
      throw new Error(`missing element #${id}`);
    }
    return node as T;
  }

  private bindControls(): void {
    const search = this.el<HTMLInputElement>("product-search");
    search.addEventListener("input", () => this.renderPicker(search.value));

    const numeric: Array<[string, keyof StrategyForm, (v: string) => number]> = [
      ["capacity", "capacity", (v) => parseInt(v, 10)],
      ["batch", "batch", (v) => parseInt(v, 10)],
      ["threshold", "threshold", (v) => parseInt(v, 10)],
      ["rate", "rate", parseFloat],
    ];
    for (const [id, field, parse] of numeric) {
      const input = this.el<HTMLInputElement>(id);
      input.addEventListener("input", () => {
        (this.form[field] as number) = parse(input.value);
        if (field === "rate") {
          this.el<HTMLElement>("rate-value").textContent = String(this.form.rate);
        }
        this.onFormChange(field);
      });
    }

    const sweepRates = this.el<HTMLInputElement>("sweep-rates");
    sweepRates.addEventListener("input", () => {
      this.form.sweepRates = sweepRates.value
        .split(",")
        .map((s) => parseFloat(s.trim()))
        .filter((v) => !Number.isNaN(v));
      this.renderValidation();
    });

    this.el<HTMLButtonElement>("run-sweep").addEventListener("click", () => {
      void this.runSweep();
    });
    const logToggle = this.el<HTMLInputElement>("log-scale");
    logToggle.addEventListener("change", () => {
      this.logScale = logToggle.checked;
      this.renderDistribution();
    });
  }

  private renderPicker(query: string): void {
    const list = this.el<HTMLElement>("product-list");
    if (this.products.length === 0) {
      list.innerHTML = '<p class="empty">No products in the loaded log.</p>';
      return;
    }
    const visible = filterProducts(this.products, query);
    list.innerHTML = visible
      .map(
        (p) =>
          `<button class="product" data-id="${p.id}">` +
          `<span>${p.id}</span><span class="count">${p.count}</span></button>`,
      )
      .join("");
    for (const button of Array.from(list.querySelectorAll<HTMLButtonElement>("button.product"))) {
      button.addEventListener("click", () => {
        this.form.product = button.dataset.id ?? "";
        this.el<HTMLElement>("picked").textContent = this.form.product;
        this.onFormChange("product");
      });
    }
  }

  /** Debounced analyze on any change; threshold redraws the band immediately. */
  private onFormChange(field: keyof StrategyForm): void {
    this.renderValidation();
    if (field === "threshold" && this.lastResult) {
      this.renderDistribution(); // client-only band redraw, no refetch needed
    }
    this.analyzeLoop.formChanged(this.form);
  }

  private renderValidation(): void {
    const errors = validateForm(this.form);
    const box = this.el<HTMLElement>("form-errors");
    box.innerHTML = Object.entries(errors)
      .map(([field, message]) => `<p class="field-error" data-field="${field}">${message}</p>`)
      .join("");
  }

  private async runSweep(): Promise<void> {
    if (!isValid(this.form)) {
      return;
    }
    const ticket = this.sweepGate.nextTicket();
    try {
      const results = await this.api.sweep({
        product: this.form.product,
        rates: this.form.sweepRates,
        capacity: this.form.capacity,
        batch: this.form.batch,
        threshold: this.form.threshold,
        unit: this.form.unit,
      });
      if (!this.sweepGate.tryApply(ticket)) {
        return;
      }
      this.clearError();
      this.renderSweep(results);
    } catch (error) {
      if (this.sweepGate.tryApply(ticket)) {
        this.showError(toErrorState(error));
      }
    }
  }

  private renderMetrics(result: WhatIfResult): void {
    const cards = metricCards(result);
    this.el<HTMLElement>("metric-cards").innerHTML = cards
      .map(
        (card) =>
          `<div class="card" data-metric="${card.id}">` +
          `<div class="value">${card.display}</div>` +
          `<div class="label">${card.label}</div></div>`,
      )
      .join("");
  }

  private renderDistribution(): void {
    const panel = this.el<HTMLElement>("distribution");
    if (!this.lastResult) {
      return;
    }
    const series = distributionSeries(this.lastResult, this.form.threshold);
    if (!series) {
      panel.innerHTML = '<p class="fallback">Configuration is not analyzable.</p>';
      return;
    }
    panel.innerHTML = distributionChartSvg(series, this.logScale);
  }

  private renderSweep(results: WhatIfResult[]): void {
    const panel = this.el<HTMLElement>("sweep-panel");
    if (results.length < 2) {
      panel.innerHTML = '<p class="empty">Need at least two rates to compare.</p>';
      return;
    }
    const series = sweepSeries(results);
    const badges = series.reducibleRates
      .map((rate) => `<span class="badge">rate ${rate}: not analyzable</span>`)
      .join(" ");
    panel.innerHTML = (badges ? `<div class="badges">${badges}</div>` : "") + sweepChartSvg(series);
  }

  private showError(state: ErrorState): void {
    const banner = this.el<HTMLElement>("banner");
    banner.dataset.kind = state.kind;
    const extra =
      state.kind === "not-irreducible" && state.componentSizes.length > 0
        ? ` (component sizes: ${state.componentSizes.join(", ")})`
        : "";
    banner.textContent = state.message + extra;
    banner.hidden = false;
  }

  private clearError(): void {
    const banner = this.el<HTMLElement>("banner");
    banner.hidden = true;
    banner.textContent = "";
  }
}
