/** Dependency-free SVG renderers for the distribution and sweep charts. */

import type { DistributionSeries, SweepSeries } from "./viewmodel.js";

const WIDTH = 760;
const HEIGHT = 300;
const MARGIN = { left: 48, right: 12, top: 12, bottom: 28 };

function esc(value: string): string {
  return value.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Bar chart of the steady state; optional log scale for low-rate shapes. */
export function distributionChartSvg(series: DistributionSeries, logScale = false): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const n = series.probabilities.length;
  const floor = 1e-12;
  const values = logScale
    ? series.probabilities.map((p) => Math.log10(Math.max(p, floor)) - Math.log10(floor))
    : series.probabilities;
  const maxValue = Math.max(...values, 1e-300);
  const barW = plotW / n;

  const x = (state: number) => MARGIN.left + state * barW;
  const y = (value: number) => MARGIN.top + plotH * (1 - value / maxValue);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" class="chart">`,
  );
  // shortage band: states below the undersupply cutoff
  parts.push(
    `<rect class="undersupply-band" x="${x(0)}" y="${MARGIN.top}" ` +
      `width="${barW * series.undersupplyCutoff}" height="${plotH}" fill="#d65f5f" opacity="0.18"/>`,
  );
  for (let s = 0; s < n; s++) {
    const v = values[s] ?? 0;
    const h = plotH * (v / maxValue);
    parts.push(
      `<rect class="bar" data-state="${s}" x="${x(s).toFixed(2)}" y="${(y(v)).toFixed(2)}" ` +
        `width="${Math.max(barW - 0.4, 0.4).toFixed(2)}" height="${h.toFixed(2)}" fill="#4878cf"/>`,
    );
  }
  const tx = x(series.thresholdIndex + 1);
  parts.push(
    `<line class="threshold" x1="${tx.toFixed(2)}" x2="${tx.toFixed(2)}" ` +
      `y1="${MARGIN.top}" y2="${MARGIN.top + plotH}" stroke="#333" stroke-dasharray="4 3"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left}" y="${HEIGHT - 8}" font-size="11">units on shelf ` +
      `(threshold ${series.thresholdIndex}, shortage below ${series.undersupplyCutoff}` +
      `${logScale ? ", log scale" : ""})</text>`,
  );
  parts.push("</svg>");
  return parts.join("");
}

/** One polyline panel per metric over the supply rate axis. */
export function sweepChartSvg(series: SweepSeries): string {
  const panels: Array<{ label: string; values: number[] }> = [
    { label: "expected quantity", values: series.expectedQuantity },
    { label: "undersupply probability", values: series.undersupplyProbability },
    { label: "expected surplus", values: series.expectedSurplus },
  ];
  const panelW = 250;
  const panelH = 220;
  const inner = { left: 42, right: 8, top: 10, bottom: 26 };
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${panelW * 3} ${panelH}" class="chart">`,
  ];
  panels.forEach((panel, index) => {
    const x0 = index * panelW;
    const minRate = Math.min(...series.rates);
    const maxRate = Math.max(...series.rates);
    const maxVal = Math.max(...panel.values, 1e-300);
    const sx = (rate: number) =>
      x0 + inner.left +
      ((rate - minRate) / Math.max(maxRate - minRate, 1e-12)) *
        (panelW - inner.left - inner.right);
    const sy = (value: number) =>
      inner.top + (panelH - inner.top - inner.bottom) * (1 - value / maxVal);
    const points = series.rates
      .map((rate, i) => `${sx(rate).toFixed(2)},${sy(panel.values[i] ?? 0).toFixed(2)}`)
      .join(" ");
    parts.push(
      `<polyline class="metric-line" data-metric="${index}" points="${points}" ` +
        `fill="none" stroke="#4878cf" stroke-width="2"/>`,
    );
    series.rates.forEach((rate, i) => {
      parts.push(
        `<circle cx="${sx(rate).toFixed(2)}" cy="${sy(panel.values[i] ?? 0).toFixed(2)}" ` +
          `r="3" fill="#4878cf"/>`,
      );
    });
    parts.push(
      `<text x="${x0 + inner.left}" y="${panelH - 8}" font-size="11">${esc(panel.label)}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
