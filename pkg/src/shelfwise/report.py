"""Render sweep results to delimited files and matplotlib figures.

One report directory per sweep: a summary CSV with all metrics, one
probability CSV and one distribution bar chart per supply rate, and a
comparison figure of the three metrics across rates.
"""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import WhatIfResult

SUMMARY_COLUMNS = [
    "rate", "batch", "capacity", "threshold", "maxQuantity",
    "expectedQuantity", "undersupplyProbability", "expectedSurplus",
    "irreducible", "residual",
]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def write_pi_csv(result: WhatIfResult, path: Path) -> None:
    """Steady-state probabilities as (state, probability) rows."""
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["state", "probability"])
        for state, p in enumerate(result.steady.pi):
            writer.writerow([state, repr(float(p))])


def write_summary_csv(results: list[WhatIfResult], path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for r in results:
            row = r.to_json_dict()
            writer.writerow([_fmt(row[col]) for col in SUMMARY_COLUMNS])


def plot_distribution(result: WhatIfResult, path: Path, product: str = "") -> None:
    """Bar chart of the steady state with threshold and shortage band marked."""
    pi = result.steady.pi
    states = range(len(pi))
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar(states, pi, width=1.0, color="#4878cf", edgecolor="none")
    ax.axvspan(-0.5, result.max_quantity - 0.5, color="#d65f5f", alpha=0.25,
               label=f"undersupply states (< {result.max_quantity})")
    ax.axvline(result.threshold + 0.5, color="#333333", linestyle="--",
               label=f"waste threshold ({result.threshold})")
    ax.set_xlabel("units on shelf")
    ax.set_ylabel("steady-state probability")
    title = f"supply rate {result.strategy.rate}/{result.unit.value[:-1]}, batch {result.strategy.batch}"
    if product:
        title = f"{product}: {title}"
    ax.set_title(title)
    ax.legend(loc="upper center", fontsize=8)
    ax.set_xlim(-0.5, len(pi) - 0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_sweep_comparison(results: list[WhatIfResult], path: Path, product: str = "") -> None:
    """Three panels of metric vs supply rate over the solvable results."""
    solved = [r for r in results if r.irreducible]
    rates = [r.strategy.rate for r in solved]
    panels = [
        ("expected quantity", [r.expected_quantity for r in solved]),
        ("undersupply probability", [r.undersupply for r in solved]),
        ("expected surplus", [r.surplus for r in solved]),
    ]
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.8))
    for ax, (label, values) in zip(axes, panels):
        ax.plot(rates, values, marker="o", color="#4878cf")
        ax.set_xlabel("supply rate")
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.3)
    if product:
        fig.suptitle(product)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _rate_tag(rate: float) -> str:
    return repr(rate).replace(".", "_").replace("-", "m")


def write_report(results: list[WhatIfResult], outdir: Path, product: str = "") -> list[Path]:
    """Write all report artifacts into ``outdir``; returns the paths written."""
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    summary = outdir / "sweep_summary.csv"
    write_summary_csv(results, summary)
    written.append(summary)

    for r in results:
        if not r.irreducible:
            continue
        tag = _rate_tag(r.strategy.rate)
        pi_path = outdir / f"pi_rate_{tag}.csv"
        write_pi_csv(r, pi_path)
        written.append(pi_path)
        fig_path = outdir / f"distribution_rate_{tag}.png"
        plot_distribution(r, fig_path, product)
        written.append(fig_path)

    if len([r for r in results if r.irreducible]) >= 2:
        compare = outdir / "sweep_metrics.png"
        plot_sweep_comparison(results, compare, product)
        written.append(compare)
    return written
