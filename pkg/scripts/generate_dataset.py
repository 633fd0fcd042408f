"""Generate the bundled grocery transaction dataset (deterministic).

Produces data/grocery_transactions.csv: 300 unique products, exactly
7,829 transactions over ~90 days, 8 products never sold in quantity 1,
and a small high-volume fruit category. The reference fruit product
(fruit_orange) uses per-class mean inter-arrival times fitted offline
(scripts/calibrate.py) so that the default what-if sweep (capacity 100,
batch 10, threshold 70, rates 0.25/0.30/0.35/0.40) reproduces the
reference metric set; the realized values are printed for the golden
test. The file is fully determined by the seed below.
"""
from __future__ import annotations

import csv
import sys
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from shelfwise import IngestionConfig, extract_sublog, list_products, parse_log, quantity_classes
from shelfwise.analysis import what_if_sweep

SEED = 20250601
BASE = datetime(2024, 3, 1, 0, 0, 0)
TOTAL_ROWS = 7_829
N_PRODUCTS = 300
OUT_PATH = Path(__file__).resolve().parent.parent / "data" / "grocery_transactions.csv"

# Calibrated purchase rates (per hour) for the reference fruit product.
REFERENCE_RATES = {
    1: 0.6337975018797294,
    2: 0.11496552116941293,
    3: 0.4181520382677979,
    4: 0.20604793674521146,
}
BUSY_WINDOW_HOURS = 240.0

BUSY_FRUITS = [
    ("fruit_orange", 1.00),   # calibrated reference, no jitter
    ("fruit_apple", 0.80),
    ("fruit_banana", 0.95),
    ("fruit_mango", 1.15),
    ("fruit_melon", 1.30),
]

# The 8 products never sold in quantity 1: (name, {quantity: event count}).
EXCEPTION_PRODUCTS = [
    ("fruit_kiwi", {2: 9, 4: 6}),
    ("fruit_papaya", {3: 8, 6: 4}),
    ("beverage_keg_crate", {2: 14}),
    ("pantry_flour_bulk", {4: 7, 2: 9}),
    ("household_soap_pack", {3: 11}),
    ("snack_party_mix", {2: 8, 6: 3}),
    ("dairy_butter_tray", {5: 9}),
    ("frozen_berry_carton", {2: 12, 4: 5}),
]

SINGLE_EVENT_PRODUCTS = ["pantry_saffron_jar", "household_brass_polish", "snack_gift_tin"]

CATEGORY_SIZES = {
    "vegetable": 44, "dairy": 33, "bakery": 29, "meat": 24, "seafood": 18,
    "frozen": 24, "beverage": 35, "snack": 29, "pantry": 38, "household": 19,
}

SWEEP_RATES = [0.25, 0.30, 0.35, 0.40]
REFERENCE_TARGETS = {
    "undersupply": [0.1867, 0.0642, 0.0153, 0.0031],
    "expectedQuantity": [27.77, 49.35, 67.34, 77.31],
    "expectedSurplus": [1.0239, 4.1024, 8.4592, 12.1044],
}


def class_series_exact_mean(rng, start_s: float, mean_s: float, count: int) -> list[int]:
    """Timestamps (whole seconds) whose successive gaps average exactly mean_s.

    The interval mean telescopes to (last - first)/(count - 1), so rescaling
    the raw exponential gaps to the exact total keeps the discovered rate at
    the target up to the one-second rounding of the two endpoints.
    """
    gaps = rng.exponential(mean_s, count - 1)
    gaps *= mean_s * (count - 1) / gaps.sum()
    times = start_s + np.concatenate([[0.0], np.cumsum(gaps)])
    return [int(round(t)) for t in times]


def busy_fruit_rows(rng, name: str, factor: float) -> list[tuple[int, str, str, int]]:
    rows = []
    for quantity, base_rate in REFERENCE_RATES.items():
        rate = base_rate * factor
        if factor != 1.0:
            rate *= float(rng.uniform(0.92, 1.08))
        count = max(2, round(BUSY_WINDOW_HOURS * rate))
        start = float(rng.uniform(0, 30 * 86_400))
        for t in class_series_exact_mean(rng, start, 3600.0 / rate, count):
            rows.append((t, name, "fruit", quantity))
    return rows


def spread_rows(rng, name: str, category: str, class_counts: dict[int, int],
                window_days: float = 90.0) -> list[tuple[int, str, str, int]]:
    rows = []
    horizon_s = window_days * 86_400
    for quantity, count in class_counts.items():
        start = float(rng.uniform(0, horizon_s * 0.3))
        span = float(rng.uniform(horizon_s * 0.3, horizon_s - start))
        if count == 1:
            rows.append((int(round(start + rng.uniform(0, span))), name, category, quantity))
            continue
        gaps = rng.exponential(span / count, count - 1)
        times = start + np.concatenate([[0.0], np.cumsum(gaps)])
        rows.extend((int(round(t)), name, category, quantity) for t in times)
    return rows


def ordinary_class_counts(rng, total: int) -> dict[int, int]:
    """Split a product's event count over quantity classes, always including 1."""
    n_classes = min(int(rng.integers(1, 5)), total)
    classes = [1] + sorted(rng.choice(range(2, 7), size=n_classes - 1, replace=False).tolist())
    weights = np.array([1.0 / q for q in classes])
    alloc = rng.multinomial(total - len(classes), weights / weights.sum())
    return {q: int(1 + a) for q, a in zip(classes, alloc)}


def build_rows() -> list[tuple[int, str, str, int]]:
    rng = np.random.default_rng(SEED)
    rows: list[tuple[int, str, str, int]] = []

    for name, factor in BUSY_FRUITS:
        rows.extend(busy_fruit_rows(rng, name, factor))
    for name, class_counts in EXCEPTION_PRODUCTS:
        category = name.split("_")[0]
        rows.extend(spread_rows(rng, name, category, class_counts))
    for name in SINGLE_EVENT_PRODUCTS:
        category = name.split("_")[0]
        rows.extend(spread_rows(rng, name, category, {1: 1}))

    ordinary_names = []
    for category, size in CATEGORY_SIZES.items():
        taken = sum(1 for n, _ in EXCEPTION_PRODUCTS if n.startswith(category + "_"))
        taken += sum(1 for n in SINGLE_EVENT_PRODUCTS if n.startswith(category + "_"))
        ordinary_names += [f"{category}_{i:03d}" for i in range(1, size - taken + 1)]
    assert len(ordinary_names) + len(BUSY_FRUITS) + len(EXCEPTION_PRODUCTS) \
        + len(SINGLE_EVENT_PRODUCTS) == N_PRODUCTS

    budget = TOTAL_ROWS - len(rows) - 2 * len(ordinary_names)
    assert budget > 0, "busy products consumed the row budget"
    weights = rng.lognormal(0.0, 1.0, size=len(ordinary_names))
    extra = rng.multinomial(budget, weights / weights.sum())
    for name, n_extra in zip(ordinary_names, extra):
        category = name.rsplit("_", 1)[0]
        rows.extend(spread_rows(rng, name, category, ordinary_class_counts(rng, 2 + int(n_extra))))

    assert len(rows) == TOTAL_ROWS, f"expected {TOTAL_ROWS} rows, built {len(rows)}"
    rows.sort(key=lambda r: r[0])
    return rows


def write_csv(rows, path: Path) -> None:
    rng = np.random.default_rng(SEED + 1)
    unit_price = {}
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["transaction_id", "product", "category", "quantity",
                         "total_price", "timestamp"])
        for n, (seconds, name, category, quantity) in enumerate(rows, start=1):
            if name not in unit_price:
                unit_price[name] = float(rng.uniform(0.5, 9.0))
            price = round(quantity * unit_price[name] * float(rng.uniform(0.95, 1.05)), 2)
            ts = BASE + timedelta(seconds=seconds)
            writer.writerow([f"t{n:05d}", name, category, quantity,
                             f"{price:.2f}", ts.strftime("%Y-%m-%d %H:%M:%S")])


def verify(path: Path) -> None:
    config = IngestionConfig(
        object_col="product", quantity_col="quantity", time_col="timestamp",
        id_col="transaction_id", attr_cols=("category", "total_price"),
    )
    log = parse_log(path, config)
    summaries = list_products(log)
    assert len(log.events) == TOTAL_ROWS, len(log.events)
    assert len(summaries) == N_PRODUCTS, len(summaries)

    no_unit = [s.id for s in summaries
               if 1 not in quantity_classes(extract_sublog(log, s.id))]
    assert sorted(no_unit) == sorted(n for n, _ in EXCEPTION_PRODUCTS), no_unit

    fruit_products = sorted({
        next(iter(e.objects)) for e in log.events if e.attrs.get("category") == "fruit"
    })
    print(f"fruit products: {fruit_products}")
    for name in fruit_products:
        sublog = extract_sublog(log, name)
        if 1 not in quantity_classes(sublog):
            continue
        results = what_if_sweep(sublog, capacity=100, batch=10,
                                rates=SWEEP_RATES, threshold=70)
        us = [r.undersupply for r in results]
        sp = [r.surplus for r in results]
        assert all(r.irreducible for r in results), name
        assert all(b < a * 0.9 for a, b in zip(us, us[1:])), (name, us)
        assert all(b > a * 1.02 for a, b in zip(sp, sp[1:])), (name, sp)
        assert us[-1] >= 1e-10, (name, us)
        print(f"  {name}: undersupply {['%.4g' % v for v in us]}")

    reference = extract_sublog(log, "fruit_orange")
    results = what_if_sweep(reference, capacity=100, batch=10,
                            rates=SWEEP_RATES, threshold=70)
    realized = {
        "undersupply": [r.undersupply for r in results],
        "expectedQuantity": [r.expected_quantity for r in results],
        "expectedSurplus": [r.surplus for r in results],
    }
    worst = 0.0
    for key, targets in REFERENCE_TARGETS.items():
        for value, target in zip(realized[key], targets):
            worst = max(worst, abs(value / target - 1.0))
    assert worst <= 0.05, worst
    print(f"reference product max deviation from targets: {worst:.4%}")
    print("realized reference metrics (freeze into the golden test):")
    for key in realized:
        print(f"  {key} = {[repr(v) for v in realized[key]]}")


def main() -> None:
    rows = build_rows()
    write_csv(rows, OUT_PATH)
    print(f"wrote {OUT_PATH} ({TOTAL_ROWS} rows, {N_PRODUCTS} products)")
    verify(OUT_PATH)


if __name__ == "__main__":
    main()
