"""Shared builders for logs, sublogs and chains used across the suite."""
from __future__ import annotations

from datetime import datetime, timedelta
from pathlib import Path

import numpy as np
import pytest

from shelfwise import Event, EventLog, IngestionConfig, extract_sublog

BASE_TIME = datetime(2025, 7, 19, 8, 0, 0)

REPO_ROOT = Path(__file__).resolve().parent.parent
DATASET_PATH = REPO_ROOT / "data" / "grocery_transactions.csv"

TABLE1_CSV = """\
product,client,quantity,total_price,timestamp
orange,client 1,10,12.0,2025-07-19 08:23:42
apple,client 1,15,10.3,2025-07-19 08:24:03
orange,client 2,5,6.0,2025-07-19 08:24:22
mango,client 2,2,8.0,2025-07-19 08:24:49
watermelon,client 2,1,6.3,2025-07-19 08:25:05
"""

TABLE1_CONFIG = IngestionConfig(
    object_col="product",
    quantity_col="quantity",
    time_col="timestamp",
    client_col="client",
    attr_cols=("total_price",),
)

DATASET_CONFIG = IngestionConfig(
    object_col="product",
    quantity_col="quantity",
    time_col="timestamp",
    id_col="transaction_id",
    attr_cols=("category", "total_price"),
)


def at_hours(hours: float) -> datetime:
    return BASE_TIME + timedelta(hours=hours)


def make_log(rows):
    """Build a log from (product, quantity, hours_offset) or (product, quantity, hours, attrs)."""
    events = []
    objects = set()
    for n, row in enumerate(rows, start=1):
        product, quantity, hours = row[:3]
        attrs = row[3] if len(row) > 3 else {}
        events.append(Event(id=f"e{n}", objects=frozenset({product}), quantity=quantity,
                            timestamp=at_hours(hours), attrs=dict(attrs)))
        objects.add(product)
    return EventLog(events=tuple(events), objects=frozenset(objects))


def make_sublog(product, purchases):
    """Sublog for one product from (hours_offset, quantity) pairs."""
    log = make_log([(product, q, h) for h, q in purchases])
    return extract_sublog(log, product)


def random_log(rng: np.random.Generator, n_events: int, products: list[str],
               quantities=(1, 2, 3, 4, 5), span_hours: float = 500.0) -> EventLog:
    rows = []
    for _ in range(n_events):
        product = products[int(rng.integers(len(products)))]
        quantity = int(rng.choice(quantities))
        hours = float(rng.uniform(0.0, span_hours))
        rows.append((product, quantity, hours))
    return make_log(rows)


@pytest.fixture
def table1_log(tmp_path):
    path = tmp_path / "table1.csv"
    path.write_text(TABLE1_CSV, encoding="utf-8")
    from shelfwise import parse_log
    return parse_log(path, TABLE1_CONFIG)


@pytest.fixture(scope="session")
def dataset_log():
    from shelfwise import parse_log
    return parse_log(DATASET_PATH, DATASET_CONFIG)
