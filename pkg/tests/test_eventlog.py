"""Ingestion, sublog extraction and object listing."""
from __future__ import annotations

import io
from datetime import datetime, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shelfwise import (
    Event,
    EventLog,
    IngestionConfig,
    MalformedRow,
    MissingColumn,
    UnknownObject,
    extract_sublog,
    list_products,
    parse_log,
    read_jsonl,
    write_jsonl,
)
from conftest import TABLE1_CONFIG, make_log, random_log


class TestParseCsv:
    def test_table1_shape(self, table1_log):
        assert len(table1_log.events) == 5
        assert len(table1_log.objects) >= 4
        assert {"orange", "apple", "mango", "watermelon"} <= table1_log.objects
        e1 = table1_log.events[0]
        assert e1.objects == frozenset({"orange", "client 1"})
        assert e1.quantity == 10
        assert e1.attrs["total_price"] == "12.0"
        assert e1.timestamp == datetime(2025, 7, 19, 8, 23, 42)

    def test_empty_csv_with_header(self):
        log = parse_log(io.StringIO("product,quantity,timestamp\n"), IngestionConfig())
        assert len(log.events) == 0
        assert log.objects == frozenset()

    def test_missing_column(self):
        source = io.StringIO("item,quantity,timestamp\n")
        with pytest.raises(MissingColumn, match="product"):
            parse_log(source, IngestionConfig())

    def _csv_with_bad_rows(self) -> str:
        lines = ["product,quantity,timestamp"]
        for n in range(100):
            ts = datetime(2024, 1, 1) + timedelta(hours=n)
            lines.append(f"p{n % 7},{1 + n % 4},{ts:%Y-%m-%d %H:%M:%S}")
        lines[5] = "p1,zero,2024-01-01 05:00:00"      # non-integer quantity
        lines[20] = "p2,0,2024-01-01 20:00:00"        # quantity < 1
        lines[50] = "p3,2,not-a-timestamp"            # bad timestamp
        return "\n".join(lines) + "\n"

    def test_lenient_skips_and_counts(self):
        log = parse_log(io.StringIO(self._csv_with_bad_rows()), IngestionConfig(), strict=False)
        assert len(log.events) == 97
        assert log.skipped == 3

    def test_strict_aborts_with_row_number(self):
        with pytest.raises(MalformedRow, match="row 6"):
            parse_log(io.StringIO(self._csv_with_bad_rows()), IngestionConfig())

    def test_duplicate_ids_rejected(self):
        text = (
            "id,product,quantity,timestamp\n"
            "a,x,1,2024-01-01 00:00:00\n"
            "a,y,1,2024-01-01 01:00:00\n"
        )
        config = IngestionConfig(id_col="id")
        with pytest.raises(MalformedRow, match="duplicate"):
            parse_log(io.StringIO(text), config)
        log = parse_log(io.StringIO(text), config, strict=False)
        assert len(log.events) == 1 and log.skipped == 1

    def test_ids_assigned_from_row_order(self):
        text = "product,quantity,timestamp\nx,1,2024-01-01 00:00:00\ny,2,2024-01-01 01:00:00\n"
        log = parse_log(io.StringIO(text), IngestionConfig())
        assert [e.id for e in log.events] == ["e1", "e2"]

    def test_mapped_columns_must_be_distinct(self):
        with pytest.raises(ValueError, match="distinct"):
            IngestionConfig(object_col="a", quantity_col="a")


class TestJsonl:
    def test_round_trip_table1(self, table1_log):
        buffer = io.StringIO()
        write_jsonl(table1_log, buffer)
        reparsed = parse_log(io.StringIO(buffer.getvalue()), TABLE1_CONFIG)
        assert reparsed.events == table1_log.events

    @settings(max_examples=50, deadline=None)
    @given(
        rows=st.lists(
            st.tuples(
                st.sampled_from(["alpha", "beta", "gamma"]),
                st.integers(min_value=1, max_value=20),
                st.integers(min_value=0, max_value=10_000),  # minutes offset
                st.dictionaries(st.sampled_from(["price", "aisle"]),
                                st.text(min_size=1, max_size=8), max_size=2),
            ),
            max_size=30,
        )
    )
    def test_round_trip_random_logs(self, rows):
        events = tuple(
            Event(id=f"e{n}", objects=frozenset({prod}), quantity=q,
                  timestamp=datetime(2024, 1, 1) + timedelta(minutes=m), attrs=attrs)
            for n, (prod, q, m, attrs) in enumerate(rows, start=1)
        )
        objects = frozenset(o for e in events for o in e.objects)
        log = EventLog(events=events, objects=objects)
        buffer = io.StringIO()
        write_jsonl(log, buffer)
        assert read_jsonl(io.StringIO(buffer.getvalue())).events == log.events

    def test_rejects_bad_quantity(self):
        line = '{"id": "e1", "objects": ["x"], "quantity": 0, "timestamp": "2024-01-01T00:00:00"}\n'
        with pytest.raises(MalformedRow, match="row 1"):
            read_jsonl(io.StringIO(line))


class TestExtractSublog:
    def test_table1_orange(self, table1_log):
        sublog = extract_sublog(table1_log, "orange")
        assert [e.id for e in sublog.events] == ["e1", "e3"]

    def test_product_in_every_event(self):
        log = make_log([("milk", 1, 5.0), ("milk", 2, 1.0), ("milk", 1, 3.0)])
        sublog = extract_sublog(log, "milk")
        assert len(sublog.events) == 3
        assert [e.id for e in sublog.events] == ["e2", "e3", "e1"]  # re-sorted

    def test_unknown_object(self, table1_log):
        with pytest.raises(UnknownObject):
            extract_sublog(table1_log, "durian")

    def test_matches_brute_force_filter(self):
        rng = np.random.default_rng(7)
        log = random_log(rng, 1000, [f"p{i}" for i in range(12)])
        for product in ("p0", "p5", "p11"):
            sublog = extract_sublog(log, product)
            expected = sorted(
                (e for e in log.events if product in e.objects),
                key=lambda e: e.timestamp,
            )
            assert list(sublog.events) == expected
            assert len(sublog.events) == sum(product in e.objects for e in log.events)

    def test_idempotent(self):
        rng = np.random.default_rng(8)
        log = random_log(rng, 200, ["a", "b", "c"])
        sublog = extract_sublog(log, "b")
        as_log = EventLog(events=sublog.events,
                          objects=frozenset(o for e in sublog.events for o in e.objects))
        assert extract_sublog(as_log, "b").events == sublog.events

    def test_ties_keep_source_order(self):
        log = make_log([("a", 1, 2.0), ("a", 2, 2.0), ("a", 3, 1.0)])
        sublog = extract_sublog(log, "a")
        assert [e.id for e in sublog.events] == ["e3", "e1", "e2"]


class TestListProducts:
    def test_table1_counts(self, table1_log):
        summary = {s.id: s for s in list_products(table1_log)}
        assert summary["orange"].count == 2
        assert summary["orange"].first == datetime(2025, 7, 19, 8, 23, 42)
        assert summary["orange"].last == datetime(2025, 7, 19, 8, 24, 22)
        # clients are objects too, so per-object counts can exceed |E|
        assert sum(s.count for s in list_products(table1_log)) >= len(table1_log.events)

    def test_empty_log(self):
        assert list_products(EventLog(events=(), objects=frozenset())) == []

    def test_counts_match_brute_force(self):
        rng = np.random.default_rng(9)
        log = random_log(rng, 500, [f"p{i}" for i in range(9)])
        tally: dict[str, int] = {}
        for e in log.events:
            for obj in e.objects:
                tally[obj] = tally.get(obj, 0) + 1
        assert {s.id: s.count for s in list_products(log)} == tally


class TestInvariants:
    def test_event_requires_objects_and_quantity(self):
        with pytest.raises(ValueError, match="non-empty"):
            Event(id="x", objects=frozenset(), quantity=1, timestamp=datetime(2024, 1, 1))
        with pytest.raises(ValueError, match="quantity"):
            Event(id="x", objects=frozenset({"a"}), quantity=0, timestamp=datetime(2024, 1, 1))

    def test_log_rejects_duplicate_ids(self):
        e = Event(id="x", objects=frozenset({"a"}), quantity=1, timestamp=datetime(2024, 1, 1))
        with pytest.raises(ValueError, match="duplicate"):
            EventLog(events=(e, e), objects=frozenset({"a"}))

    def test_log_rejects_unknown_objects(self):
        e = Event(id="x", objects=frozenset({"a"}), quantity=1, timestamp=datetime(2024, 1, 1))
        with pytest.raises(ValueError, match="outside"):
            EventLog(events=(e,), objects=frozenset({"b"}))
