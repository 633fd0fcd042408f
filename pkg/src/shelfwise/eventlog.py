"""Object-centric transaction logs and per-product sublogs.

A log is an ordered collection of events, each referencing a set of
objects (products, optionally clients), a purchased quantity and a
timestamp. Ingestion accepts CSV with a configurable column mapping or
the canonical JSON-lines format; both produce the same in-memory model.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import IO, Iterable, Union

from .errors import ShelfwiseError
from .units import TimeUnit

Source = Union[str, Path, IO[str]]

DEFAULT_TIME_FORMAT = "%Y-%m-%d %H:%M:%S"


class MissingColumn(ShelfwiseError):
    """The ingestion config names a column absent from the header."""


class MalformedRow(ShelfwiseError):
    """A data row cannot be turned into a valid event."""

    def __init__(self, row: int, reason: str):
        super().__init__(f"row {row}: {reason}")
        self.row = row
        self.reason = reason


class UnknownObject(ShelfwiseError):
    """Requested object does not appear in the log."""


@dataclass(frozen=True)
class Event:
    """One transaction: objects involved, units purchased, instant of sale."""

    id: str
    objects: frozenset[str]
    quantity: int
    timestamp: datetime
    attrs: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.objects:
            raise ValueError(f"event {self.id!r}: objects must be non-empty")
        if self.quantity < 1:
            raise ValueError(f"event {self.id!r}: quantity must be >= 1, got {self.quantity}")


@dataclass(frozen=True)
class EventLog:
    """Immutable event collection plus the set of all referenced objects.

    ``skipped`` counts rows dropped during lenient parsing; it is ingest
    metadata and excluded from equality.
    """

    events: tuple[Event, ...]
    objects: frozenset[str]
    skipped: int = field(default=0, compare=False)

    def __post_init__(self):
        ids = set()
        for e in self.events:
            if e.id in ids:
                raise ValueError(f"duplicate event id {e.id!r}")
            ids.add(e.id)
            if not e.objects <= self.objects:
                raise ValueError(f"event {e.id!r} references objects outside the log")

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class ProductSublog:
    """Events referencing one product, sorted by timestamp (stable)."""

    product: str
    events: tuple[Event, ...]

    def __post_init__(self):
        for prev, cur in zip(self.events, self.events[1:]):
            if cur.timestamp < prev.timestamp:
                raise ValueError("sublog events must be sorted by timestamp")
        for e in self.events:
            if self.product not in e.objects:
                raise ValueError(f"event {e.id!r} does not reference product {self.product!r}")

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class IngestionConfig:
    """Column mapping and time settings for CSV ingestion.

    ``attr_cols`` are carried over verbatim as string-valued event
    attributes. ``client_col``, when mapped, contributes a second object
    to each event; clients are retained but ignored by discovery.
    """

    object_col: str = "product"
    quantity_col: str = "quantity"
    time_col: str = "timestamp"
    time_format: str = DEFAULT_TIME_FORMAT
    unit: TimeUnit = TimeUnit.HOURS
    id_col: str | None = None
    client_col: str | None = None
    attr_cols: tuple[str, ...] = ()

    def __post_init__(self):
        mapped = self.mapped_columns()
        if len(mapped) != len(set(mapped)):
            raise ValueError(f"mapped columns must be distinct, got {mapped}")
        if self.unit.seconds <= 0:
            raise ValueError("time unit conversion factor must be > 0")

    def mapped_columns(self) -> tuple[str, ...]:
        cols = [self.object_col, self.quantity_col, self.time_col]
        if self.id_col is not None:
            cols.append(self.id_col)
        if self.client_col is not None:
            cols.append(self.client_col)
        cols.extend(self.attr_cols)
        return tuple(cols)


@dataclass(frozen=True)
class ObjectSummary:
    """Per-object tally for listings: count and first/last timestamp."""

    id: str
    count: int
    first: datetime
    last: datetime


def _read_text(source: Source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    return source.read()


def parse_log(source: Source, config: IngestionConfig, *, strict: bool = True) -> EventLog:
    """Parse a CSV file or JSON-lines stream into an :class:`EventLog`.

    CSV sources need a header row containing every mapped column;
    JSON-lines sources use the canonical field names and ignore the
    column mapping. Rows with unparseable timestamps, quantity < 1 or
    missing objects raise :class:`MalformedRow` in strict mode; in
    lenient mode they are skipped and counted on the returned log.
    """
    text = _read_text(source)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return read_jsonl(io.StringIO(text), strict=strict)
    return _parse_csv(text, config, strict=strict)


def _parse_csv(text: str, config: IngestionConfig, *, strict: bool) -> EventLog:
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    for col in config.mapped_columns():
        if col not in header:
            raise MissingColumn(f"column {col!r} not found in header {header}")

    events: list[Event] = []
    seen_ids: set[str] = set()
    skipped = 0
    for ordinal, row in enumerate(reader, start=1):
        try:
            events.append(_row_to_event(row, ordinal, reader.line_num, config, seen_ids))
            seen_ids.add(events[-1].id)
        except MalformedRow:
            if strict:
                raise
            skipped += 1
    return _build_log(events, skipped)


def _row_to_event(
    row: dict[str, str | None],
    ordinal: int,
    line_num: int,
    config: IngestionConfig,
    seen_ids: set[str],
) -> Event:
    def cell(col: str) -> str:
        value = row.get(col)
        return value.strip() if value is not None else ""

    obj = cell(config.object_col)
    if not obj:
        raise MalformedRow(line_num, "empty object identifier")
    objects = {obj}
    if config.client_col is not None:
        client = cell(config.client_col)
        if client:
            objects.add(client)

    try:
        quantity = int(cell(config.quantity_col))
    except ValueError:
        raise MalformedRow(line_num, f"quantity {cell(config.quantity_col)!r} is not an integer") from None
    if quantity < 1:
        raise MalformedRow(line_num, f"quantity must be >= 1, got {quantity}")

    raw_ts = cell(config.time_col)
    try:
        timestamp = datetime.strptime(raw_ts, config.time_format)
    except ValueError:
        raise MalformedRow(line_num, f"timestamp {raw_ts!r} does not match {config.time_format!r}") from None

    event_id = cell(config.id_col) if config.id_col is not None else f"e{ordinal}"
    if not event_id:
        raise MalformedRow(line_num, "empty event id")
    if event_id in seen_ids:
        raise MalformedRow(line_num, f"duplicate event id {event_id!r}")

    attrs = {col: cell(col) for col in config.attr_cols if cell(col)}
    return Event(id=event_id, objects=frozenset(objects), quantity=quantity,
                 timestamp=timestamp, attrs=attrs)


def read_jsonl(source: Source, *, strict: bool = True) -> EventLog:
    """Read the canonical JSON-lines format (one event object per line)."""
    text = _read_text(source)
    events: list[Event] = []
    seen_ids: set[str] = set()
    skipped = 0
    # split on newlines only: JSON strings may embed other Unicode line
    # separators that str.splitlines would treat as record boundaries
    for line_num, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            events.append(_jsonl_to_event(line, line_num, seen_ids))
            seen_ids.add(events[-1].id)
        except MalformedRow:
            if strict:
                raise
            skipped += 1
    return _build_log(events, skipped)


def _jsonl_to_event(line: str, line_num: int, seen_ids: set[str]) -> Event:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRow(line_num, f"invalid JSON: {exc}") from None
    try:
        event_id = str(record["id"])
        objects = frozenset(str(o) for o in record["objects"])
        quantity = record["quantity"]
        timestamp = datetime.fromisoformat(record["timestamp"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedRow(line_num, f"bad event record: {exc}") from None
    if not isinstance(quantity, int) or quantity < 1:
        raise MalformedRow(line_num, f"quantity must be a positive integer, got {quantity!r}")
    if not objects:
        raise MalformedRow(line_num, "objects must be non-empty")
    if event_id in seen_ids:
        raise MalformedRow(line_num, f"duplicate event id {event_id!r}")
    attrs = {str(k): str(v) for k, v in record.get("attrs", {}).items()}
    return Event(id=event_id, objects=objects, quantity=quantity,
                 timestamp=timestamp, attrs=attrs)


def _build_log(events: list[Event], skipped: int) -> EventLog:
    objects: set[str] = set()
    for e in events:
        objects |= e.objects
    return EventLog(events=tuple(events), objects=frozenset(objects), skipped=skipped)


def write_jsonl(log: EventLog, sink: Source) -> None:
    """Write the canonical JSON-lines format; lossless round-trip with read_jsonl."""
    lines = []
    for e in log.events:
        record: dict = {
            "id": e.id,
            "objects": sorted(e.objects),
            "quantity": e.quantity,
            "timestamp": e.timestamp.isoformat(),
        }
        if e.attrs:
            record["attrs"] = dict(sorted(e.attrs.items()))
        lines.append(json.dumps(record, ensure_ascii=False))
    text = "\n".join(lines) + ("\n" if lines else "")
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text, encoding="utf-8")
    else:
        sink.write(text)


def extract_sublog(log: EventLog, product: str) -> ProductSublog:
    """Restrict the log to events referencing ``product``, timestamp-sorted.

    Ties keep source order (stable sort). Raises :class:`UnknownObject`
    if the product never appears.
    """
    if product not in log.objects:
        raise UnknownObject(f"object {product!r} not present in the log")
    selected = [e for e in log.events if product in e.objects]
    selected.sort(key=lambda e: e.timestamp)
    return ProductSublog(product=product, events=tuple(selected))


def list_products(log: EventLog) -> list[ObjectSummary]:
    """Tally every object appearing in at least one event, sorted by id."""
    counts: dict[str, int] = {}
    first: dict[str, datetime] = {}
    last: dict[str, datetime] = {}
    for e in log.events:
        for obj in e.objects:
            counts[obj] = counts.get(obj, 0) + 1
            if obj not in first or e.timestamp < first[obj]:
                first[obj] = e.timestamp
            if obj not in last or e.timestamp > last[obj]:
                last[obj] = e.timestamp
    return [ObjectSummary(id=obj, count=counts[obj], first=first[obj], last=last[obj])
            for obj in sorted(counts)]
