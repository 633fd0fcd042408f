"""Estimate purchase rates per quantity class and assemble the chain.

Each distinct purchased quantity forms one class; the class rate is the
reciprocal of the mean inter-arrival time of its events. Every state
high enough to serve the quantity gets a downward transition at that
rate, so purchase rates are state-independent by construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean

from .ctmc import Ctmc
from .errors import ShelfwiseError
from .eventlog import ProductSublog
from .units import TimeUnit

DEFAULT_CAPACITY = 100

SKIP_SINGLE_EVENT = "single event"
SKIP_IDENTICAL_TIMESTAMPS = "all timestamps identical"


class UnknownQuantityClass(ShelfwiseError):
    """Requested quantity never occurs in the sublog."""


class CapacityTooSmall(ShelfwiseError):
    """Capacity below the largest observed purchase quantity."""


class NoRates(ShelfwiseError):
    """Every quantity class was skipped; nothing to discover."""


@dataclass(frozen=True)
class QuantityClassStats:
    """Inter-arrival statistics for one purchased-quantity class.

    ``intervals`` are successive timestamp differences in the configured
    unit (zero-length gaps from tied timestamps included). A class is
    skipped when it has a single event or all its timestamps coincide;
    skipped classes carry no mean or rate.
    """

    quantity: int
    count: int
    intervals: tuple[float, ...]
    mean: float | None
    rate: float | None
    skipped_reason: str | None = None

    @property
    def skipped(self) -> bool:
        return self.skipped_reason is not None


@dataclass(frozen=True)
class DiscoveryReport:
    """Per-class statistics plus the configuration used for discovery."""

    product: str
    unit: TimeUnit
    capacity: int
    initial: int
    classes: tuple[QuantityClassStats, ...]
    warnings: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "product": self.product,
            "unit": self.unit.value,
            "capacity": self.capacity,
            "initial": self.initial,
            "classes": [
                {
                    "quantity": c.quantity,
                    "count": c.count,
                    "mean": c.mean,
                    "rate": c.rate,
                    "skippedReason": c.skipped_reason,
                }
                for c in self.classes
            ],
            "warnings": list(self.warnings),
        }


def quantity_classes(sublog: ProductSublog) -> set[int]:
    """Distinct purchased quantities observed in the sublog."""
    return {e.quantity for e in sublog.events}


def interval_stats(sublog: ProductSublog, quantity: int, unit: TimeUnit) -> QuantityClassStats:
    """Inter-arrival statistics for one quantity class.

    Events are taken in timestamp order (sublogs are already sorted,
    ties in stable source order); intervals are successive differences
    converted to ``unit``.
    """
    events = [e for e in sublog.events if e.quantity == quantity]
    if not events:
        raise UnknownQuantityClass(
            f"quantity {quantity} not purchased for product {sublog.product!r}")
    if len(events) == 1:
        return QuantityClassStats(quantity=quantity, count=1, intervals=(),
                                  mean=None, rate=None, skipped_reason=SKIP_SINGLE_EVENT)
    intervals = tuple(
        (b.timestamp - a.timestamp).total_seconds() / unit.seconds
        for a, b in zip(events, events[1:])
    )
    if events[0].timestamp == events[-1].timestamp:
        return QuantityClassStats(quantity=quantity, count=len(events), intervals=intervals,
                                  mean=None, rate=None,
                                  skipped_reason=SKIP_IDENTICAL_TIMESTAMPS)
    mean = fmean(intervals)
    return QuantityClassStats(quantity=quantity, count=len(events), intervals=intervals,
                              mean=mean, rate=1.0 / mean)


def discover_ctmc(
    sublog: ProductSublog,
    capacity: int = DEFAULT_CAPACITY,
    initial: int | None = None,
    unit: TimeUnit = TimeUnit.HOURS,
) -> tuple[Ctmc, DiscoveryReport]:
    """Build the purchasing-behavior chain for one product.

    States are 0..capacity; the initial distribution is one-hot at
    ``initial`` (defaults to a full shelf). For every non-skipped class
    the rate applies from every state that can serve it, leaving state 0
    absorbing until a supply strategy is added.

    Raises :class:`CapacityTooSmall` when the capacity cannot serve the
    largest observed quantity and :class:`NoRates` when every class is
    skipped.
    """
    if initial is None:
        initial = capacity
    lam = Ctmc.one_hot_lambda(capacity, initial)

    classes = sorted(quantity_classes(sublog))
    if classes and classes[-1] > capacity:
        raise CapacityTooSmall(
            f"capacity {capacity} below largest observed quantity {classes[-1]}")

    stats = [interval_stats(sublog, q, unit) for q in classes]
    warnings = tuple(
        f"quantity class {s.quantity} skipped ({s.skipped_reason})"
        for s in stats if s.skipped
    )
    usable = [s for s in stats if not s.skipped]
    if not usable:
        raise NoRates(f"no usable quantity class for product {sublog.product!r}")

    transitions: dict[tuple[int, int], float] = {}
    for s in usable:
        for state in range(s.quantity, capacity + 1):
            transitions[(state, state - s.quantity)] = s.rate
    chain = Ctmc.from_transitions(capacity, lam, transitions, unit)
    report = DiscoveryReport(product=sublog.product, unit=unit, capacity=capacity,
                             initial=initial, classes=tuple(stats), warnings=warnings)
    return chain, report
