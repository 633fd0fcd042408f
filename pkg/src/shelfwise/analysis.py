"""Steady-state solving and supply what-if metrics.

The stationary distribution solves pi Q = 0 with sum(pi) = 1. One
balance equation is replaced by the normalization row and the dense
system is solved by pivoted LU; capacities up to 2000 states are
supported, which keeps the solve exact and instant for realistic shelf
sizes. The initial distribution plays no role here: on an irreducible
chain the stationary distribution is unique regardless of the start.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ctmc import Ctmc, IrreducibilityReport, SupplyStrategy, enhance_with_supply, is_irreducible
from .discovery import discover_ctmc, quantity_classes
from .errors import ShelfwiseError
from .eventlog import ProductSublog
from .units import TimeUnit

MAX_DIRECT_SOLVE_STATES = 2001  # dense LU beyond this would need an iterative method
RESIDUAL_TOL = 1e-8
CLAMP_TOL = 1e-12


class NotIrreducible(ShelfwiseError):
    """Steady state undefined: the chain is not strongly connected."""

    def __init__(self, report: IrreducibilityReport):
        sizes = sorted((len(c) for c in report.components), reverse=True)
        super().__init__(
            f"chain is reducible: {len(report.components)} strongly connected "
            f"components of sizes {sizes}, e.g. no path {report.witness[0]} -> {report.witness[1]}")
        self.report = report


class SolverFailure(ShelfwiseError):
    """The balance equations could not be solved within tolerance."""


@dataclass(frozen=True)
class SteadyState:
    """Stationary probabilities plus solver diagnostics.

    ``residual`` is the max-norm of pi Q after clamping and
    renormalization; it is guaranteed <= 1e-8 for returned values.
    """

    pi: np.ndarray
    residual: float
    diagnostics: dict

    def __post_init__(self):
        self.pi.setflags(write=False)


@dataclass(frozen=True)
class WhatIfResult:
    """Outcome of analyzing one supply strategy on one product chain.

    For reducible configurations ``irreducible`` is False and the steady
    state and all metrics are absent.
    """

    strategy: SupplyStrategy
    capacity: int
    threshold: int
    max_quantity: int
    unit: TimeUnit
    irreducible: bool
    steady: SteadyState | None = None
    expected_quantity: float | None = None
    undersupply: float | None = None
    surplus: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "rate": self.strategy.rate,
            "batch": self.strategy.batch,
            "capacity": self.capacity,
            "threshold": self.threshold,
            "maxQuantity": self.max_quantity,
            "unit": self.unit.value,
            "pi": None if self.steady is None else [float(p) for p in self.steady.pi],
            "expectedQuantity": self.expected_quantity,
            "undersupplyProbability": self.undersupply,
            "expectedSurplus": self.surplus,
            "irreducible": self.irreducible,
            "residual": None if self.steady is None else self.steady.residual,
        }


def steady_state(chain: Ctmc) -> SteadyState:
    """Solve the global balance equations for an irreducible chain.

    Raises :class:`NotIrreducible` (with the component partition
    attached) for reducible chains and :class:`SolverFailure` when the
    solve degenerates beyond tolerance.
    """
    report = is_irreducible(chain)
    if not report.irreducible:
        raise NotIrreducible(report)
    n = chain.n_states
    if n > MAX_DIRECT_SOLVE_STATES:
        raise ValueError(
            f"{n} states exceed the direct-solve limit of {MAX_DIRECT_SOLVE_STATES}")

    # pi Q = 0 transposed, with the last equation replaced by sum(pi) = 1.
    q = chain.dense()
    a = q.T.copy()
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SolverFailure(f"balance system is singular: {exc}") from None

    worst = float(pi.min())
    if worst < -CLAMP_TOL:
        raise SolverFailure(
            f"solution has negative probability {worst!r} beyond tolerance {CLAMP_TOL}")
    clamped = int(np.count_nonzero(pi < 0))
    pi = np.where(pi < 0, 0.0, pi)
    pi = pi / pi.sum()

    residual = float(np.abs(pi @ q).max())
    if residual > RESIDUAL_TOL:
        raise SolverFailure(f"residual {residual!r} exceeds tolerance {RESIDUAL_TOL}")
    diagnostics = {"method": "dense-lu", "states": n, "clamped": clamped}
    return SteadyState(pi=pi, residual=residual, diagnostics=diagnostics)


def expected_quantity(ss: SteadyState) -> float:
    """Expected number of units on the shelf: sum of i * pi_i."""
    return float(np.arange(len(ss.pi)) @ ss.pi)


def undersupply_probability(ss: SteadyState, max_quantity: int) -> float:
    """Probability of holding fewer units than the largest purchase.

    Sums pi over states 0..max_quantity-1, the states from which some
    observed purchase cannot be served.
    """
    k = len(ss.pi) - 1
    if not 1 <= max_quantity <= k:
        raise ValueError(f"max_quantity must be in 1..{k}, got {max_quantity}")
    return float(ss.pi[:max_quantity].sum())


def expected_surplus(ss: SteadyState, threshold: int) -> float:
    """Expected units in excess of ``threshold``: sum of (i - T) * pi_i over i > T."""
    k = len(ss.pi) - 1
    if not 0 <= threshold <= k:
        raise ValueError(f"threshold must be in 0..{k}, got {threshold}")
    states = np.arange(len(ss.pi))
    excess = np.clip(states - threshold, 0, None)
    return float(excess @ ss.pi)


def evaluate_strategy(
    chain: Ctmc,
    strategy: SupplyStrategy,
    threshold: int,
    max_quantity: int,
) -> WhatIfResult:
    """Enhance a purchasing chain with one strategy and compute all metrics.

    Raises :class:`NotIrreducible` when the enhanced chain has
    unreachable states.
    """
    enhanced = enhance_with_supply(chain, strategy)
    ss = steady_state(enhanced)
    return WhatIfResult(
        strategy=strategy,
        capacity=chain.capacity,
        threshold=threshold,
        max_quantity=max_quantity,
        unit=chain.unit,
        irreducible=True,
        steady=ss,
        expected_quantity=expected_quantity(ss),
        undersupply=undersupply_probability(ss, max_quantity),
        surplus=expected_surplus(ss, threshold),
    )


def what_if(
    sublog: ProductSublog,
    capacity: int,
    batch: int,
    rate: float,
    threshold: int,
    max_quantity: int | None = None,
    unit: TimeUnit = TimeUnit.HOURS,
    initial: int | None = None,
) -> WhatIfResult:
    """Full pipeline for a single supply rate: discover, enhance, solve.

    Raises :class:`NotIrreducible` for reducible configurations; use
    :func:`what_if_sweep` to get flagged results instead.
    """
    if rate <= 0:
        raise ValueError(f"supply rate must be > 0, got {rate}")
    chain, _ = discover_ctmc(sublog, capacity, initial, unit)
    if max_quantity is None:
        max_quantity = max(quantity_classes(sublog))
    return evaluate_strategy(chain, SupplyStrategy(batch=batch, rate=rate),
                             threshold, max_quantity)


def what_if_sweep(
    sublog: ProductSublog,
    capacity: int,
    batch: int,
    rates: list[float],
    threshold: int,
    max_quantity: int | None = None,
    unit: TimeUnit = TimeUnit.HOURS,
    initial: int | None = None,
) -> list[WhatIfResult]:
    """Evaluate a list of supply rates; results keep the input order.

    Discovery runs once; each rate is enhanced and solved independently.
    Reducible configurations yield results flagged ``irreducible=False``
    with metrics absent rather than raising.
    """
    if not rates:
        raise ValueError("rates must be non-empty")
    for rate in rates:
        if rate <= 0:
            raise ValueError(f"supply rates must be > 0, got {rate}")
    chain, _ = discover_ctmc(sublog, capacity, initial, unit)
    if max_quantity is None:
        max_quantity = max(quantity_classes(sublog))

    results = []
    for rate in rates:
        strategy = SupplyStrategy(batch=batch, rate=rate)
        try:
            results.append(evaluate_strategy(chain, strategy, threshold, max_quantity))
        except NotIrreducible:
            results.append(WhatIfResult(
                strategy=strategy, capacity=capacity, threshold=threshold,
                max_quantity=max_quantity, unit=unit, irreducible=False))
    return results
