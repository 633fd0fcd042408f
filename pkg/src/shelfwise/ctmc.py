"""Finite-state continuous-time Markov chains over shelf quantities.

A chain has states 0..capacity, an initial distribution and a sparse
rate matrix stored as a map (row, column) -> rate. Off-diagonal entries
are non-negative transition rates; each diagonal entry is the negated
row sum, stored explicitly. Zero entries are never stored.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import ShelfwiseError
from .units import TimeUnit

ROW_SUM_TOL = 1e-12


class BatchExceedsCapacity(ShelfwiseError):
    """Supply batch larger than the shelf capacity."""


@dataclass(frozen=True)
class Ctmc:
    """Generator over states 0..capacity with a tagged time unit.

    Instances are immutable value objects; every operation returns a new
    chain. ``rates`` holds off-diagonal entries plus explicit diagonals;
    treat it as read-only.
    """

    capacity: int
    lam: tuple[float, ...]
    rates: dict[tuple[int, int], float]
    unit: TimeUnit = TimeUnit.HOURS

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {self.capacity}")
        if len(self.lam) != self.capacity + 1:
            raise ValueError(f"lambda must have {self.capacity + 1} entries, got {len(self.lam)}")
        for i, j in self.rates:
            if not (0 <= i <= self.capacity and 0 <= j <= self.capacity):
                raise ValueError(f"rate entry ({i}, {j}) outside states 0..{self.capacity}")

    @property
    def n_states(self) -> int:
        return self.capacity + 1

    @classmethod
    def from_transitions(
        cls,
        capacity: int,
        lam: Iterable[float],
        transitions: Mapping[tuple[int, int], float],
        unit: TimeUnit = TimeUnit.HOURS,
    ) -> "Ctmc":
        """Assemble a chain from off-diagonal rates; diagonals are derived.

        Zero-rate transitions are dropped so the stored matrix stays
        strictly sparse.
        """
        rates: dict[tuple[int, int], float] = {}
        exit_rates: dict[int, float] = {}
        for (i, j), rate in transitions.items():
            if i == j:
                raise ValueError(f"self-loop ({i}, {j}) not allowed; diagonals are derived")
            if rate < 0:
                raise ValueError(f"negative rate {rate} at ({i}, {j})")
            if rate == 0.0:
                continue
            rates[(i, j)] = rates.get((i, j), 0.0) + rate
            exit_rates[i] = exit_rates.get(i, 0.0) + rate
        for i, total in exit_rates.items():
            if total != 0.0:
                rates[(i, i)] = -total
        return cls(capacity=capacity, lam=tuple(lam), rates=rates, unit=unit)

    @classmethod
    def one_hot_lambda(cls, capacity: int, initial: int) -> tuple[float, ...]:
        if not 0 <= initial <= capacity:
            raise ValueError(f"initial state {initial} outside 0..{capacity}")
        return tuple(1.0 if i == initial else 0.0 for i in range(capacity + 1))

    def exit_rate(self, state: int) -> float:
        """Total outgoing rate from ``state`` (negated diagonal)."""
        return -self.rates.get((state, state), 0.0)

    def off_diagonal(self) -> dict[tuple[int, int], float]:
        """Copy of the off-diagonal entries only."""
        return {(i, j): r for (i, j), r in self.rates.items() if i != j}

    def dense(self) -> np.ndarray:
        """Materialize the full (k+1) x (k+1) rate matrix."""
        q = np.zeros((self.n_states, self.n_states))
        for (i, j), rate in self.rates.items():
            q[i, j] = rate
        return q

    def to_json_dict(self) -> dict:
        entries = sorted((i, j, r) for (i, j), r in self.rates.items() if i != j)
        return {
            "capacity": self.capacity,
            "unit": self.unit.value,
            "lambda": list(self.lam),
            "entries": [[i, j, r] for i, j, r in entries],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Ctmc":
        transitions = {(int(i), int(j)): float(r) for i, j, r in data["entries"]}
        return cls.from_transitions(
            capacity=int(data["capacity"]),
            lam=[float(p) for p in data["lambda"]],
            transitions=transitions,
            unit=TimeUnit.parse(data["unit"]),
        )


@dataclass(frozen=True)
class SupplyStrategy:
    """Restocking policy: batches of ``batch`` units at exponential rate ``rate``."""

    batch: int
    rate: float

    def __post_init__(self):
        if self.batch < 1:
            raise ValueError(f"batch size must be >= 1, got {self.batch}")
        if self.rate < 0:
            raise ValueError(f"supply rate must be >= 0, got {self.rate}")


@dataclass(frozen=True)
class IrreducibilityReport:
    """Strong-connectivity verdict over the positive-rate digraph.

    ``components`` partitions the states; ``witness`` is a pair (i, j)
    with no positive-rate path from i to j when the chain is reducible.
    """

    irreducible: bool
    components: tuple[tuple[int, ...], ...]
    witness: tuple[int, int] | None = None


def enhance_with_supply(chain: Ctmc, strategy: SupplyStrategy) -> Ctmc:
    """Add backward supply transitions of ``strategy.batch`` units.

    Every state i <= capacity - batch gains rate ``strategy.rate`` towards
    i + batch; states closer to capacity receive no supply transition.
    The strategy rate is interpreted per the chain's time unit. The input
    chain is not modified; repeated enhancement is additive.
    """
    if strategy.batch > chain.capacity:
        raise BatchExceedsCapacity(
            f"batch {strategy.batch} exceeds capacity {chain.capacity}")
    if strategy.rate == 0.0:
        return chain
    off = chain.off_diagonal()
    for i in range(chain.capacity - strategy.batch + 1):
        key = (i, i + strategy.batch)
        off[key] = off.get(key, 0.0) + strategy.rate
    return Ctmc.from_transitions(chain.capacity, chain.lam, off, chain.unit)


def is_irreducible(chain: Ctmc) -> IrreducibilityReport:
    """Check strong connectivity of the positive-rate transition digraph."""
    n = chain.n_states
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for (i, j), rate in chain.rates.items():
        if i != j and rate > 0:
            adjacency[i].append(j)
    components = _tarjan_scc(n, adjacency)
    if len(components) == 1:
        return IrreducibilityReport(irreducible=True, components=(components[0],))
    # Tarjan emits components in reverse topological order of the
    # condensation, so the first one cannot reach the last one.
    witness = (components[0][0], components[-1][0])
    ordered = tuple(sorted(components, key=lambda c: c[0]))
    return IrreducibilityReport(irreducible=False, components=ordered, witness=witness)


def _tarjan_scc(n: int, adjacency: list[list[int]]) -> list[tuple[int, ...]]:
    """Iterative Tarjan; linear in states + positive-rate transitions."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[tuple[int, ...]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, edge = work[-1]
            if edge == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            neighbors = adjacency[v]
            for k in range(edge, len(neighbors)):
                w = neighbors[k]
                if index[w] == -1:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == v:
                        break
                components.append(tuple(sorted(component)))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return components


def validate(chain: Ctmc) -> list[str]:
    """Check generator invariants; returns one message per violation."""
    violations: list[str] = []
    lam_sum = 0.0
    for i, p in enumerate(chain.lam):
        lam_sum += p
        if p < 0:
            violations.append(f"lambda[{i}] = {p} is negative")
    if abs(lam_sum - 1.0) > ROW_SUM_TOL:
        violations.append(f"lambda sums to {lam_sum!r}, expected 1 within {ROW_SUM_TOL}")

    row_sums: dict[int, float] = {}
    for (i, j), rate in chain.rates.items():
        if rate == 0.0:
            violations.append(f"explicit zero entry stored at ({i}, {j})")
        if i != j and rate < 0:
            violations.append(f"negative off-diagonal entry q[{i},{j}] = {rate}")
        row_sums[i] = row_sums.get(i, 0.0) + rate
    for i in sorted(row_sums):
        if abs(row_sums[i]) > ROW_SUM_TOL:
            violations.append(f"row {i} sums to {row_sums[i]!r}, exceeds tolerance {ROW_SUM_TOL}")
    return violations
