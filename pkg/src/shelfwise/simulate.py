"""Stochastic trajectory sampling and empirical state occupancy.

Sampling uses the jump-chain formulation: in each state one exponential
holding time at the total exit rate, then a categorical draw over the
outgoing transitions. This is equivalent to racing independent
exponential clocks per transition (minimum of exponentials) and needs
two random draws per jump instead of one per transition.

Randomness comes from numpy's PCG64 generator seeded with the caller's
64-bit seed; one trajectory consumes one stream, so identical
(chain, horizon, seed) inputs reproduce bit-identical output. Batch runs
should derive per-trajectory seeds (e.g. seed + index).
"""
from __future__ import annotations

from array import array
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .ctmc import Ctmc

RNG_NAME = "pcg64"

_BLOCK = 1 << 14


@dataclass(frozen=True)
class Trajectory:
    """Piecewise-constant path: state ``states[n]`` entered at ``times[n]``.

    The first state is drawn from the chain's initial distribution at
    time 0. An absorbed path simply has no further entries; the state is
    held until ``horizon``.
    """

    states: np.ndarray
    times: np.ndarray
    horizon: float
    seed: int
    rng: str = RNG_NAME

    def __post_init__(self):
        self.states.setflags(write=False)
        self.times.setflags(write=False)

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class Occupancy:
    """Time-weighted fraction of the observation window spent per state."""

    fractions: np.ndarray
    horizon: float
    burn_in: float
    seed: int
    rng: str = RNG_NAME

    def __post_init__(self):
        self.fractions.setflags(write=False)


def sample_trajectory(chain: Ctmc, horizon: float, seed: int) -> Trajectory:
    """Sample one path of the chain over [0, horizon].

    The chain need not be irreducible; a state with zero exit rate
    absorbs the path until the horizon.
    """
    if horizon <= 0:
        raise ValueError(f"horizon must be > 0, got {horizon}")
    rng = np.random.default_rng(seed)

    lam_cum = np.cumsum(chain.lam)
    state = int(np.searchsorted(lam_cum, rng.random() * lam_cum[-1], side="right"))
    state = min(state, chain.capacity)

    # Per-state jump tables: cumulative outgoing rates and target states.
    n = chain.n_states
    cum_rates: list[list[float]] = [[] for _ in range(n)]
    targets: list[list[int]] = [[] for _ in range(n)]
    for (i, j) in sorted(chain.rates):
        if i != j:
            row = cum_rates[i]
            row.append((row[-1] if row else 0.0) + chain.rates[(i, j)])
            targets[i].append(j)
    exit_rates = [row[-1] if row else 0.0 for row in cum_rates]

    states_out = array("q", [state])
    times_out = array("d", [0.0])
    t = 0.0
    exp_pool = rng.standard_exponential(_BLOCK)
    uni_pool = rng.random(_BLOCK)
    pe = pu = 0
    while True:
        total = exit_rates[state]
        if total == 0.0:
            break
        if pe == _BLOCK:
            exp_pool = rng.standard_exponential(_BLOCK)
            pe = 0
        t_next = t + exp_pool[pe] / total
        pe += 1
        if t_next >= horizon:
            break
        if pu == _BLOCK:
            uni_pool = rng.random(_BLOCK)
            pu = 0
        u = uni_pool[pu]
        pu += 1
        state = targets[state][bisect_right(cum_rates[state], u * total)]
        t = t_next
        states_out.append(state)
        times_out.append(t)

    return Trajectory(
        states=np.frombuffer(states_out, dtype=np.int64).copy(),
        times=np.frombuffer(times_out, dtype=np.float64).copy(),
        horizon=float(horizon),
        seed=int(seed),
    )


def occupancy_of(trajectory: Trajectory, n_states: int, burn_in: float = 0.0) -> Occupancy:
    """Time-weighted occupancy of a trajectory over (burn_in, horizon]."""
    if not 0 <= burn_in < trajectory.horizon:
        raise ValueError(f"burn_in must satisfy 0 <= burn_in < horizon, got {burn_in}")
    starts = trajectory.times
    ends = np.append(trajectory.times[1:], trajectory.horizon)
    dwell = np.clip(ends, burn_in, trajectory.horizon) - np.clip(starts, burn_in, trajectory.horizon)
    acc = np.zeros(n_states)
    np.add.at(acc, trajectory.states, dwell)
    fractions = acc / acc.sum()
    return Occupancy(fractions=fractions, horizon=trajectory.horizon,
                     burn_in=float(burn_in), seed=trajectory.seed, rng=trajectory.rng)


def empirical_occupancy(
    chain: Ctmc,
    horizon: float,
    seed: int,
    burn_in: float | None = None,
) -> Occupancy:
    """Sample a trajectory and return its occupancy after a burn-in.

    ``burn_in`` defaults to 1% of the horizon, enough to wash out the
    initial state cheaply; for irreducible chains the dependence on the
    start vanishes anyway as the horizon grows.
    """
    if burn_in is None:
        burn_in = 0.01 * horizon
    if not horizon > burn_in >= 0:
        raise ValueError(f"need horizon > burn_in >= 0, got {horizon}, {burn_in}")
    trajectory = sample_trajectory(chain, horizon, seed)
    return occupancy_of(trajectory, chain.n_states, burn_in)
