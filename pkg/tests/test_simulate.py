"""Trajectory sampling determinism and statistical behavior."""
from __future__ import annotations

import numpy as np
import pytest

from shelfwise import (
    Ctmc,
    SupplyStrategy,
    Trajectory,
    enhance_with_supply,
    empirical_occupancy,
    sample_trajectory,
    steady_state,
)
from shelfwise.simulate import occupancy_of
from test_ctmc import purchasing_chain


class TestSampleTrajectory:
    def test_absorbing_start(self):
        chain = Ctmc.from_transitions(3, Ctmc.one_hot_lambda(3, 2), {})
        traj = sample_trajectory(chain, horizon=50.0, seed=1)
        assert list(traj.states) == [2]
        assert list(traj.times) == [0.0]

    def test_reproducible_bit_identical(self):
        chain = purchasing_chain(20, {1: 1.0, 2: 0.3})
        enhanced = enhance_with_supply(chain, SupplyStrategy(batch=5, rate=0.5))
        a = sample_trajectory(enhanced, horizon=5000.0, seed=99)
        b = sample_trajectory(enhanced, horizon=5000.0, seed=99)
        assert np.array_equal(a.states, b.states)
        assert np.array_equal(a.times, b.times)
        c = sample_trajectory(enhanced, horizon=5000.0, seed=100)
        assert not np.array_equal(a.states, c.states)

    def test_trajectory_invariants(self):
        chain = purchasing_chain(10, {1: 0.8, 3: 0.2})
        enhanced = enhance_with_supply(chain, SupplyStrategy(batch=4, rate=0.6))
        traj = sample_trajectory(enhanced, horizon=2000.0, seed=5)
        assert traj.times[0] == 0.0
        assert np.all(np.diff(traj.times) > 0)
        assert np.all(traj.states[1:] != traj.states[:-1])
        assert traj.times[-1] < traj.horizon
        assert traj.rng == "pcg64"

    def test_pure_death_chain_descends_to_absorption(self):
        chain = purchasing_chain(8, {1: 2.0})
        traj = sample_trajectory(chain, horizon=1e6, seed=3)
        assert list(traj.states) == list(range(8, -1, -1))

    def test_initial_state_follows_lambda(self):
        chain = Ctmc(capacity=1, lam=(0.3, 0.7), rates={}, unit=chain_unit())
        starts = [sample_trajectory(chain, 1.0, seed).states[0] for seed in range(2000)]
        assert np.mean(starts) == pytest.approx(0.7, abs=0.03)

    def test_holding_time_mean_matches_rate(self):
        # two-state flip-flop at rate 2: holding times are Exp(2)
        rate = 2.0
        chain = Ctmc.from_transitions(1, (1.0, 0.0), {(0, 1): rate, (1, 0): rate})
        traj = sample_trajectory(chain, horizon=60_000.0, seed=13)
        holds = np.diff(traj.times)
        assert len(holds) >= 100_000
        assert holds.mean() == pytest.approx(1.0 / rate, rel=0.02)

    def test_jump_chain_frequencies(self):
        # from state 3 the next state follows rates 1.0 : 0.5 : 0.5 over 2, 1, 5
        transitions = {
            (3, 2): 1.0, (3, 1): 0.5, (3, 5): 0.5,
            (2, 3): 2.0, (1, 3): 2.0, (5, 3): 2.0,
        }
        chain = Ctmc.from_transitions(5, Ctmc.one_hot_lambda(5, 3), transitions)
        traj = sample_trajectory(chain, horizon=200_000.0, seed=17)
        from_three = traj.states[:-1] == 3
        nexts = traj.states[1:][from_three]
        n = len(nexts)
        assert n >= 100_000
        expected = {2: 0.5, 1: 0.25, 5: 0.25}
        chi2 = sum(
            (np.sum(nexts == s) - p * n) ** 2 / (p * n) for s, p in expected.items()
        )
        assert chi2 < 13.8  # df=2, p ~ 0.001


def chain_unit():
    from shelfwise import TimeUnit
    return TimeUnit.HOURS


class TestOccupancy:
    def test_symmetric_two_state(self):
        chain = Ctmc.from_transitions(1, (1.0, 0.0), {(0, 1): 1.0, (1, 0): 1.0})
        occ = empirical_occupancy(chain, horizon=50_000.0, seed=23)
        assert occ.fractions == pytest.approx([0.5, 0.5], abs=0.01)

    def test_invariants(self):
        chain = purchasing_chain(15, {1: 1.0})
        enhanced = enhance_with_supply(chain, SupplyStrategy(batch=5, rate=0.4))
        occ = empirical_occupancy(enhanced, horizon=10_000.0, seed=29)
        assert np.all(occ.fractions >= 0)
        assert abs(occ.fractions.sum() - 1.0) <= 1e-12

    def test_degenerate_window_is_one_hot(self):
        traj = Trajectory(states=np.array([4]), times=np.array([0.0]),
                          horizon=10.0, seed=0)
        occ = occupancy_of(traj, n_states=6, burn_in=9.99)
        expected = np.zeros(6)
        expected[4] = 1.0
        assert np.array_equal(occ.fractions, expected)

    def test_burn_in_excludes_prefix(self):
        traj = Trajectory(states=np.array([1, 0]), times=np.array([0.0, 2.0]),
                          horizon=10.0, seed=0)
        occ = occupancy_of(traj, n_states=2, burn_in=4.0)
        assert np.array_equal(occ.fractions, np.array([1.0, 0.0]))
        no_burn = occupancy_of(traj, n_states=2, burn_in=0.0)
        assert no_burn.fractions == pytest.approx([0.8, 0.2], abs=1e-15)

    def test_default_burn_in_is_one_percent(self):
        chain = Ctmc.from_transitions(1, (1.0, 0.0), {(0, 1): 1.0, (1, 0): 1.0})
        occ = empirical_occupancy(chain, horizon=1000.0, seed=31)
        assert occ.burn_in == 10.0

    def test_window_validation(self):
        chain = Ctmc.from_transitions(1, (1.0, 0.0), {(0, 1): 1.0, (1, 0): 1.0})
        with pytest.raises(ValueError):
            empirical_occupancy(chain, horizon=10.0, seed=1, burn_in=10.0)
        with pytest.raises(ValueError):
            sample_trajectory(chain, horizon=0.0, seed=1)

    def test_ergodic_agreement_improves_with_horizon(self):
        chain = purchasing_chain(10, {1: 1.0, 2: 0.2})
        enhanced = enhance_with_supply(chain, SupplyStrategy(batch=3, rate=0.7))
        pi = steady_state(enhanced).pi
        distances = [
            float(np.abs(empirical_occupancy(enhanced, horizon=h, seed=37).fractions - pi).sum())
            for h in (1e3, 1e4, 1e5)
        ]
        assert distances[2] <= distances[0]
        assert distances[2] <= 0.02
