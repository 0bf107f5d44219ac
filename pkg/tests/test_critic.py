"""Critic tests, including convergence against a value-iteration oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from holorl.critic import EligibilityTrace, ValueNetwork, logmod, td_error
from holorl.hrr import DimensionError, SymbolLedger


class TestValue:
    def test_zero_weights_give_bias(self):
        net = ValueNetwork(np.zeros(16))
        u = np.random.default_rng(0).normal(size=16)
        assert net.value(u) == 1.0

    def test_zero_input_gives_bias(self):
        net = ValueNetwork(np.random.default_rng(0).normal(size=16))
        assert net.value(np.zeros(16)) == 1.0

    def test_scaled_identity(self):
        weights = np.zeros(8)
        weights[0] = 2.0
        net = ValueNetwork(weights)
        u = np.zeros(8)
        u[0] = 1.0
        assert net.value(u) == 3.0

    def test_dimension_mismatch_rejected(self):
        net = ValueNetwork(np.zeros(8))
        with pytest.raises(DimensionError):
            net.value(np.zeros(9))


class TestLogmod:
    def test_anchor_points(self):
        assert logmod(0.0) == 0.0
        assert logmod(math.e - 1) == pytest.approx(1.0)
        assert logmod(-(math.e - 1)) == pytest.approx(-1.0)

    @given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
    def test_odd_and_contractive(self, x):
        assert logmod(-x) == pytest.approx(-logmod(x), abs=1e-12)
        assert abs(logmod(x)) <= abs(x) + 1e-12

    @given(
        st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
        st.floats(min_value=1e-9, max_value=1e6, allow_nan=False),
    )
    def test_monotone_nondecreasing(self, x, gap):
        assert logmod(x + gap) >= logmod(x)

    def test_strictly_increasing_at_representative_points(self):
        points = [-100.0, -1.0, -0.1, 0.0, 0.1, 1.0, 100.0]
        values = [logmod(p) for p in points]
        assert values == sorted(values)
        assert len(set(values)) == len(values)


class TestTdError:
    def test_optimistic_fresh_network(self):
        assert td_error(-1.0, 0.9, 1.0, 1.0, terminal=False) == pytest.approx(-1.1)

    def test_converged_goal(self):
        assert td_error(0.0, 0.9, 0.0, 0.0, terminal=True) == 0.0

    def test_fixed_point(self):
        assert td_error(0.0, 0.7, 0.0, 0.0, terminal=False) == 0.0

    def test_bootstrap_sign_escape_hatch(self):
        plus = td_error(-1.0, 0.5, 2.0, 0.0, terminal=False, bootstrap_sign=1.0)
        minus = td_error(-1.0, 0.5, 2.0, 0.0, terminal=False, bootstrap_sign=-1.0)
        assert plus == pytest.approx(0.0)
        assert minus == pytest.approx(-2.0)


class TestTrace:
    def test_lambda_zero_replaces(self):
        trace = EligibilityTrace(4, 0.0)
        trace.values[:] = 9.0
        u = np.array([1.0, 2.0, 3.0, 4.0])
        trace.update(u)
        np.testing.assert_array_equal(trace.values, u)

    def test_first_update_after_clear_is_exact(self):
        trace = EligibilityTrace(4, 0.01)
        trace.values[:] = 7.0
        trace.clear()
        u = np.array([1.0, -2.0, 0.5, 0.0])
        trace.update(u)
        np.testing.assert_array_equal(trace.values, u)

    def test_lambda_one_accumulates(self):
        trace = EligibilityTrace(3, 1.0)
        u1 = np.array([1.0, 0.0, 0.0])
        u2 = np.array([0.0, 1.0, 0.0])
        trace.update(u1)
        trace.update(u2)
        np.testing.assert_array_equal(trace.values, u1 + u2)

    def test_mismatched_input_rejected(self):
        trace = EligibilityTrace(3, 0.0)
        with pytest.raises(DimensionError):
            trace.update(np.zeros(4))


class TestWeightUpdate:
    def test_zero_delta_is_noop(self):
        net = ValueNetwork(np.ones(4))
        trace = EligibilityTrace(4, 0.0)
        trace.update(np.ones(4))
        net.apply_update(0.1, 0.0, trace)
        np.testing.assert_array_equal(net.weights, np.ones(4))

    def test_zero_alpha_is_noop(self):
        net = ValueNetwork(np.ones(4))
        trace = EligibilityTrace(4, 0.0)
        trace.update(np.ones(4))
        net.apply_update(0.0, 5.0, trace)
        np.testing.assert_array_equal(net.weights, np.ones(4))

    def test_unit_norm_step_size(self):
        n = 64
        u = np.random.default_rng(0).normal(size=n)
        u /= np.linalg.norm(u)
        net = ValueNetwork(np.zeros(n))
        trace = EligibilityTrace(n, 0.0)
        trace.update(u)
        before = net.value(u)
        net.apply_update(0.1, math.e - 1, trace)
        assert net.value(u) - before == pytest.approx(0.1, abs=1e-12)

    def test_values_stay_finite_under_many_updates(self):
        rng = np.random.default_rng(3)
        n = 32
        net = ValueNetwork.with_random_weights(n, rng)
        trace = EligibilityTrace(n, 0.0)
        for _ in range(2000):
            u = rng.normal(0, 1 / np.sqrt(n), size=n)
            trace.update(u)
            net.apply_update(0.5, rng.normal(0, 10), trace)
        assert np.all(np.isfinite(net.weights))


def value_iteration(size, goal, gamma, tol=1e-12):
    """Tabular oracle on the cyclic chain: reward -1 for entering a non-goal
    cell, 0 for entering the goal (absorbing)."""
    values = np.zeros(size)
    while True:
        new = np.zeros(size)
        for s in range(size):
            if s == goal:
                continue
            best = -np.inf
            for nxt in ((s - 1) % size, (s + 1) % size):
                if nxt == goal:
                    best = max(best, 0.0)
                else:
                    best = max(best, -1.0 + gamma * values[nxt])
            new[s] = best
        if np.max(np.abs(new - values)) < tol:
            return new
        values = new


class TestChainConvergence:
    def test_td_matches_value_iteration_on_five_cycle(self):
        size, goal, gamma = 5, 0, 0.7
        oracle = value_iteration(size, goal, gamma)

        rng = np.random.default_rng(123)
        n = 256
        ledger = SymbolLedger(n, rng)
        net = ValueNetwork.with_random_weights(n, rng)
        trace = EligibilityTrace(n, 0.0)
        states = [ledger.atom(f"s{i}") for i in range(size)]

        def shortest_move(s):
            left, right = (s - 1) % size, (s + 1) % size
            d = lambda x: min((x - goal) % size, (goal - x) % size)
            return left if d(left) <= d(right) else right

        for _ in range(2000):
            s = int(rng.integers(size))
            while s != goal:
                nxt = shortest_move(s)
                if nxt == goal:
                    delta = td_error(0.0, gamma, 0.0, net.value(states[s]), terminal=True)
                else:
                    delta = td_error(
                        -1.0, gamma, net.value(states[nxt]), net.value(states[s]),
                        terminal=False,
                    )
                trace.update(states[s])
                net.apply_update(0.1, delta, trace)
                s = nxt

        for s in range(size):
            if s == goal:
                continue
            assert net.value(states[s]) == pytest.approx(oracle[s], abs=0.05)
