"""Vector algebra tests, checked against direct-definition oracles."""

import numpy as np
import pytest

from holorl.hrr import (
    DimensionError,
    SymbolLedger,
    convolve,
    dot,
    grow_dimension,
    identity_hrr,
    random_hrr,
    stack_and_solve,
)


def convolve_direct(a, b):
    """O(n^2) circular convolution straight from the definition."""
    n = len(a)
    out = np.zeros(n)
    for j in range(n):
        for k in range(n):
            out[j] += a[k] * b[(j - k) % n]
    return out


class TestRandomHrr:
    def test_std_matches_length_6144(self):
        vec = random_hrr(6144, np.random.default_rng(7))
        expected = 1.0 / np.sqrt(6144)
        assert 0.8 * expected <= vec.std() <= 1.2 * expected
        assert vec.shape == (6144,)

    def test_length_one_is_standard_normal(self):
        rng = np.random.default_rng(11)
        draws = np.array([random_hrr(1, rng)[0] for _ in range(10_000)])
        assert 0.9 <= draws.std() <= 1.1
        assert abs(draws.mean()) < 0.05

    def test_seeded_draws_are_identical(self):
        a = random_hrr(128, np.random.default_rng(42))
        b = random_hrr(128, np.random.default_rng(42))
        np.testing.assert_array_equal(a, b)

    def test_zero_length_rejected(self):
        with pytest.raises(DimensionError):
            random_hrr(0, np.random.default_rng(0))


class TestIdentity:
    def test_delta_vector(self):
        np.testing.assert_array_equal(identity_hrr(4), [1.0, 0.0, 0.0, 0.0])

    def test_identity_element(self):
        rng = np.random.default_rng(3)
        for n in (4, 64, 1000):
            x = random_hrr(n, rng)
            assert np.max(np.abs(convolve(identity_hrr(n), x) - x)) < 1e-12

    def test_unit_self_dot(self):
        assert dot(identity_hrr(16), identity_hrr(16)) == 1.0

    def test_zero_length_rejected(self):
        with pytest.raises(DimensionError):
            identity_hrr(0)


class TestConvolve:
    def test_identity_case(self):
        x = np.array([2.0, -1.0, 0.5])
        np.testing.assert_allclose(convolve([1, 0, 0], x), x, atol=1e-12)

    def test_cyclic_shift(self):
        x = np.array([5.0, 6.0, 7.0])
        np.testing.assert_allclose(convolve([0, 1, 0], x), [7.0, 5.0, 6.0], atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3, 8, 64, 257])
    def test_fft_matches_direct_definition(self, n):
        rng = np.random.default_rng(n)
        a = random_hrr(n, rng)
        b = random_hrr(n, rng)
        fast = convolve(a, b)
        assert fast.shape == (n,)
        assert np.max(np.abs(fast - convolve_direct(a, b))) < 1e-9

    def test_commutative_and_associative(self):
        rng = np.random.default_rng(5)
        a, b, c = (random_hrr(128, rng) for _ in range(3))
        assert np.max(np.abs(convolve(a, b) - convolve(b, a))) < 1e-9
        left = convolve(convolve(a, b), c)
        right = convolve(a, convolve(b, c))
        assert np.max(np.abs(left - right)) < 1e-9

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(DimensionError):
            convolve([1.0, 0.0], [1.0, 0.0, 0.0])


class TestDot:
    def test_zero_vector(self):
        assert dot(np.zeros(8), random_hrr(8, np.random.default_rng(0))) == 0.0

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(DimensionError):
            dot([1.0], [1.0, 2.0])

    def test_near_orthogonality_statistics(self):
        n = 1024
        rng = np.random.default_rng(2024)
        dots = []
        for _ in range(1000):
            dots.append(dot(random_hrr(n, rng), random_hrr(n, rng)))
        dots = np.array(dots)
        bound = 4.0 / np.sqrt(n)
        assert np.mean(np.abs(dots) < bound) >= 0.99
        assert abs(dots.mean()) < 0.01
        expected_std = 1.0 / np.sqrt(n)
        assert 0.8 * expected_std <= dots.std() <= 1.2 * expected_std


class TestGrowDimension:
    @pytest.mark.parametrize(
        "n, count, expected",
        [(6144, 2, 12288), (12288, 3, 18432), (25600, 2, 51200)],
    )
    def test_table_values(self, n, count, expected):
        assert grow_dimension(n, count) == expected

    def test_growth_is_linear_in_context_count(self):
        n0 = 6144
        n = n0
        for k in range(2, 7):
            n = grow_dimension(n, k)
            assert n == k * n0

    def test_small_count_rejected(self):
        with pytest.raises(ValueError):
            grow_dimension(100, 1)


class TestStackAndSolve:
    def test_single_identity_row(self):
        w = stack_and_solve(identity_hrr(4)[None, :], np.array([3.0]))
        np.testing.assert_allclose(w, [3.0, 0.0, 0.0, 0.0], atol=1e-12)

    def test_homogeneous_system_gives_zero(self):
        rng = np.random.default_rng(1)
        rows = np.stack([random_hrr(16, rng) for _ in range(4)])
        w = stack_and_solve(rows, np.zeros(4))
        np.testing.assert_allclose(w, np.zeros(16), atol=1e-12)

    def test_underdetermined_fit_is_exact(self):
        rng = np.random.default_rng(9)
        rows = np.stack([random_hrr(64, rng) for _ in range(8)])
        values = rng.normal(size=8)
        w = stack_and_solve(rows, values)
        assert np.max(np.abs(rows @ w - values)) < 1e-6

    def test_empty_inputs_rejected(self):
        with pytest.raises(ValueError):
            stack_and_solve(np.zeros((0, 4)), np.zeros(0))


class TestSymbolLedger:
    def test_identity_symbol_reserved(self):
        ledger = SymbolLedger(8, np.random.default_rng(0))
        np.testing.assert_array_equal(ledger.atom("I"), identity_hrr(8))
        np.testing.assert_array_equal(ledger.encode(("I",)), identity_hrr(8))

    def test_identity_elimination_is_exact(self):
        ledger = SymbolLedger(64, np.random.default_rng(0))
        compound = ledger.encode(("s3", "I", "I", "atr0", "I"))
        direct = convolve(ledger.atom("s3"), ledger.atom("atr0"))
        np.testing.assert_array_equal(compound, direct)

    def test_memoization_returns_identical_array(self):
        ledger = SymbolLedger(32, np.random.default_rng(0))
        first = ledger.encode(("a", "b"))
        atoms_before = len(ledger.atoms)
        second = ledger.encode(("a", "b"))
        assert first is second
        assert len(ledger.atoms) == atoms_before

    def test_atoms_have_ledger_dimension(self):
        ledger = SymbolLedger(48, np.random.default_rng(0))
        assert ledger.atom("x").shape == (48,)
        assert ledger.encode(("x", "y", "z")).shape == (48,)

    def test_stored_vectors_are_read_only(self):
        ledger = SymbolLedger(16, np.random.default_rng(0))
        with pytest.raises(ValueError):
            ledger.atom("x")[0] = 5.0

    def test_empty_tuple_rejected(self):
        ledger = SymbolLedger(16, np.random.default_rng(0))
        with pytest.raises(ValueError):
            ledger.encode(())
