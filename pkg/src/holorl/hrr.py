"""Real-valued holographic vector algebra.

Symbols live in a fixed-length real vector space. Fresh symbols are drawn
i.i.d. from Normal(0, 1/sqrt(n)), which makes independently drawn vectors
nearly orthogonal, and binding is circular convolution (computed through the
real FFT). A compound built by binding keeps the length of its constituents,
so a single linear readout can score arbitrarily structured compounds, and
near-orthogonality makes that readout behave like a lookup table.

A :class:`SymbolLedger` owns one such space: it materializes named symbols on
first use and memoizes every compound it is asked to build, keyed by the
symbol tuple. The reserved name ``"I"`` is the binding identity and drops out
of compounds algebraically.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

IDENTITY_SYMBOL = "I"

#: Relative singular-value cutoff for the minimum-norm least-squares solve.
SOLVE_RCOND = 1e-10


class DimensionError(ValueError):
    """Raised for non-positive vector lengths or mismatched lengths."""


def _as_vector(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"{name} must be a 1-D vector of length >= 1")
    return arr


def random_hrr(n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a fresh symbol vector: n i.i.d. samples of Normal(0, 1/sqrt(n))."""
    if n < 1:
        raise DimensionError(f"vector length must be >= 1, got {n}")
    return rng.normal(0.0, 1.0 / math.sqrt(n), size=n)


def identity_hrr(n: int) -> np.ndarray:
    """The binding identity: the delta vector (1, 0, ..., 0) of length n."""
    if n < 1:
        raise DimensionError(f"vector length must be >= 1, got {n}")
    out = np.zeros(n, dtype=np.float64)
    out[0] = 1.0
    return out


def convolve(a, b) -> np.ndarray:
    """Bind two equal-length vectors by circular convolution.

    The result c satisfies c[j] = sum_k a[k] * b[(j - k) mod n] and has the
    same length as the inputs. Computed as irfft(rfft(a) * rfft(b)).
    """
    va = _as_vector(a, "a")
    vb = _as_vector(b, "b")
    n = va.shape[0]
    if vb.shape[0] != n:
        raise DimensionError(
            f"cannot bind vectors of lengths {n} and {vb.shape[0]}"
        )
    return np.fft.irfft(np.fft.rfft(va) * np.fft.rfft(vb), n=n)


def dot(a, b) -> float:
    """Inner product of two equal-length vectors."""
    va = _as_vector(a, "a")
    vb = _as_vector(b, "b")
    if va.shape[0] != vb.shape[0]:
        raise DimensionError(
            f"cannot dot vectors of lengths {va.shape[0]} and {vb.shape[0]}"
        )
    return float(va @ vb)


def grow_dimension(n: int, atr_count: int) -> int:
    """New vector length after appending a task context.

    ``atr_count`` is the context count after the append (>= 2). Starting from
    a base length n0 with one context, repeated growth yields k * n0 with k
    contexts, i.e. length grows linearly with the number of contexts.
    """
    if n < 1:
        raise DimensionError(f"vector length must be >= 1, got {n}")
    if atr_count < 2:
        raise ValueError(f"atr_count must be >= 2, got {atr_count}")
    return int(round(atr_count * n / (atr_count - 1)))


def stack_and_solve(new_reps, old_values) -> np.ndarray:
    """Minimum-norm least-squares weights reproducing values on stacked rows.

    Solves ``new_reps @ w ~= old_values`` for the w of smallest norm, treating
    singular values below SOLVE_RCOND * sigma_max as zero. With m rows and
    n_new columns, m <= n_new generic rows are matched exactly; m > n_new
    falls back to the least-squares fit.
    """
    A = np.asarray(new_reps, dtype=np.float64)
    b = np.asarray(old_values, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError("new_reps must be a non-empty 2-D matrix")
    if b.ndim != 1 or b.shape[0] != A.shape[0]:
        raise ValueError(
            f"old_values must have one entry per row ({A.shape[0]}), "
            f"got shape {b.shape}"
        )
    w, _residuals, _rank, _sv = np.linalg.lstsq(A, b, rcond=SOLVE_RCOND)
    return w


class SymbolLedger:
    """Lazily materialized symbols and memoized compounds in one space.

    Every vector handed out has length ``dimension`` and is marked read-only;
    querying the same name or tuple twice returns the identical array. The
    ledger is the sole source of representations for one agent and must not
    be shared mutably.
    """

    def __init__(self, dimension: int, rng: np.random.Generator):
        if dimension < 1:
            raise DimensionError(f"dimension must be >= 1, got {dimension}")
        self.dimension = dimension
        self.rng = rng
        ident = identity_hrr(dimension)
        ident.setflags(write=False)
        self.atoms: dict[str, np.ndarray] = {IDENTITY_SYMBOL: ident}
        self.compounds: dict[tuple[str, ...], np.ndarray] = {}

    def atom(self, name: str) -> np.ndarray:
        """Return the vector for a named symbol, drawing it on first use."""
        vec = self.atoms.get(name)
        if vec is None:
            vec = random_hrr(self.dimension, self.rng)
            vec.setflags(write=False)
            self.atoms[name] = vec
        return vec

    def encode(self, symbols: Sequence[str] | Iterable[str]) -> np.ndarray:
        """Bind the named symbols into one compound, memoized by the tuple.

        Identity symbols drop out exactly: the compound of the remaining
        names is the convolution of their atoms, a single atom is returned
        as-is, and an all-identity tuple is the identity vector.
        """
        key = tuple(symbols)
        if not key:
            raise ValueError("cannot encode an empty symbol tuple")
        vec = self.compounds.get(key)
        if vec is None:
            parts = [self.atom(s) for s in key if s != IDENTITY_SYMBOL]
            if not parts:
                vec = self.atoms[IDENTITY_SYMBOL]
            elif len(parts) == 1:
                vec = parts[0]
            else:
                acc = parts[0]
                for part in parts[1:]:
                    acc = convolve(acc, part)
                acc.setflags(write=False)
                vec = acc
            self.compounds[key] = vec
        return vec
