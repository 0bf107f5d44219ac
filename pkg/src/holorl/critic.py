"""Linear critic with a fixed optimistic bias and an accumulating trace.

The estimated value of a compound u is ``u . w + 1``. The constant bias of
one makes every never-visited compound look promising, which is the only
exploration drive the agent needs besides a tiny epsilon. Updates are scaled
through the log-modulus transform so one huge error cannot blow up the
weights.
"""

from __future__ import annotations

import math

import numpy as np

from .hrr import DimensionError, random_hrr

#: Fixed critic bias; never learned.
OPTIMISTIC_BIAS = 1.0


def logmod(x: float) -> float:
    """Signed, compressed error scale: sgn(x) * ln(|x| + 1).

    Odd, monotone increasing, and |logmod(x)| <= |x| for all finite x.
    """
    return math.copysign(math.log1p(abs(x)), x)


def td_error(
    reward: float,
    gamma: float,
    value_next: float,
    value_current: float,
    terminal: bool,
    bootstrap_sign: float = 1.0,
) -> float:
    """One-step TD error.

    Non-terminal: (reward + gamma * value_next) - value_current. Terminal
    transitions take no bootstrap term: reward - value_current.
    ``bootstrap_sign`` flips the sign of the bootstrap term for replication
    studies; the default +1 is the standard form.
    """
    if terminal:
        return reward - value_current
    return reward + bootstrap_sign * gamma * value_next - value_current


class EligibilityTrace:
    """Discounted accumulation of the inputs seen this episode."""

    def __init__(self, n: int, lam: float):
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"lambda must be in [0, 1], got {lam}")
        self.values = np.zeros(n, dtype=np.float64)
        self.lam = float(lam)

    def update(self, u: np.ndarray) -> None:
        """e <- lambda * e + u."""
        if u.shape != self.values.shape:
            raise DimensionError(
                f"trace length {self.values.shape[0]} does not match input "
                f"length {u.shape[0]}"
            )
        if self.lam == 0.0:
            np.copyto(self.values, u)
        else:
            self.values *= self.lam
            self.values += u

    def clear(self) -> None:
        self.values[:] = 0.0


class ValueNetwork:
    """Single-layer linear value estimator. Only the weights are learned."""

    def __init__(self, weights: np.ndarray):
        self.weights = np.array(weights, dtype=np.float64)
        if self.weights.ndim != 1 or self.weights.shape[0] < 1:
            raise DimensionError("weights must be a 1-D vector of length >= 1")
        self.bias = OPTIMISTIC_BIAS

    @classmethod
    def with_random_weights(cls, n: int, rng: np.random.Generator) -> "ValueNetwork":
        """Initialize the weights as a freshly drawn symbol vector."""
        return cls(random_hrr(n, rng))

    def value(self, u: np.ndarray) -> float:
        if u.shape != self.weights.shape:
            raise DimensionError(
                f"input length {u.shape[0]} does not match weight length "
                f"{self.weights.shape[0]}"
            )
        return float(self.weights @ u) + self.bias

    def apply_update(self, alpha: float, delta: float, trace: EligibilityTrace) -> None:
        """w <- w + alpha * logmod(delta) * e. The bias is never touched."""
        if trace.values.shape != self.weights.shape:
            raise DimensionError(
                f"trace length {trace.values.shape[0]} does not match weight "
                f"length {self.weights.shape[0]}"
            )
        scale = alpha * logmod(delta)
        if scale != 0.0:
            self.weights += scale * trace.values
