from typing import Sequence, Tuple

import numpy as np

from meanfix.constants import NORM_TOL
from meanfix.exceptions import WeightError
from meanfix.spaces.vectors import ExponentLike, PExponent


class MultiIndex:
    """Weights (alpha_1, ..., alpha_n) of the mean inequality together with its exponent p."""

    __slots__ = ("weights", "p")

    def __init__(self, weights: Sequence[float], p: ExponentLike = 1.0):
        w = np.array(weights, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise WeightError("a multi-index needs at least one weight")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise WeightError(f"weights must be finite and nonnegative, got {w.tolist()}")
        if abs(w.sum() - 1.0) > NORM_TOL:
            raise WeightError(f"weights must sum to 1, got {w.sum()!r}")
        if w[0] <= 0 or w[-1] <= 0:
            raise WeightError(f"first and last weights must be positive, got {w.tolist()}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "p", PExponent.of(p))

    def __setattr__(self, name, value):
        raise AttributeError("MultiIndex is immutable")

    @classmethod
    def parse(cls, text: str, p: ExponentLike = 1.0) -> "MultiIndex":
        """Build from a comma list such as "0.5,0.5"."""
        try:
            weights = [float(tok) for tok in text.split(",") if tok.strip()]
        except ValueError as e:
            raise WeightError(f"cannot parse weights from {text!r}") from e
        return cls(weights, p)

    @property
    def n(self) -> int:
        return int(self.weights.size)

    @property
    def alpha1(self) -> float:
        return float(self.weights[0])

    def __getitem__(self, k: int) -> float:
        """1-based access: alpha[1] is alpha_1."""
        if not 1 <= k <= self.n:
            raise IndexError(f"multi-index position {k} outside 1..{self.n}")
        return float(self.weights[k - 1])

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiIndex) and self.p == other.p and np.array_equal(self.weights, other.weights)

    def __hash__(self) -> int:
        return hash((self.weights.tobytes(), self.p))

    def __repr__(self) -> str:
        return f"MultiIndex({self.weights.tolist()}, p={self.p.p})"

    def tolist(self) -> list:
        return self.weights.tolist()


def collapse_zero_weights(alpha: MultiIndex) -> Tuple[MultiIndex, Tuple[int, ...]]:
    """Drop zero weights, returning the remaining weights and their 1-based positions k_1 < ... < k_nu.

    k_1 = 1 and k_nu = n always hold because alpha_1 and alpha_n are positive.
    """
    positions = tuple(int(k) + 1 for k in np.flatnonzero(alpha.weights > 0))
    if len(positions) == alpha.n:
        return alpha, positions
    return MultiIndex(alpha.weights[alpha.weights > 0], alpha.p), positions
