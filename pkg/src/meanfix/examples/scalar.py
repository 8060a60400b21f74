import math
from typing import Sequence, Tuple

import numpy as np

from meanfix.exceptions import DomainError

SQRT2 = math.sqrt(2.0)
# zero-branch half width of sigma
T0 = (SQRT2 - 1.0) / SQRT2


class PiecewiseAffine:
    """A continuous-or-not piecewise affine function of one real variable.

    `pieces[i]` is (slope, intercept) on [breakpoints[i-1], breakpoints[i]].
    At breakpoint i the value of piece `ties[i]` is used; for the flat-middle
    functions below that is the zero piece, which keeps those values exact.
    """

    def __init__(self, name: str, breakpoints: Sequence[float], pieces: Sequence[Tuple[float, float]],
                 interval: Tuple[float, float], ties: Sequence[int]):
        if len(pieces) != len(breakpoints) + 1 or len(ties) != len(breakpoints):
            raise ValueError(f"{name}: need one more piece than breakpoints and one tie per breakpoint")
        if any(b <= a for a, b in zip(breakpoints, breakpoints[1:])):
            raise ValueError(f"{name}: breakpoints must increase")
        self.name = name
        self.breakpoints = np.asarray(breakpoints, dtype=np.float64)
        self.slopes = np.array([s for s, _ in pieces], dtype=np.float64)
        self.intercepts = np.array([c for _, c in pieces], dtype=np.float64)
        self.interval = interval
        self.ties = np.asarray(ties, dtype=np.intp)

    def piece_index(self, t: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.breakpoints, t, side="right")
        for k, b in enumerate(self.breakpoints):
            idx = np.where(t == b, self.ties[k], idx)
        return idx

    def evaluate(self, t) -> np.ndarray:
        """Vectorized evaluation without a domain check."""
        t = np.asarray(t, dtype=np.float64)
        idx = self.piece_index(t)
        return self.slopes[idx] * t + self.intercepts[idx]

    def check_interval(self, t) -> None:
        lo, hi = self.interval
        t = np.asarray(t, dtype=np.float64)
        if not np.all((t >= lo) & (t <= hi)):
            raise DomainError(f"{self.name} is defined on [{lo}, {hi}]")

    def __call__(self, t: float) -> float:
        self.check_interval(t)
        return float(self.evaluate(t))

    @property
    def max_slope(self) -> float:
        return float(np.max(np.abs(self.slopes)))


TAU = PiecewiseAffine(
    "tau",
    breakpoints=(-0.5, 0.5),
    pieces=((2.0, 1.0), (0.0, 0.0), (2.0, -1.0)),
    interval=(-1.0, 1.0),
    ties=(1, 1),
)

SIGMA = PiecewiseAffine(
    "sigma",
    breakpoints=(-T0, T0),
    pieces=((SQRT2, SQRT2 - 1.0), (0.0, 0.0), (SQRT2, -(SQRT2 - 1.0))),
    interval=(-1.0, 1.0),
    ties=(1, 1),
)


def tau_scalar(t: float) -> float:
    return TAU(t)


def sigma_scalar(t: float) -> float:
    return SIGMA(t)


def discontinuous_f_array(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.where(x == 0.0, 1.0, 0.0)


def discontinuous_f(x: float) -> float:
    """1 at the origin and 0 elsewhere on [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"f is defined on [0, 1], got {x}")
    return 1.0 if x == 0.0 else 0.0
