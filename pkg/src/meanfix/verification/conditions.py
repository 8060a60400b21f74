"""Closed-form sufficient conditions on the weights for approximate fixed point sequences."""

import logging
import math
from typing import Iterator, Sequence, Tuple

import numpy as np

from meanfix.constants import NORM_TOL, BoundComparison
from meanfix.exceptions import ConditionRefusedError, DimensionMismatchError, InconsistentConditionError
from meanfix.mappings.multi_index import MultiIndex
from meanfix.models import ConditionResult

logger = logging.getLogger(__name__)

HALF_SQRT2 = math.sqrt(2.0) / 2.0
# alpha_1 where the improved n = 3 bound stops being the smaller one
N3_CROSSOVER = (1.0 + math.sqrt(17.0)) / 8.0

GJP2 = "gjp2"
N3 = "n3"
GJP_N3_IMPROVED = "gjp-n3-improved"
GJP_GENERAL = "gjp-general"
REMARK_GENERAL = "remark-general"


def _require_n(alpha: MultiIndex, n: int, condition_id: str) -> None:
    if alpha.n != n:
        raise DimensionMismatchError(f"{condition_id} needs {n} weights, got {alpha.n}")


def _require_p1(alpha: MultiIndex, condition_id: str) -> None:
    if alpha.p.p != 1.0:
        raise ConditionRefusedError(f"{condition_id} is stated for p = 1, got p = {alpha.p.p:g}")


def cond_gjp2(alpha: MultiIndex) -> ConditionResult:
    """alpha_2^p <= alpha_1; for p = 1 this is alpha_1 >= 1/2."""
    _require_n(alpha, 2, GJP2)
    return ConditionResult.from_sides(GJP2, alpha.tolist(), alpha.p.p, alpha[2] ** alpha.p.p, alpha[1])


def cond_n3(alpha: MultiIndex) -> ConditionResult:
    """1 - 2 alpha_1^2 <= alpha_2, cross-checked against alpha_1 (alpha_2 + alpha_3) + alpha_3 <= alpha_1^2."""
    _require_n(alpha, 3, N3)
    _require_p1(alpha, N3)
    a1, a2, a3 = alpha[1], alpha[2], alpha[3]
    result = ConditionResult.from_sides(N3, alpha.tolist(), 1.0, 1.0 - 2.0 * a1**2, a2,
                                        alt_lhs=a1 * (a2 + a3) + a3, alt_rhs=a1**2)
    if (result.alt_lhs <= result.alt_rhs + NORM_TOL) != result.verdict:
        raise InconsistentConditionError(f"the two forms of {N3} disagree at {alpha.tolist()}")
    return result


def cond_gjp_n3_improved(alpha: MultiIndex) -> ConditionResult:
    """alpha_1 in [1/2, sqrt(2)/2) and (1 - alpha_1)/2 <= alpha_2."""
    _require_n(alpha, 3, GJP_N3_IMPROVED)
    _require_p1(alpha, GJP_N3_IMPROVED)
    a1 = alpha[1]
    return ConditionResult.from_sides(GJP_N3_IMPROVED, alpha.tolist(), 1.0, (1.0 - a1) / 2.0, alpha[2],
                                      interval_ok=0.5 <= a1 < HALF_SQRT2)


def gjp_general_sides(alpha1: float, n: int, p: float) -> Tuple[float, float]:
    """(1 - a)(1 - a^((n-1)/p)) and a^((n-1)/p)(1 - a^(1/p)) for a = alpha_1."""
    head = alpha1 ** ((n - 1) / p)
    return (1.0 - alpha1) * (1.0 - head), head * (1.0 - alpha1 ** (1.0 / p))


def cond_gjp_general(alpha: MultiIndex) -> ConditionResult:
    lhs, rhs = gjp_general_sides(alpha[1], alpha.n, alpha.p.p)
    return ConditionResult.from_sides(GJP_GENERAL, alpha.tolist(), alpha.p.p, lhs, rhs)


def remark_lhs(alpha: MultiIndex, k_ests: Sequence[float]) -> float:
    """k(T) * sum_(m=2..n) (alpha_m + ... + alpha_n) k(T^(m-2))."""
    tails = np.cumsum(alpha.weights[::-1])[::-1]
    return k_ests[1] * sum(tails[m - 1] * k_ests[m - 2] for m in range(2, alpha.n + 1))


def cond_remark_general(alpha: MultiIndex, k_ests: Sequence[float]) -> ConditionResult:
    """1 >= k(T) sum_(m=2..n) (sum_(j>=m) alpha_j) k(T^(m-2)), with k_ests[j] standing in for k(T^j).

    Sampled Lipschitz constants are lower bounds, so with estimates a true
    verdict is only as good as the estimates.
    """
    k_ests = [float(k) for k in k_ests]
    if not k_ests or k_ests[0] != 1.0:
        raise ConditionRefusedError(f"k_ests[0] is k(T^0) = k(I) and must be 1, got {k_ests[:1]}")
    needed = max(2, alpha.n - 1)
    if len(k_ests) < needed:
        raise DimensionMismatchError(f"need k(T^j) for j = 0..{needed - 1}, got {len(k_ests)} values")
    return ConditionResult.from_sides(REMARK_GENERAL, alpha.tolist(), alpha.p.p, remark_lhs(alpha, k_ests), 1.0,
                                      k_estimates=k_ests, note="as-evaluated with estimates")


def mean_lipschitz_bounds(alpha: MultiIndex, count: int) -> list:
    """k(T^j) <= alpha_1^(-j/p) for j = 0..count-1, the bound every (alpha, p)-nonexpansive T obeys."""
    return [alpha[1] ** (-j / alpha.p.p) for j in range(count)]


def compare_n3_bounds(alpha1: float) -> BoundComparison:
    """The improved lower bound (1 - alpha_1)/2 for alpha_2 against 1 - 2 alpha_1^2.

    The improved bound is the smaller one exactly when 4 alpha_1^2 - alpha_1 - 1 < 0,
    that is for alpha_1 below (1 + sqrt(17))/8.
    """
    improved, quadratic = (1.0 - alpha1) / 2.0, 1.0 - 2.0 * alpha1**2
    return BoundComparison(alpha1, improved, quadratic, improved < quadratic)


def naive_tau_bound(alpha: MultiIndex) -> float:
    """1 + alpha_2 alpha_1^(-2), from k(tau_alpha) <= k(T)(alpha_1 + alpha_2 k(T)) and k(T) <= 1/alpha_1."""
    _require_n(alpha, 2, "naive tau bound")
    return 1.0 + alpha[2] * alpha[1] ** -2


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def lattice_size(step: float) -> int:
    """1 / step, which must be a whole number of lattice cells."""
    if not 0.0 < step < 1.0:
        raise ValueError(f"grid step must lie in (0, 1), got {step}")
    total = int(round(1.0 / step))
    if abs(total * step - 1.0) > 1e-9:
        raise ValueError(f"grid step {step} does not divide 1; use 1/m for an integer m, e.g. {1.0 / total:.6g}")
    return total


def simplex_grid(n: int, step: float = 0.01, min_weight: float = 0.01) -> np.ndarray:
    """Weights on the simplex lattice of the given step with alpha_1, alpha_n >= min_weight, one row each."""
    total = lattice_size(step)
    floor = max(1, math.ceil(min_weight / step - NORM_TOL))
    rows = [c for c in _compositions(total, n) if c[0] >= floor and c[-1] >= floor]
    return np.array(rows, dtype=np.float64).reshape(-1, n) / total


def alpha1_grid(count: int = 999) -> np.ndarray:
    """count evenly spaced values strictly inside (0, 1)."""
    return np.arange(1, count + 1) / (count + 1)
