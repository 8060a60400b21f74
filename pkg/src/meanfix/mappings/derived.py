"""Maps derived from a base map T: powers, T_alpha, tau_alpha, the lifted map and J.

Every derived map inherits the domain of T. T^0 is the identity.
"""

import logging
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from meanfix.exceptions import DimensionMismatchError
from meanfix.mappings.mapping_base import MappingHandle, ProductMap
from meanfix.mappings.multi_index import MultiIndex, collapse_zero_weights
from meanfix.spaces.vectors import ProductPoint

logger = logging.getLogger(__name__)


def resolve_exponents(alpha: MultiIndex, exponents: Optional[Sequence[int]]) -> Tuple[int, ...]:
    if exponents is None:
        return tuple(range(1, alpha.n + 1))
    exponents = tuple(int(k) for k in exponents)
    if len(exponents) != alpha.n:
        raise DimensionMismatchError(f"{len(exponents)} exponents for a multi-index of length {alpha.n}")
    if exponents[0] < 1 or any(b <= a for a, b in zip(exponents, exponents[1:])):
        raise DimensionMismatchError(f"exponents must be increasing positive integers, got {exponents}")
    return exponents


def iterate(T: MappingHandle, k: int) -> MappingHandle:
    if k < 1:
        raise ValueError(f"iteration count must be at least 1, got {k}")
    if k == 1:
        return T

    def evaluator(points: np.ndarray) -> np.ndarray:
        for _ in range(k):
            points = T.evaluator(points)
        return points

    return MappingHandle(T.domain, evaluator, f"{T.label}^{k}")


def _weighted_powers(T: MappingHandle, weights: np.ndarray, exponents: Sequence[int], shift: int) -> Callable:
    """x -> sum_j w_j T^(k_j - shift) x."""
    offsets = [k - shift for k in exponents]

    def evaluator(points: np.ndarray) -> np.ndarray:
        powers = T.powers(points, max(offsets))
        return sum(w * powers[k] for w, k in zip(weights, offsets))

    return evaluator


def t_alpha(T: MappingHandle, alpha: MultiIndex, exponents: Optional[Sequence[int]] = None) -> MappingHandle:
    """T_alpha = sum_k alpha_k T^k, which equals (alpha_1 I + alpha_2 T) o T for n = 2."""
    exponents = resolve_exponents(alpha, exponents)
    evaluator = _weighted_powers(T, alpha.weights, exponents, shift=0)
    return MappingHandle(T.domain, evaluator, f"T_alpha[{T.label}]")


def tau_alpha(T: MappingHandle, alpha: MultiIndex, exponents: Optional[Sequence[int]] = None) -> MappingHandle:
    """tau_alpha = T o (sum_k alpha_k T^(k-1))."""
    exponents = resolve_exponents(alpha, exponents)
    inner = _weighted_powers(T, alpha.weights, exponents, shift=1)

    def evaluator(points: np.ndarray) -> np.ndarray:
        return T.evaluator(inner(points))

    return MappingHandle(T.domain, evaluator, f"tau_alpha[{T.label}]")


def tilde_t(
    T: MappingHandle, alpha: MultiIndex, exponents: Optional[Sequence[int]] = None
) -> Callable[[ProductPoint], ProductPoint]:
    """(x_1, ..., x_n) -> (T^k_1 x_1, ..., T^k_n x_n)."""
    exponents = resolve_exponents(alpha, exponents)

    def lifted(pp: ProductPoint) -> ProductPoint:
        if pp.n != alpha.n:
            raise DimensionMismatchError(f"{pp.n} parts for a multi-index of length {alpha.n}")
        rows = [T.powers(row, k)[-1] for row, k in zip(pp.array, exponents)]
        return ProductPoint(np.stack(rows))

    return lifted


def j_map(T: MappingHandle, alpha: MultiIndex, exponents: Optional[Sequence[int]] = None) -> ProductMap:
    """J(x_1, ..., x_n) = (T^k_1 xbar, ..., T^k_n xbar) with xbar = sum_j alpha_j x_j.

    J depends on its argument only through xbar.
    """
    exponents = resolve_exponents(alpha, exponents)
    weights = alpha.weights
    top = exponents[-1]

    def evaluator(parts: np.ndarray) -> np.ndarray:
        xbar = np.tensordot(weights, parts, axes=([0], [-2]))
        powers = T.powers(xbar, top)
        return np.stack([powers[k] for k in exponents], axis=-2)

    return ProductMap(T.domain, alpha, exponents, evaluator, f"J[{T.label}]")


def build_j(T: MappingHandle, alpha: MultiIndex) -> ProductMap:
    """J on the product of the nonzero-weight positions only."""
    collapsed, exponents = collapse_zero_weights(alpha)
    if collapsed.n != alpha.n:
        logger.info(f"Collapsed multi-index {alpha.tolist()} to {collapsed.tolist()} with powers {exponents}")
    return j_map(T, collapsed, exponents)
