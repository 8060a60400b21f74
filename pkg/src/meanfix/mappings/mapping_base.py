import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from meanfix.exceptions import DimensionMismatchError, NonFiniteError
from meanfix.mappings.multi_index import MultiIndex
from meanfix.spaces.vectors import BallDomain, ProductPoint, SeqVec, product_norm_array

logger = logging.getLogger(__name__)

# maps arrays of shape (..., dim) to arrays of the same shape
ArrayMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MappingHandle:
    """A deterministic self-map of a ball, evaluated row-wise on stacked points."""

    domain: BallDomain
    evaluator: ArrayMap
    label: str

    def apply(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        if points.shape[-1] != self.domain.dim:
            raise DimensionMismatchError(f"{self.label} expects dim {self.domain.dim}, got {points.shape[-1]}")
        out = self.evaluator(points)
        if not np.all(np.isfinite(out)):
            raise NonFiniteError(f"{self.label} produced non-finite values")
        return out

    def __call__(self, v: SeqVec) -> SeqVec:
        return SeqVec(self.apply(v.coords))

    def powers(self, points: np.ndarray, k_max: int) -> list:
        """[T^0 x, T^1 x, ..., T^k_max x] for a stack of points."""
        out = [np.asarray(points, dtype=np.float64)]
        for _ in range(k_max):
            out.append(self.apply(out[-1]))
        return out


@dataclass(frozen=True)
class ProductMap:
    """A map of C^n measured in the weighted product norm.

    `exponents` are the powers of T attached to the parts; they are 1..n unless
    zero weights were collapsed away.
    """

    domain: BallDomain
    alpha: MultiIndex
    exponents: Tuple[int, ...]
    evaluator: ArrayMap
    label: str

    @property
    def n(self) -> int:
        return self.alpha.n

    def apply(self, parts: np.ndarray) -> np.ndarray:
        parts = np.asarray(parts, dtype=np.float64)
        if parts.shape[-2:] != (self.n, self.domain.dim):
            raise DimensionMismatchError(
                f"{self.label} expects parts of shape {(self.n, self.domain.dim)}, got {parts.shape[-2:]}"
            )
        out = self.evaluator(parts)
        if not np.all(np.isfinite(out)):
            raise NonFiniteError(f"{self.label} produced non-finite values")
        return out

    def __call__(self, pp: ProductPoint) -> ProductPoint:
        return ProductPoint(self.apply(pp.array))

    def norm(self, parts: np.ndarray) -> np.ndarray:
        return product_norm_array(parts, self.alpha.weights, self.alpha.p, self.domain.p)

    def residual(self, parts: np.ndarray) -> float:
        """|F z - z| in the product norm."""
        return float(self.norm(self.apply(parts) - parts))
