"""Finitely supported points of l^p, closed balls, and the weighted product norm.

Every point is a fixed-length float64 vector. For the shift-type example maps
this truncation is exact: when x_j = 0 beyond the truncation dimension d, the
images carry no mass beyond d either, since those maps only move coordinates
to the left.
"""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Optional, Sequence, Union

import numpy as np

from meanfix.constants import NORM_TOL
from meanfix.exceptions import DimensionMismatchError, DomainError, NonFiniteError, WeightError

if TYPE_CHECKING:
    from meanfix.mappings.multi_index import MultiIndex

logger = logging.getLogger(__name__)


def _readonly(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim or arr.size == 0:
        raise DimensionMismatchError(f"expected a non-empty {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("coordinates must be finite reals")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PExponent:
    p: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.p) or self.p < 1:
            raise DomainError(f"exponent must lie in [1, inf), got {self.p}")
        object.__setattr__(self, "p", float(self.p))

    def __float__(self) -> float:
        return self.p

    @classmethod
    def of(cls, p: "ExponentLike") -> "PExponent":
        return p if isinstance(p, PExponent) else cls(float(p))


ExponentLike = Union[PExponent, float, int]


class SeqVec:
    """An immutable truncated real sequence."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence[float]):
        object.__setattr__(self, "coords", _readonly(coords, 1))

    def __setattr__(self, name, value):
        raise AttributeError("SeqVec is immutable")

    @property
    def dim(self) -> int:
        return int(self.coords.size)

    @classmethod
    def zeros(cls, dim: int) -> "SeqVec":
        return cls(np.zeros(dim))

    @classmethod
    def basis(cls, dim: int, k: int) -> "SeqVec":
        """e_k with 1-based k, matching the usual sequence-space notation."""
        if not 1 <= k <= dim:
            raise DimensionMismatchError(f"basis index {k} outside 1..{dim}")
        coords = np.zeros(dim)
        coords[k - 1] = 1.0
        return cls(coords)

    def _check_dim(self, other: "SeqVec") -> None:
        if other.dim != self.dim:
            raise DimensionMismatchError(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other: "SeqVec") -> "SeqVec":
        self._check_dim(other)
        return SeqVec(self.coords + other.coords)

    def __sub__(self, other: "SeqVec") -> "SeqVec":
        self._check_dim(other)
        return SeqVec(self.coords - other.coords)

    def __mul__(self, scalar: float) -> "SeqVec":
        return SeqVec(float(scalar) * self.coords)

    __rmul__ = __mul__

    def __neg__(self) -> "SeqVec":
        return SeqVec(-self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, SeqVec) and np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash(self.coords.tobytes())

    def __len__(self) -> int:
        return self.dim

    def __iter__(self) -> Iterator[float]:
        return iter(self.coords.tolist())

    def __getitem__(self, idx):
        return self.coords[idx]

    def __repr__(self) -> str:
        return f"SeqVec({self.coords.tolist()})"

    def tolist(self) -> list:
        return self.coords.tolist()


@dataclass(frozen=True)
class BallDomain:
    dim: int
    p: PExponent = PExponent(1.0)
    radius: float = 1.0
    center: Optional[SeqVec] = None

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatchError(f"dim must be positive, got {self.dim}")
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise DomainError(f"radius must be positive, got {self.radius}")
        object.__setattr__(self, "p", PExponent.of(self.p))
        center = self.center if self.center is not None else SeqVec.zeros(self.dim)
        if center.dim != self.dim:
            raise DimensionMismatchError(f"center has dim {center.dim}, domain has dim {self.dim}")
        object.__setattr__(self, "center", center)

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def distances(self, points: np.ndarray) -> np.ndarray:
        return lp_norm_array(np.asarray(points) - self.center.coords, self.p)

    def contains_array(self, points: np.ndarray, slack: float = 0.0) -> np.ndarray:
        return self.distances(points) <= self.radius + slack

    def project(self, points: np.ndarray) -> np.ndarray:
        """Radially pull points outside the ball back onto its boundary."""
        offset = np.asarray(points, dtype=np.float64) - self.center.coords
        dist = lp_norm_array(offset, self.p)
        scale = np.maximum(1.0, dist / self.radius)
        return self.center.coords + offset / scale[..., None]


def lp_norm_array(values: np.ndarray, p: ExponentLike) -> np.ndarray:
    """l^p norms along the last axis."""
    return np.linalg.norm(np.asarray(values, dtype=np.float64), ord=float(PExponent.of(p)), axis=-1)


def lp_norm(v: SeqVec, p: ExponentLike) -> float:
    return float(lp_norm_array(v.coords, p))


def _check_weights(weights: np.ndarray, count: int) -> None:
    if weights.ndim != 1 or weights.size != count:
        raise DimensionMismatchError(f"{weights.size} weights for {count} points")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise WeightError(f"weights must be finite and nonnegative, got {weights.tolist()}")
    if abs(weights.sum() - 1.0) > NORM_TOL:
        raise WeightError(f"weights must sum to 1, got {weights.sum()!r}")


def convex_combine(weights: Sequence[float], points: Sequence[SeqVec]) -> SeqVec:
    w = np.asarray(weights, dtype=np.float64)
    _check_weights(w, len(points))
    dims = {pt.dim for pt in points}
    if len(dims) != 1:
        raise DimensionMismatchError(f"points have mixed dimensions {sorted(dims)}")
    return SeqVec(w @ np.stack([pt.coords for pt in points]))


def in_ball(v: SeqVec, dom: BallDomain, slack: float = 0.0) -> bool:
    if v.dim != dom.dim:
        raise DimensionMismatchError(f"point has dim {v.dim}, domain has dim {dom.dim}")
    return bool(dom.contains_array(v.coords, slack))


class ProductPoint:
    """An n-tuple of equal-length points, stored as an (n, dim) array."""

    __slots__ = ("array",)

    def __init__(self, array: np.ndarray):
        object.__setattr__(self, "array", _readonly(array, 2))

    def __setattr__(self, name, value):
        raise AttributeError("ProductPoint is immutable")

    @classmethod
    def from_parts(cls, parts: Sequence[SeqVec]) -> "ProductPoint":
        if not parts:
            raise DimensionMismatchError("a product point needs at least one part")
        dims = {pt.dim for pt in parts}
        if len(dims) != 1:
            raise DimensionMismatchError(f"parts have mixed dimensions {sorted(dims)}")
        return cls(np.stack([pt.coords for pt in parts]))

    @classmethod
    def diagonal(cls, x: SeqVec, n: int) -> "ProductPoint":
        return cls(np.tile(x.coords, (n, 1)))

    @property
    def n(self) -> int:
        return int(self.array.shape[0])

    @property
    def dim(self) -> int:
        return int(self.array.shape[1])

    @property
    def parts(self) -> tuple:
        return tuple(SeqVec(row) for row in self.array)

    def __sub__(self, other: "ProductPoint") -> "ProductPoint":
        if other.array.shape != self.array.shape:
            raise DimensionMismatchError(f"shape {self.array.shape} vs {other.array.shape}")
        return ProductPoint(self.array - other.array)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProductPoint) and np.array_equal(self.array, other.array)

    def __hash__(self) -> int:
        return hash(self.array.tobytes())

    def __repr__(self) -> str:
        return f"ProductPoint({self.array.tolist()})"

    def tolist(self) -> list:
        return self.array.tolist()


def product_norm_array(
    parts: np.ndarray, weights: np.ndarray, outer_p: ExponentLike, ambient_p: ExponentLike
) -> np.ndarray:
    """(sum_k w_k |x_k|^p)^(1/p) over the second-to-last axis of parts."""
    outer = float(PExponent.of(outer_p))
    inner = lp_norm_array(parts, ambient_p)
    return np.power(np.tensordot(inner**outer, weights, axes=([-1], [0])), 1.0 / outer)


def product_norm(pp: ProductPoint, alpha: "MultiIndex", ambient_p: ExponentLike) -> float:
    if pp.n != alpha.n:
        raise DimensionMismatchError(f"{pp.n} parts for a multi-index of length {alpha.n}")
    return float(product_norm_array(pp.array, alpha.weights, alpha.p, ambient_p))
