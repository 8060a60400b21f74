"""Weighted left-shift maps on unit balls of l^1 and l^2, the scalar map f, and nonexpansive baselines."""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from meanfix.constants import DEFAULT_PROPERTY_DIM, SAMPLE_SLACK
from meanfix.examples.scalar import SIGMA, TAU, PiecewiseAffine, discontinuous_f_array
from meanfix.exceptions import DimensionMismatchError, DomainError
from meanfix.mappings.mapping_base import MappingHandle
from meanfix.spaces.vectors import BallDomain, SeqVec, in_ball, lp_norm_array

logger = logging.getLogger(__name__)

BASELINE_KINDS = ("affine-contraction", "coordinate-shift-average", "identity")


def _weighted_shift(head: PiecewiseAffine, third: float):
    """(x_1, x_2, x_3, x_4, ...) -> (head(x_2), third * x_3, x_4, ..., x_d, 0)."""

    def evaluator(points: np.ndarray) -> np.ndarray:
        out = np.zeros_like(points)
        out[..., 0] = head.evaluate(points[..., 1])
        out[..., 1] = third * points[..., 2]
        out[..., 2:-1] = points[..., 3:]
        return out

    return evaluator


def _check_shift_dim(dim: int) -> None:
    if dim < 3:
        raise DimensionMismatchError(f"shift examples need at least 3 coordinates, got {dim}")


def example1_map(dim: int = DEFAULT_PROPERTY_DIM) -> MappingHandle:
    """T on the unit ball of l^1: (tau(x_2), 2/3 x_3, x_4, ...)."""
    _check_shift_dim(dim)
    return MappingHandle(BallDomain(dim, 1.0), _weighted_shift(TAU, 2.0 / 3.0), "T")


def example2_map(dim: int = DEFAULT_PROPERTY_DIM) -> MappingHandle:
    """S on the unit ball of l^2: (sigma(x_2), sqrt(2/3) x_3, x_4, ...)."""
    _check_shift_dim(dim)
    return MappingHandle(BallDomain(dim, 2.0), _weighted_shift(SIGMA, math.sqrt(2.0 / 3.0)), "S")


def _checked(handle: MappingHandle, x: SeqVec) -> SeqVec:
    if not in_ball(x, handle.domain, SAMPLE_SLACK):
        raise DomainError(f"{handle.label} is defined on the unit ball of l^{handle.domain.p.p:g}")
    return handle(x)


def example1_T(x: SeqVec) -> SeqVec:
    return _checked(example1_map(x.dim), x)


def example2_S(x: SeqVec) -> SeqVec:
    return _checked(example2_map(x.dim), x)


def disc_f_map() -> MappingHandle:
    """f on [0, 1], seen as the ball of radius 1/2 about 1/2 in one dimension."""
    domain = BallDomain(1, 1.0, radius=0.5, center=SeqVec([0.5]))
    return MappingHandle(domain, discontinuous_f_array, "f")


def _left_shift(points: np.ndarray) -> np.ndarray:
    out = np.zeros_like(points)
    out[..., :-1] = points[..., 1:]
    return out


def baseline_maps(kind: str, dim: int = DEFAULT_PROPERTY_DIM, p: float = 1.0, radius: float = 1.0,
                  shift: Optional[Sequence[float]] = None) -> MappingHandle:
    """Nonexpansive control maps of the ball of the given radius about the origin.

    affine-contraction is x -> x/2 + c with |c| <= radius/2, by default
    c = radius/4 e_1 so that the unique fixed point 2c is off the origin.
    coordinate-shift-average is x -> (x + Lx)/2 with L the left shift.
    """
    domain = BallDomain(dim, p, radius=radius)
    if kind == "identity":
        return MappingHandle(domain, lambda points: np.array(points, dtype=np.float64), "I")
    if kind == "coordinate-shift-average":
        return MappingHandle(domain, lambda points: 0.5 * (points + _left_shift(points)), "A")
    if kind == "affine-contraction":
        if shift is None:
            c = np.zeros(dim)
            c[0] = radius / 4.0
        else:
            c = np.asarray(shift, dtype=np.float64)
            if c.shape != (dim,):
                raise DimensionMismatchError(f"shift has shape {c.shape}, expected ({dim},)")
        if float(lp_norm_array(c, p)) > radius / 2.0:
            raise DomainError(f"shift norm must not exceed radius/2 = {radius / 2.0}")
        c.setflags(write=False)
        return MappingHandle(domain, lambda points: 0.5 * points + c, "H")
    raise ValueError(f"unknown baseline kind {kind!r}; choose one of {BASELINE_KINDS}")
