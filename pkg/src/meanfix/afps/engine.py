"""Approximate fixed point sequences for nonexpansive maps of C^n.

Two schemes are provided. Krasnoselskii-Mann averaging keeps every iterate in
C^n and, for nonexpansive F, has a nonincreasing residual that tends to zero.
The anchored scheme solves z = (1 - eps) F z + eps a by Picard iteration; that
map is a (1 - eps)-contraction, and its fixed point has residual at most
eps * diam(C^n).
"""

import logging
import time
from typing import Callable, Optional

import numpy as np
from tqdm import tqdm

from meanfix.constants import ANCHORED_MAX_INNER, DEMO_TOL, MONOTONE_SLACK, AnchoredResult
from meanfix.exceptions import DimensionMismatchError, InnerIterationLimitError
from meanfix.mappings.mapping_base import ProductMap
from meanfix.mappings.sampler import PairSampler
from meanfix.models import IterationTrace
from meanfix.spaces.vectors import ProductPoint, SeqVec

logger = logging.getLogger(__name__)

# called with the step index and the iterate, an array of shape (n, dim)
StepHook = Callable[[int, np.ndarray], None]


def default_start(F: ProductMap, seed: int = 0) -> ProductPoint:
    """The diagonal of a seeded random point of the ball."""
    x = PairSampler(F.domain, seed).uniform(1)[0]
    return ProductPoint.diagonal(SeqVec(F.domain.project(x)), F.n)


def product_diameter(F: ProductMap) -> float:
    # weights sum to 1, so the diagonal attains the ball's diameter
    return F.domain.diameter


def _check_start(F: ProductMap, z0: ProductPoint) -> None:
    if z0.array.shape != (F.n, F.domain.dim):
        raise DimensionMismatchError(f"start point has shape {z0.array.shape}, {F.label} needs {(F.n, F.domain.dim)}")


def km_iterate(F: ProductMap, z0: ProductPoint, lam: float = 0.5, max_iter: int = 100000, tol: float = DEMO_TOL,
               seed: Optional[int] = None, progress: bool = False,
               on_step: Optional[StepHook] = None) -> IterationTrace:
    """z_(k+1) = (1 - lam) z_k + lam F z_k until |F z - z| <= tol or max_iter steps.

    on_step(step, z) sees every recorded iterate, the start point included.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    _check_start(F, z0)
    start = time.perf_counter()
    z = np.array(z0.array)
    Fz = F.apply(z)
    r = float(F.norm(Fz - z))
    residuals, increases = [r], []
    if on_step is not None:
        on_step(0, z)
    with tqdm(total=max_iter, desc=f"km {F.label}", disable=not progress) as pbar:
        for step in range(1, max_iter + 1):
            if r <= tol:
                break
            z = (1.0 - lam) * z + lam * Fz
            Fz = F.apply(z)
            r_next = float(F.norm(Fz - z))
            if r_next > r + MONOTONE_SLACK:
                increases.append(step)
                logger.warning(f"{F.label}: KM residual grew from {r:.6g} to {r_next:.6g} at step {step}")
            r = r_next
            residuals.append(r)
            if on_step is not None:
                on_step(step, z)
            pbar.update(1)
    converged = r <= tol
    trace = IterationTrace(scheme="km", parameter=lam, residuals=residuals, final_point=z.tolist(), seed=seed,
                           converged=converged, stop_reason="tol" if converged else "max_iter",
                           residual_increases=increases, wall_clock=time.perf_counter() - start)
    logger.info(f"KM on {F.label}: residual {r:.3e} after {trace.steps} steps ({trace.stop_reason}, "
                f"{trace.wall_clock:.2f}s)")
    return trace


def anchored_afps(F: ProductMap, anchor: ProductPoint, eps: float, inner_tol: float = 1e-10,
                  max_inner: int = ANCHORED_MAX_INNER, seed: Optional[int] = None,
                  progress: bool = False) -> AnchoredResult:
    """Fixed point of z -> (1 - eps) F z + eps anchor by Picard iteration from the anchor.

    The returned point z satisfies |G z - z| < inner_tol for the anchored map G,
    hence |F z - z| <= eps |F z - anchor| + inner_tol <= eps diam + inner_tol.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    _check_start(F, anchor)
    start = time.perf_counter()
    a = np.array(anchor.array)
    z = a.copy()
    residuals = []
    with tqdm(total=max_inner, desc=f"anchored {F.label}", disable=not progress) as pbar:
        for _ in range(max_inner):
            Fz = F.apply(z)
            residuals.append(float(F.norm(Fz - z)))
            z_next = (1.0 - eps) * Fz + eps * a
            if float(F.norm(z_next - z)) < inner_tol:
                break
            z = z_next
            pbar.update(1)
        else:
            raise InnerIterationLimitError(
                f"anchored iteration on {F.label} did not settle within {max_inner} steps; the map is likely expansive"
            )
    trace = IterationTrace(scheme="anchored", parameter=eps, residuals=residuals, final_point=z.tolist(), seed=seed,
                           converged=True, stop_reason="inner_tol", wall_clock=time.perf_counter() - start)
    logger.info(f"Anchored iteration on {F.label} (eps={eps:g}): residual {residuals[-1]:.3e} after "
                f"{len(residuals)} steps")
    return AnchoredResult(ProductPoint(z), residuals[-1], trace)
