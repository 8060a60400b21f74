"""Sampled lower bounds for Lipschitz constants, and the self-map spot check."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np

from meanfix.constants import SAMPLE_SLACK
from meanfix.mappings.derived import iterate
from meanfix.mappings.mapping_base import MappingHandle
from meanfix.mappings.sampler import PairSampler
from meanfix.models import LipschitzEstimate, SelfMapReport
from meanfix.spaces.vectors import lp_norm_array

logger = logging.getLogger(__name__)

CHUNK = 20000


def _chunks(total: int, size: int = CHUNK):
    while total > 0:
        yield min(size, total)
        total -= size


def split_trials(trials: int, workers: int) -> List[int]:
    """Trial counts per worker; the remainder goes to the first workers."""
    base, extra = divmod(trials, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def _best_ratio(T: MappingHandle, sampler: PairSampler, trials: int) -> Tuple[float, int, np.ndarray, np.ndarray]:
    p = T.domain.p
    best, best_x, best_y, seen = -1.0, None, None, 0
    for size in _chunks(trials):
        xs, ys = sampler.distinct_pairs(size)
        ratios = lp_norm_array(T.apply(xs) - T.apply(ys), p) / lp_norm_array(xs - ys, p)
        idx = int(np.argmax(ratios))
        if ratios[idx] > best:
            best, best_x, best_y = float(ratios[idx]), xs[idx], ys[idx]
        seen += len(xs)
    return best, seen, best_x, best_y


def estimate_lipschitz(T: MappingHandle, sampler: PairSampler, trials: int, workers: int = 1) -> LipschitzEstimate:
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    if workers <= 1:
        results = [_best_ratio(T, sampler, trials)]
    else:
        shares = split_trials(trials, workers)
        children = sampler.spawn(workers)
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_best_ratio, T, child, share)
                       for child, share in zip(children, shares) if share > 0]
            results = [f.result() for f in futures]
    # first maximum in worker order
    best = max(results, key=lambda r: r[0])
    k_hat, _, x, y = best
    estimate = LipschitzEstimate(label=T.label, k_hat=k_hat, pairs_sampled=sum(r[1] for r in results),
                                 argmax_pair=(x.tolist(), y.tolist()), seed=sampler.seed)
    logger.debug(f"k_hat({T.label}) = {k_hat:.12g} over {estimate.pairs_sampled} pairs")
    return estimate


def estimate_power_constants(T: MappingHandle, n: int, sampler: PairSampler, trials: int, workers: int = 1,
                             top: Optional[int] = None) -> List[float]:
    """[k(T^0), k(T^1), ..., k(T^top)] with k(T^0) = 1 exactly.

    top defaults to max(1, n - 2), the powers the estimate-based condition needs;
    the residual chain of an n-part iterate needs top = n - 1.
    """
    top = max(1, n - 2) if top is None else max(1, top)
    constants = [1.0]
    for j, child in zip(range(1, top + 1), sampler.spawn(top)):
        constants.append(estimate_lipschitz(iterate(T, j), child, trials, workers).k_hat)
    return constants


def check_self_map(T: MappingHandle, sampler: PairSampler, points: int, slack: float = SAMPLE_SLACK) -> SelfMapReport:
    escapes, worst = 0, -np.inf
    for size in _chunks(points):
        images = T.apply(sampler.sample_points(size))
        overshoot = T.domain.distances(images) - T.domain.radius
        escapes += int(np.sum(overshoot > slack))
        worst = max(worst, float(overshoot.max()))
    if escapes:
        logger.warning(f"{T.label}: {escapes} of {points} sampled images left the ball (worst overshoot {worst:.3g})")
    return SelfMapReport(label=T.label, points=points, escapes=escapes, worst_overshoot=worst)
