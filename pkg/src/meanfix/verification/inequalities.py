"""Sampled checks of the mean inequality and search for expansive pairs.

Sampling can only refute an inequality. Reports therefore say "violated" or
"no-violation-found", never that the inequality holds.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from meanfix.constants import NORM_TOL, SAMPLE_SLACK
from meanfix.mappings.lipschitz import CHUNK, split_trials
from meanfix.mappings.mapping_base import MappingHandle
from meanfix.mappings.multi_index import MultiIndex
from meanfix.mappings.sampler import PairSampler
from meanfix.models import MeanCheckReport, Violation, WitnessReport
from meanfix.spaces.vectors import lp_norm_array

logger = logging.getLogger(__name__)

MAX_REPORTED_VIOLATIONS = 20


def mean_slack(T: MappingHandle, alpha: MultiIndex, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """sum_k alpha_k |T^k x - T^k y|^p - |x - y|^p for each stacked pair."""
    p, q = alpha.p.p, T.domain.p
    x_powers, y_powers = T.powers(xs, alpha.n), T.powers(ys, alpha.n)
    lhs = sum(w * lp_norm_array(x_powers[k] - y_powers[k], q) ** p
              for k, w in enumerate(alpha.weights, start=1) if w > 0)
    return lhs - lp_norm_array(xs - ys, q) ** p


def _scan(T: MappingHandle, alpha: MultiIndex, sampler: PairSampler, trials: int,
          keep: int) -> Tuple[float, int, List[Tuple[float, np.ndarray, np.ndarray]]]:
    max_slack, count, worst = -np.inf, 0, []
    remaining = trials
    while remaining > 0:
        xs, ys = sampler.distinct_pairs(min(CHUNK, remaining))
        remaining -= len(xs)
        slack = mean_slack(T, alpha, xs, ys)
        max_slack = max(max_slack, float(slack.max()))
        bad = np.flatnonzero(slack > SAMPLE_SLACK)
        count += len(bad)
        worst.extend((float(slack[i]), xs[i], ys[i]) for i in bad)
        worst = sorted(worst, key=lambda v: -v[0])[:keep]
    return max_slack, count, worst


def check_mean_nonexpansive(T: MappingHandle, alpha: MultiIndex, trials: int, seed: int = 0,
                            sampler: Optional[PairSampler] = None, workers: int = 1,
                            keep: int = MAX_REPORTED_VIOLATIONS) -> MeanCheckReport:
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    sampler = sampler or PairSampler(T.domain, seed)
    if workers <= 1:
        results = [_scan(T, alpha, sampler, trials, keep)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_scan, T, alpha, child, share, keep)
                       for child, share in zip(sampler.spawn(workers), split_trials(trials, workers)) if share > 0]
            results = [f.result() for f in futures]

    worst = sorted((v for r in results for v in r[2]), key=lambda v: -v[0])[:keep]
    n_violations = sum(r[1] for r in results)
    report = MeanCheckReport(
        label=T.label, alpha=alpha.tolist(), p=alpha.p.p, trials=trials, seed=seed,
        max_slack=max(r[0] for r in results), n_violations=n_violations,
        violations=[Violation(x=x.tolist(), y=y.tolist(), slack=s) for s, x, y in worst],
        verdict="violated" if n_violations else "no-violation-found",
    )
    if n_violations:
        logger.warning(f"{T.label}: {n_violations} of {trials} pairs violate the ({alpha.tolist()}, "
                       f"{alpha.p.p:g}) mean inequality, max slack {report.max_slack:.3g}")
    return report


def expansion_ratio(T: MappingHandle, xs: np.ndarray, ys: np.ndarray, alpha: Optional[MultiIndex] = None) -> np.ndarray:
    """|Tx - Ty| / |x - y|, or the p-th root of the mean left side over |x - y| when alpha is given."""
    q = T.domain.p
    dist = lp_norm_array(xs - ys, q)
    if alpha is None:
        return lp_norm_array(T.apply(xs) - T.apply(ys), q) / dist
    p = alpha.p.p
    return np.maximum(mean_slack(T, alpha, xs, ys) + dist**p, 0.0) ** (1.0 / p) / dist


def find_expansion_witness(T: MappingHandle, trials: int, refine_steps: int = 200, seed: int = 0,
                           alpha: Optional[MultiIndex] = None, accel: float = 1.2,
                           progress: bool = False) -> Optional[WitnessReport]:
    """Best random pair, then a coordinatewise hill climb on the expansion ratio.

    Each refinement step moves one coordinate of x or y by one of four
    multiples of its own step size; a step size shrinks when no move helps.
    Candidates must stay in the ball and keep x != y.
    """
    domain = T.domain
    sampler = PairSampler(domain, seed)
    xs, ys = sampler.distinct_pairs(trials)
    ratios = expansion_ratio(T, xs, ys, alpha)
    best = int(np.argmax(ratios))
    point = np.concatenate([xs[best], ys[best]])
    value = float(ratios[best])
    dim = domain.dim
    stepsize = np.full(2 * dim, domain.radius / 4.0)
    factors = np.array([-accel, -1.0 / accel, 1.0 / accel, accel])

    for step in tqdm(range(refine_steps), desc=f"witness {T.label}", disable=not progress):
        i = step % (2 * dim)
        candidates = np.tile(point, (len(factors), 1))
        candidates[:, i] += factors * stepsize[i]
        cx, cy = candidates[:, :dim], candidates[:, dim:]
        ok = domain.contains_array(cx) & domain.contains_array(cy) & np.any(cx != cy, axis=1)
        if not ok.any():
            stepsize[i] /= accel
            continue
        cand_ratios = np.full(len(factors), -np.inf)
        cand_ratios[ok] = expansion_ratio(T, cx[ok], cy[ok], alpha)
        j = int(np.argmax(cand_ratios))
        if cand_ratios[j] > value:
            point, value = candidates[j], float(cand_ratios[j])
            stepsize[i] *= abs(factors[j])
        else:
            stepsize[i] /= accel

    if value <= 1.0 + NORM_TOL:
        logger.info(f"No expansive pair found for {T.label}; best ratio {value:.12g}")
        return None
    logger.info(f"Expansion witness for {T.label}: ratio {value:.6g}")
    return WitnessReport(label=T.label, x=point[:dim].tolist(), y=point[dim:].tolist(), ratio=value,
                         inequality="nonexpansive" if alpha is None else "mean", seed=seed)
