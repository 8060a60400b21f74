import logging
from typing import List, Tuple, Union

import numpy as np

from meanfix.exceptions import DegenerateSamplingError
from meanfix.spaces.vectors import BallDomain, lp_norm_array

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence]


class PairSampler:
    """Seeded source of ball points and point pairs.

    Draws mix three strategies in proportion `mix`: uniform in the ball,
    boundary (normalized to the radius, paired with a uniform point), and sparse pairs that agree except in
    one of at most `max_support` nonzero coordinates. The worst pairs for the
    example maps are sparse, so the last strategy carries most of the Lipschitz
    signal.

    An instance owns mutable RNG state; use `spawn` for parallel work.
    """

    MIX = (0.4, 0.4, 0.2)

    def __init__(self, domain: BallDomain, seed: SeedLike = 0, mix: Tuple[float, float, float] = MIX,
                 max_support: int = 3):
        self.domain = domain
        self.seed_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
        self.mix = np.asarray(mix, dtype=np.float64) / float(np.sum(mix))
        self.max_support = max(1, min(max_support, domain.dim))
        self._rng = np.random.default_rng(self.seed_seq)

    @property
    def seed(self):
        return self.seed_seq.entropy

    def spawn(self, count: int) -> List["PairSampler"]:
        return [PairSampler(self.domain, child, tuple(self.mix), self.max_support)
                for child in self.seed_seq.spawn(count)]

    def _directions(self, count: int) -> np.ndarray:
        # generalized-Gaussian coordinates give a uniform direction on the l^p sphere
        p = self.domain.p.p
        mags = self._rng.gamma(1.0 / p, 1.0, size=(count, self.domain.dim)) ** (1.0 / p)
        signs = self._rng.choice((-1.0, 1.0), size=mags.shape)
        raw = signs * mags
        norms = lp_norm_array(raw, p)
        # a zero draw is measure-zero; fall back to e_1
        raw[norms == 0, 0] = 1.0
        norms[norms == 0] = 1.0
        return raw / norms[:, None]

    def uniform(self, count: int) -> np.ndarray:
        radii = self.domain.radius * self._rng.random(count) ** (1.0 / self.domain.dim)
        return self.domain.center.coords + radii[:, None] * self._directions(count)

    def boundary(self, count: int) -> np.ndarray:
        return self.domain.center.coords + self.domain.radius * self._directions(count)

    def sparse_pairs(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        dim, r = self.domain.dim, self.domain.radius
        support = np.argsort(self._rng.random((count, dim)), axis=1)[:, :self.max_support]
        sizes = self._rng.integers(1, self.max_support + 1, size=count)
        rows = np.arange(count)
        offsets = np.zeros((count, dim))
        for slot in range(self.max_support):
            active = sizes > slot
            offsets[rows[active], support[active, slot]] = self._rng.uniform(-r, r, size=int(active.sum()))
        moved = support[rows, self._rng.integers(0, sizes)]
        other = offsets.copy()
        other[rows, moved] = self._rng.uniform(-r, r, size=count)
        center = self.domain.center.coords
        return self.domain.project(center + offsets), self.domain.project(center + other)

    def _counts(self, count: int) -> np.ndarray:
        return self._rng.multinomial(count, self.mix)

    def sample_points(self, count: int) -> np.ndarray:
        n_uniform, n_boundary, n_sparse = self._counts(count)
        return np.concatenate([self.uniform(n_uniform), self.boundary(n_boundary), self.sparse_pairs(n_sparse)[0]])

    def sample_pairs(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        n_uniform, n_boundary, n_sparse = self._counts(count)
        sx, sy = self.sparse_pairs(n_sparse)
        # boundary points are paired with interior ones
        xs = np.concatenate([self.uniform(n_uniform), self.boundary(n_boundary), sx])
        ys = np.concatenate([self.uniform(n_uniform), self.uniform(n_boundary), sy])
        return xs, ys

    def distinct_pairs(self, count: int, max_rounds: int = 4) -> Tuple[np.ndarray, np.ndarray]:
        """Pairs with x != y; coincident draws are skipped and resampled."""
        xs_all, ys_all, kept = [], [], 0
        for _ in range(max_rounds):
            xs, ys = self.sample_pairs(count - kept)
            keep = np.any(xs != ys, axis=1)
            xs_all.append(xs[keep])
            ys_all.append(ys[keep])
            kept += int(keep.sum())
            if kept >= count:
                break
        if kept == 0:
            raise DegenerateSamplingError(f"all {count} sampled pairs were coincident")
        if kept < count:
            logger.warning(f"Only {kept} of {count} sampled pairs were distinct after {max_rounds} rounds")
        return np.concatenate(xs_all), np.concatenate(ys_all)
