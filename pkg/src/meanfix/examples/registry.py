"""Example maps addressable by string id, with the exact values each one must reproduce."""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from meanfix.constants import AFFINE, DISC_F, EX1_L1, EX2_L2, IDENTITY, NORM_TOL, SHIFT_AVERAGE, ExactCheck
from meanfix.examples.scalar import SIGMA, T0, TAU
from meanfix.examples.sequence_maps import baseline_maps, disc_f_map, example1_map, example2_map
from meanfix.exceptions import UnknownExampleError
from meanfix.mappings.derived import iterate, t_alpha, tau_alpha
from meanfix.mappings.mapping_base import MappingHandle
from meanfix.mappings.multi_index import MultiIndex
from meanfix.spaces.vectors import lp_norm_array

HALF = MultiIndex((0.5, 0.5), 1.0)
# 10^6 uniform points of (0, 1] together with 0 itself
DISC_F_GRID_SIZE = 10**6 + 1
DISC_F_ALPHAS = ((0.5, 0.5), (0.3, 0.7), (0.9, 0.1))


def _vec(dim: int, entries: Dict[int, float]) -> List[float]:
    """A coordinate list from 1-based nonzero entries."""
    out = np.zeros(dim)
    for k, v in entries.items():
        out[k - 1] = v
    return out.tolist()


def _at(T: MappingHandle, entries: Dict[int, float]) -> List[float]:
    return T.apply(np.array(_vec(T.domain.dim, entries))).tolist()


def _ex1_reference(T: MappingHandle) -> List[ExactCheck]:
    d = T.domain.dim
    e3 = np.array(_vec(d, {3: 1.0}))
    tau_e3 = tau_alpha(T, HALF).apply(e3)
    t_alpha_e3 = t_alpha(T, HALF).apply(e3)
    return [
        ExactCheck("T e3", _at(T, {3: 1.0}), _vec(d, {2: 2.0 / 3.0})),
        ExactCheck("T^2 e3", _at(iterate(T, 2), {3: 1.0}), _vec(d, {1: 1.0 / 3.0})),
        ExactCheck("T_alpha e3", t_alpha_e3.tolist(), _vec(d, {1: 1.0 / 6.0, 2: 1.0 / 3.0})),
        ExactCheck("tau_alpha e3", tau_e3.tolist(), _vec(d, {2: 1.0 / 3.0})),
        ExactCheck("|tau_alpha e3 - T_alpha e3|_1", [float(lp_norm_array(tau_e3 - t_alpha_e3, 1))], [1.0 / 6.0]),
        ExactCheck("tau(1/3)", [float(TAU.evaluate(1.0 / 3.0))], [0.0]),
        ExactCheck("tau(2/3)", [float(TAU.evaluate(2.0 / 3.0))], [1.0 / 3.0]),
        ExactCheck("T 0", _at(T, {}), _vec(d, {})),
    ]


def _ex2_reference(S: MappingHandle) -> List[ExactCheck]:
    d = S.domain.dim
    sx, sy = _at(S, {2: 1.0}), _at(S, {2: T0})
    ratio = float(lp_norm_array(np.subtract(sx, sy), 2)) / (1.0 - T0)
    return [
        ExactCheck("S e3", _at(S, {3: 1.0}), _vec(d, {2: float(np.sqrt(2.0 / 3.0))})),
        ExactCheck("S 0", _at(S, {}), _vec(d, {})),
        ExactCheck("sigma(t0)", [float(SIGMA.evaluate(T0))], [0.0]),
        ExactCheck("sigma(1)", [float(SIGMA.evaluate(1.0))], [1.0]),
        ExactCheck("|S e2 - S t0 e2|_2 / |e2 - t0 e2|_2", [ratio], [float(np.sqrt(2.0))]),
    ]


def disc_f_grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, DISC_F_GRID_SIZE)[:, None]


def _disc_f_reference(f: MappingHandle) -> List[ExactCheck]:
    grid = disc_f_grid()
    checks = [
        ExactCheck("f(0)", _at(f, {}), [1.0]),
        ExactCheck("f(1/2)", f.apply(np.array([0.5])).tolist(), [0.0]),
        ExactCheck("f^2(0)", iterate(f, 2).apply(np.array([0.0])).tolist(), [0.0]),
        ExactCheck("f^2(1/2)", iterate(f, 2).apply(np.array([0.5])).tolist(), [1.0]),
    ]
    for weights in DISC_F_ALPHAS:
        composite = tau_alpha(f, MultiIndex(weights, 1.0)).apply(grid)
        checks.append(ExactCheck(f"max |tau_alpha(x)| on grid, alpha={list(weights)}",
                                 [float(np.max(np.abs(composite)))], [0.0]))
    return checks


def _identity_reference(T: MappingHandle) -> List[ExactCheck]:
    return [ExactCheck("I e1", _at(T, {1: 1.0}), _vec(T.domain.dim, {1: 1.0}))]


def _affine_reference(T: MappingHandle) -> List[ExactCheck]:
    c = T.apply(np.zeros(T.domain.dim))
    return [ExactCheck("H(2c)", T.apply(2.0 * c).tolist(), (2.0 * c).tolist())]


def _shift_average_reference(T: MappingHandle) -> List[ExactCheck]:
    return [ExactCheck("A e2", _at(T, {2: 1.0}), _vec(T.domain.dim, {1: 0.5, 2: 0.5}))]


def exact_check_passed(check: ExactCheck, tol: float = NORM_TOL) -> bool:
    return bool(np.max(np.abs(np.subtract(check.observed, check.expected))) <= tol)


@dataclass(frozen=True)
class ExampleSpec:
    """What a registered example is and what verifying it should find.

    `factory(dim, p)` builds the map; p only matters for baselines, whose ball
    lives in the l^p space of the run.
    """

    example_id: str
    description: str
    factory: Callable[[int, float], MappingHandle]
    default_alpha: Tuple[float, ...]
    ambient_p: Optional[float]
    reference: Callable[[MappingHandle], List[ExactCheck]]
    fixed_dim: Optional[int] = None
    mean_nonexpansive: bool = True
    witness_threshold: Optional[float] = None

    def build(self, dim: int, p: float = 1.0) -> MappingHandle:
        return self.factory(self.fixed_dim or dim, p)

    def space_p(self, p: float) -> float:
        return self.ambient_p if self.ambient_p is not None else p

    def default_multi_index(self) -> MultiIndex:
        return MultiIndex(self.default_alpha, self.ambient_p or 1.0)


EXAMPLE_MAPPING: Dict[str, ExampleSpec] = {
    EX1_L1: ExampleSpec(EX1_L1, "weighted left shift with tau on the unit ball of l^1",
                        lambda dim, p: example1_map(dim), (0.5, 0.5), 1.0, _ex1_reference,
                        witness_threshold=1.5),
    EX2_L2: ExampleSpec(EX2_L2, "weighted left shift with sigma on the unit ball of l^2",
                        lambda dim, p: example2_map(dim), (0.5, 0.5), 2.0, _ex2_reference,
                        witness_threshold=1.2),
    DISC_F: ExampleSpec(DISC_F, "indicator of the origin on [0, 1]", lambda dim, p: disc_f_map(), (0.5, 0.5), 1.0,
                        _disc_f_reference, fixed_dim=1, mean_nonexpansive=False, witness_threshold=1.5),
    AFFINE: ExampleSpec(AFFINE, "x -> x/2 + c", lambda dim, p: baseline_maps("affine-contraction", dim, p),
                        (0.6, 0.4), None, _affine_reference),
    IDENTITY: ExampleSpec(IDENTITY, "identity", lambda dim, p: baseline_maps("identity", dim, p), (0.5, 0.5), None,
                          _identity_reference),
    SHIFT_AVERAGE: ExampleSpec(SHIFT_AVERAGE, "x -> (x + Lx)/2 with L the left shift",
                               lambda dim, p: baseline_maps("coordinate-shift-average", dim, p), (0.5, 0.5), None,
                               _shift_average_reference),
}


def get_example(example_id: str) -> ExampleSpec:
    try:
        return EXAMPLE_MAPPING[example_id]
    except KeyError:
        raise UnknownExampleError(f"unknown example {example_id!r}; choose one of {sorted(EXAMPLE_MAPPING)}") from None
