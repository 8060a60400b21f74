import logging
from typing import Dict, Optional, Sequence

import numpy as np

from meanfix.constants import CHAIN_REL_SLACK, NORM_TOL
from meanfix.exceptions import ConditionRefusedError, DimensionMismatchError
from meanfix.mappings.derived import j_map, resolve_exponents
from meanfix.mappings.mapping_base import MappingHandle
from meanfix.mappings.multi_index import MultiIndex
from meanfix.models import ChainCheck, ResidualReport
from meanfix.spaces.vectors import ProductPoint, SeqVec, lp_norm_array

logger = logging.getLogger(__name__)


def residual_family(T: MappingHandle, alpha: MultiIndex, pp: ProductPoint, exponents: Optional[Sequence[int]] = None,
                    k_hat: Optional[float] = None, factor: float = 10.0) -> ResidualReport:
    """Every residual that the product-space argument sends to zero along with |Jz - z|.

    With x = x_1 and xbar = sum_j alpha_j x_j these are |T^k_j xbar - x_j|,
    the chain |T^(k_(j+1) - 1) x - x_(j+1)|, |tau_alpha x - x|, |T_alpha z - z|
    for z = sum_j alpha_j T^(k_j - 1) x, and |Tx - x|. Passing k_hat also
    checks each against factor * max(1, k_hat) * |Jz - z|.
    """
    exponents = resolve_exponents(alpha, exponents)
    if pp.n != alpha.n:
        raise DimensionMismatchError(f"{pp.n} parts for a multi-index of length {alpha.n}")
    def norm(v: np.ndarray) -> float:
        return float(lp_norm_array(v, T.domain.p))

    parts, w, top = pp.array, alpha.weights, exponents[-1]

    primary = j_map(T, alpha, exponents).residual(parts)
    xbar = w @ parts
    bar_powers = T.powers(xbar, top)
    x = parts[0]
    x_powers = T.powers(x, top)

    r_parts = [norm(bar_powers[k] - part) for k, part in zip(exponents, parts)]
    r_chain = [norm(x_powers[k - 1] - part) for k, part in zip(exponents[1:], parts[1:])]
    z = sum(wj * x_powers[k - 1] for wj, k in zip(w, exponents))
    z_powers = T.powers(z, top)
    t_alpha_z = sum(wj * z_powers[k] for wj, k in zip(w, exponents))

    report = ResidualReport(primary=primary, exponents=list(exponents), r_parts=r_parts, r_chain=r_chain,
                            r_tau=norm(z_powers[1] - x), r_t_alpha=norm(t_alpha_z - z), r_T=norm(x_powers[1] - x))
    if k_hat is not None:
        return check_bounds(report, k_hat, factor)
    return report


def check_bounds(report: ResidualReport, k_hat: float, factor: float = 10.0) -> ResidualReport:
    bound = factor * max(1.0, k_hat) * report.primary
    over = {name: r for name, r in report.bounded_entries().items() if r > bound + NORM_TOL}
    if over:
        logger.warning(f"Residuals above {bound:.3e}: {over}")
    return report.model_copy(update={"k_hat": k_hat, "bound": bound, "bounds_ok": not over})


def fixed_point_system(T: MappingHandle, alpha: MultiIndex, pp: ProductPoint,
                       exponents: Optional[Sequence[int]] = None) -> Dict[str, float]:
    """Defects of T^k_j xbar = x_j, tau_alpha x_1 = x_1 and T_alpha z = z; all zero at a fixed point of J."""
    report = residual_family(T, alpha, pp, exponents)
    system = {f"T^{k} xbar - x_{j + 1}": r for j, (k, r) in enumerate(zip(report.exponents, report.r_parts))}
    system.update({"tau_alpha x_1 - x_1": report.r_tau, "T_alpha z - z": report.r_t_alpha})
    return system


def fixed_point_defect(T: MappingHandle, alpha: MultiIndex, pp: ProductPoint,
                       exponents: Optional[Sequence[int]] = None) -> float:
    return max(fixed_point_system(T, alpha, pp, exponents).values())


def gjp_chain_check(T: MappingHandle, alpha: MultiIndex, x: SeqVec, tau_residual: float) -> ChainCheck:
    """|Tx - x| <= |tau_alpha x - x| / (1 - alpha_2 alpha_1^(-1/p)) for (alpha, p)-nonexpansive T.

    Only the strict case alpha_2^p < alpha_1 is accepted; at equality the
    denominator vanishes and the estimate says nothing.
    """
    if alpha.n != 2:
        raise ConditionRefusedError(f"the chain estimate needs two weights, got {alpha.n}")
    p = alpha.p.p
    if alpha[2] ** p >= alpha[1] - NORM_TOL:
        raise ConditionRefusedError(
            f"alpha_2^p = {alpha[2] ** p:.6g} is not below alpha_1 = {alpha[1]:.6g}; the chain constant is not positive"
        )
    c = 1.0 - alpha[2] * alpha[1] ** (-1.0 / p)
    bound = tau_residual / c
    observed = float(lp_norm_array(T.apply(x.coords) - x.coords, T.domain.p))
    passed = observed <= bound * (1.0 + CHAIN_REL_SLACK)
    if not passed:
        logger.warning(f"Chain estimate failed for {T.label}: |Tx - x| = {observed:.6g} > {bound:.6g}")
    return ChainCheck(bound=bound, observed=observed, passed=passed)


def chain_consistency(report: ResidualReport, k_estimates: Sequence[float], slack: float = 1e-9) -> bool:
    """r_chain[j] <= k(T^j) r_1 + r_(j+1) for every chain entry.

    Only meaningful without collapsed exponents; k_estimates[j] estimates k(T^j).
    """
    checks = []
    for j, r in enumerate(report.r_chain, start=1):
        k = k_estimates[min(j, len(k_estimates) - 1)]
        checks.append(r <= k * report.r_parts[0] + report.r_parts[j] + slack)
    return bool(np.all(checks))
