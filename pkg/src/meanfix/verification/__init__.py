from .conditions import (
    alpha1_grid,
    compare_n3_bounds,
    cond_gjp2,
    cond_gjp_general,
    cond_gjp_n3_improved,
    cond_n3,
    cond_remark_general,
    gjp_general_sides,
    lattice_size,
    mean_lipschitz_bounds,
    naive_tau_bound,
    simplex_grid,
)
from .inequalities import check_mean_nonexpansive, expansion_ratio, find_expansion_witness, mean_slack

__all__ = ["alpha1_grid", "compare_n3_bounds", "cond_gjp2", "cond_gjp_general", "cond_gjp_n3_improved", "cond_n3",
           "cond_remark_general", "gjp_general_sides", "lattice_size", "mean_lipschitz_bounds", "naive_tau_bound",
           "simplex_grid", "check_mean_nonexpansive", "expansion_ratio", "find_expansion_witness", "mean_slack"]
