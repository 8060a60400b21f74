from .engine import anchored_afps, default_start, km_iterate, product_diameter
from .residuals import (
    chain_consistency,
    check_bounds,
    fixed_point_defect,
    fixed_point_system,
    gjp_chain_check,
    residual_family,
)

__all__ = ["anchored_afps", "default_start", "km_iterate", "product_diameter", "chain_consistency", "check_bounds",
           "fixed_point_defect", "fixed_point_system", "gjp_chain_check", "residual_family"]
