from .vectors import (
    BallDomain,
    PExponent,
    ProductPoint,
    SeqVec,
    convex_combine,
    in_ball,
    lp_norm,
    lp_norm_array,
    product_norm,
    product_norm_array,
)

__all__ = ["BallDomain", "PExponent", "ProductPoint", "SeqVec", "convex_combine", "in_ball", "lp_norm",
           "lp_norm_array", "product_norm", "product_norm_array"]
