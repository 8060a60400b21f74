from .registry import EXAMPLE_MAPPING, ExampleSpec, exact_check_passed, get_example
from .scalar import SIGMA, T0, TAU, PiecewiseAffine, discontinuous_f, sigma_scalar, tau_scalar
from .sequence_maps import baseline_maps, disc_f_map, example1_map, example1_T, example2_map, example2_S

__all__ = ["EXAMPLE_MAPPING", "ExampleSpec", "exact_check_passed", "get_example", "SIGMA", "T0", "TAU",
           "PiecewiseAffine", "discontinuous_f", "sigma_scalar", "tau_scalar", "baseline_maps", "disc_f_map",
           "example1_map", "example1_T", "example2_map", "example2_S"]
