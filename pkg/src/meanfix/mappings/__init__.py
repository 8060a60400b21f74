from .derived import build_j, iterate, j_map, t_alpha, tau_alpha, tilde_t
from .lipschitz import check_self_map, estimate_lipschitz, estimate_power_constants
from .mapping_base import MappingHandle, ProductMap
from .multi_index import MultiIndex, collapse_zero_weights
from .sampler import PairSampler

__all__ = ["MappingHandle", "ProductMap", "MultiIndex", "PairSampler", "build_j", "iterate", "j_map", "t_alpha",
           "tau_alpha", "tilde_t", "collapse_zero_weights", "check_self_map", "estimate_lipschitz",
           "estimate_power_constants"]
