from .config.config_setup import AppConfig, ExperimentConfig, LogsConfig, read_config
from .examples import get_example
from .exceptions import MeanFixError
from .experiments import MeanFixLab
from .mappings import MappingHandle, MultiIndex, ProductMap
from .spaces import BallDomain, ProductPoint, SeqVec

__all__ = ["AppConfig", "ExperimentConfig", "LogsConfig", "read_config", "get_example", "MeanFixError", "MeanFixLab",
           "MappingHandle", "MultiIndex", "ProductMap", "BallDomain", "ProductPoint", "SeqVec"]
