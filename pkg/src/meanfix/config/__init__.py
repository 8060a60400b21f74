from .config_setup import AppConfig, ExperimentConfig, LogsConfig, read_config

__all__ = ["AppConfig", "ExperimentConfig", "LogsConfig", "read_config"]
