import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from meanfix.constants import (
    AFFINE,
    CONTRACTION_TOL,
    DEFAULT_AFPS_DIM,
    DEFAULT_PROPERTY_DIM,
    DEMO_TOL,
    IDENTITY,
    SHIFT_AVERAGE,
)
from meanfix.examples.registry import ExampleSpec, get_example
from meanfix.exceptions import ConfigError
from meanfix.mappings.multi_index import MultiIndex
from meanfix.utils import RunIdAwareLogFormatter, init_settings
from meanfix.verification.conditions import lattice_size

logger = logging.getLogger(__name__)

BASELINES = (AFFINE, IDENTITY, SHIFT_AVERAGE)
# file sections that all feed ExperimentConfig
EXPERIMENT_SECTIONS = ("experiment", "afps", "sampling", "verification", "output")


class LogsConfig(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    log_dir: str = Field(default="logs", description="Directory to store logs and event traces")
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(default="INFO",
                                                                                description="Logging level")
    event_trace_loc: str = Field(default="traces", description="Sub directory to store experiment event traces")
    rid_log_formatter: Optional[RunIdAwareLogFormatter] = Field(
        default=None, exclude=True,
        description="Run id aware log formatter which prepends the current run id to every log message")

    @property
    def run_id(self) -> str:
        return self.rid_log_formatter.run_id if self.rid_log_formatter else ""

    @run_id.setter
    def run_id(self, run_id: str):
        self.rid_log_formatter.run_id = run_id

    def init_formatter(self):
        self.rid_log_formatter = init_settings(logs_dir=self.log_dir, log_level=self.log_level)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    example: str = Field(default="ex1-l1", description="Registry id of the map under study")
    dim: Optional[int] = Field(default=None, description="Truncation dimension; 32 for afps runs and 16 otherwise")
    alpha: Optional[List[float]] = Field(default=None, description="Weights of the multi-index; example default if unset")
    p: Optional[float] = Field(default=None, description="Exponent of the mean inequality; example default if unset")
    scheme: Literal["km", "anchored"] = Field(default="km", description="Iteration scheme for afps runs")
    lam: float = Field(default=0.5, alias="lambda", description="Krasnoselskii-Mann averaging parameter")
    eps: float = Field(default=1e-3, description="Anchor weight of the anchored scheme")
    max_iter: int = Field(default=100000, description="Step cap of the KM iteration")
    tol: Optional[float] = Field(default=None,
                                 description="Residual tolerance; 1e-3 for the examples and 1e-10 for baselines")
    seed: int = Field(default=0, description="Seed of every random draw in the run")
    trials: int = Field(default=100000, description="Sampled pairs or points per check")
    workers: int = Field(default=1, description="Sampling threads, each with its own spawned seed")
    refine_steps: int = Field(default=200, description="Hill-climb steps of the witness search")
    grid_step: float = Field(default=0.01, description="Lattice step of the conditions sweep")
    n: Optional[int] = Field(default=None, description="Number of weights in the conditions sweep")
    out: Optional[str] = Field(default=None, description="Output path; a file name derived from the run id if unset")
    format: Literal["csv", "json"] = Field(default="json", description="Output format")

    @field_validator("alpha", mode="before")
    @classmethod
    def parse_alpha(cls, value: Any):
        if isinstance(value, str):
            try:
                return [float(tok) for tok in value.split(",") if tok.strip()]
            except ValueError as e:
                raise ValueError(f"cannot parse weights from {value!r}") from e
        return value

    @model_validator(mode="after")
    def check_ranges(self) -> "ExperimentConfig":
        spec = self.example_spec
        if self.p is not None and self.p < 1:
            raise ValueError(f"p must be at least 1, got {self.p}")
        if self.alpha is not None:
            self.multi_index()
        if self.dim is not None and spec.fixed_dim is None and self.dim < 3:
            raise ValueError(f"{self.example} needs dim >= 3, got {self.dim}")
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"lambda must lie in (0, 1), got {self.lam}")
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if self.tol is not None and self.tol < 0:
            raise ValueError(f"tol must be nonnegative, got {self.tol}")
        for name in ("max_iter", "trials", "workers", "refine_steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1, got {getattr(self, name)}")
        lattice_size(self.grid_step)
        if self.n is not None and self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        return self

    @property
    def example_spec(self) -> ExampleSpec:
        try:
            return get_example(self.example)
        except KeyError as e:
            raise ValueError(str(e)) from None

    def resolved_p(self) -> float:
        return self.p if self.p is not None else (self.example_spec.ambient_p or 1.0)

    def resolved_dim(self, command: str = "") -> int:
        spec = self.example_spec
        if spec.fixed_dim is not None:
            return spec.fixed_dim
        if self.dim is not None:
            return self.dim
        return DEFAULT_AFPS_DIM if command == "afps" else DEFAULT_PROPERTY_DIM

    def resolved_tol(self) -> float:
        if self.tol is not None:
            return self.tol
        return CONTRACTION_TOL if self.example in BASELINES else DEMO_TOL

    def multi_index(self) -> MultiIndex:
        weights = self.alpha if self.alpha is not None else self.example_spec.default_alpha
        return MultiIndex(weights, self.resolved_p())

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        data = self.model_dump(by_alias=True)
        data.update({("lambda" if k == "lam" else k): v for k, v in overrides.items() if v is not None})
        return ExperimentConfig.model_validate(data)


class AppConfig(BaseModel):
    logs: LogsConfig = Field(default_factory=LogsConfig, description="Configuration for logs and event traces")
    experiment: ExperimentConfig = Field(default_factory=ExperimentConfig,
                                         description="Experiment parameters, before command line overrides")


def _load_raw(config_path: str) -> Dict[str, Any]:
    suffix = Path(config_path).suffix.lower()
    with open(config_path, "r") as f:
        if suffix in (".yaml", ".yml"):
            data = yaml.safe_load(f)
        elif suffix == ".json":
            data = json.load(f)
        else:
            raise ConfigError(f"unsupported config format {suffix!r}; use .yaml, .yml or .json")
    if not isinstance(data, dict):
        raise ConfigError(f"{config_path} must hold a mapping of sections")
    return data


def read_config(config_path: str, model_class=AppConfig) -> AppConfig:
    logger.info(f"Reading app config from {config_path}")
    data = _load_raw(config_path)
    unknown = set(data) - set(EXPERIMENT_SECTIONS) - {"logging"}
    if unknown:
        raise ConfigError(f"unknown config sections {sorted(unknown)}")
    experiment: Dict[str, Any] = {}
    for section in EXPERIMENT_SECTIONS:
        experiment.update(data.get(section) or {})
    return model_class.model_validate({"logs": data.get("logging") or {}, "experiment": experiment})
