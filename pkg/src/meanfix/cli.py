"""meanfix command line: examples verify, afps run, conditions sweep, lipschitz, witness."""

import functools
import sys
from typing import Callable, Optional

import click
from dotenv import load_dotenv
from loguru import logger
from pydantic import ValidationError

from meanfix.config.config_setup import AppConfig, read_config
from meanfix.exceptions import ConfigError, MeanFixError, UnknownExampleError
from meanfix.experiments import MeanFixLab
from meanfix.utils import init_run_logger, make_run_id

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG = 0, 1, 2

# click option name -> ExperimentConfig field
OVERRIDES = {"example": "example", "alpha": "alpha", "p": "p", "dim": "dim", "scheme": "scheme", "lam": "lam",
             "eps": "eps", "max_iter": "max_iter", "tol": "tol", "seed": "seed", "trials": "trials",
             "workers": "workers", "out": "out", "fmt": "format", "refine_steps": "refine_steps",
             "grid_step": "grid_step", "n": "n"}


def common_options(func: Callable) -> Callable:
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False),
                     help="YAML or JSON config file; flags override its values."),
        click.option("--example", help="Registry id of the map."),
        click.option("--alpha", help="Comma separated weights, e.g. 0.5,0.5."),
        click.option("--p", type=float, help="Exponent of the mean inequality."),
        click.option("--dim", type=int, help="Truncation dimension."),
        click.option("--seed", type=int, envvar="MEANFIX_SEED", help="Seed of every random draw; env MEANFIX_SEED."),
        click.option("--trials", type=int, help="Sampled pairs or points per check."),
        click.option("--workers", type=int, help="Sampling threads."),
        click.option("--out", type=click.Path(dir_okay=False), help="Output file."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), help="Output format."),
        click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"]), help="Log level."),
        click.option("--progress/--no-progress", default=False, help="Show progress bars."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def load_app_config(config_path: Optional[str]) -> AppConfig:
    return read_config(config_path) if config_path else AppConfig()


def run_command(command: str, method: str, config_path: Optional[str], log_level: Optional[str], progress: bool,
                **flags) -> int:
    """Build the config, run one lab method, write the report and return the exit code."""
    try:
        app_config = load_app_config(config_path)
        overrides = {OVERRIDES[k]: v for k, v in flags.items() if v is not None}
        experiment = app_config.experiment.with_overrides(**overrides)
        logs = app_config.logs
        if log_level:
            logs = logs.model_copy(update={"log_level": log_level})
        logs.init_formatter()
        logs.run_id = make_run_id(command, experiment.example, experiment.seed)
        init_run_logger(logs.log_level, logs.run_id)
        lab = MeanFixLab(experiment, logs, command, progress=progress)
    except (ConfigError, UnknownExampleError, ValidationError, OSError, MeanFixError) as e:
        click.secho(f"Invalid configuration: {e}", fg="red", err=True)
        click.echo("Try 'meanfix --help' for usage.", err=True)
        return EXIT_CONFIG

    try:
        document, table = getattr(lab, method)()
    except MeanFixError as e:
        logger.error(f"{command} failed: {e}")
        lab.trace.trace_check_event(f"{command}-error", False, error=str(e), kind=type(e).__name__)
        lab.finish()
        return EXIT_CHECK_FAILED

    try:
        path = lab.write(document, table)
        lab.finish()
    except (ConfigError, OSError) as e:
        click.secho(f"Could not write report: {e}", fg="red", err=True)
        return EXIT_CONFIG

    if lab.trace.passed:
        click.secho(f"{command}: all checks passed, report in {path}", fg="green")
        return EXIT_OK
    click.secho(f"{command}: failed checks {', '.join(lab.trace.failed)}; report in {path}", fg="red", err=True)
    return EXIT_CHECK_FAILED


def exits(command: str, method: str):
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(**kwargs):
            sys.exit(run_command(command, method, **kwargs))

        return wrapper

    return decorator


@click.group()
@click.version_option(package_name="meanfix")
def cli():
    """Numerical lab for mean nonexpansive mappings."""
    load_dotenv()


@cli.group()
def examples():
    """Registered example maps."""


@examples.command("verify")
@common_options
@click.option("--refine-steps", type=int, help="Hill-climb steps of the witness search.")
@exits("verify", "verify_examples")
def examples_verify(**kwargs):
    """Exact values, self-map, mean inequality and expansion witness of one example."""


@cli.group()
def afps():
    """Approximate fixed point sequences."""


@afps.command("run")
@common_options
@click.option("--scheme", type=click.Choice(["km", "anchored"]), help="Iteration scheme.")
@click.option("--lambda", "lam", type=float, help="Krasnoselskii-Mann averaging parameter.")
@click.option("--eps", type=float, help="Anchor weight of the anchored scheme.")
@click.option("--max-iter", type=int, help="Step cap of the KM iteration.")
@click.option("--tol", type=float, help="Residual tolerance.")
@exits("afps", "run_afps")
def afps_run(**kwargs):
    """Iterate J on the product space and report the terminal residual family."""


@cli.group()
def conditions():
    """Closed-form sufficient conditions on the weights."""


@conditions.command("sweep")
@common_options
@click.option("--n", type=int, help="Number of weights.")
@click.option("--grid-step", type=float, help="Lattice step of the weight simplex.")
@exits("sweep", "sweep_conditions")
def conditions_sweep(**kwargs):
    """Evaluate every applicable condition over the weight simplex."""


@cli.command("lipschitz")
@common_options
@exits("lipschitz", "lipschitz_report")
def lipschitz(**kwargs):
    """Sampled Lipschitz constants of T, T^2, T_alpha and tau_alpha."""


@cli.command("witness")
@common_options
@click.option("--refine-steps", type=int, help="Hill-climb steps of the witness search.")
@exits("witness", "witness")
def witness(**kwargs):
    """Search for pairs that T expands."""


def main():
    cli(prog_name="meanfix")


if __name__ == "__main__":
    main()
