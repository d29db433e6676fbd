import logging
import sys
from pathlib import Path
from typing import List, Optional

import click

from pnpreg.config.parser import parse_config, serialize
from pnpreg.config.presets import list_presets, load_preset
from pnpreg.config.settings import settings
from pnpreg.models.experiment import ExperimentConfig
from pnpreg.services.harness.plots import plot_trace
from pnpreg.storage.array_archive import EXPORT_FORMATS
from pnpreg.tasks import run_batch
from pnpreg.utils.errors import ConfigError, PnPError, SolverAbortError

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_SOLVER_ABORT = 3

DEFAULTS_EPILOG = "Config defaults (any key may be overridden in a config file):\n\n\b\n" + serialize(ExperimentConfig())


def _exit_code(error: Exception) -> int:
    if isinstance(error, ConfigError):
        return EXIT_CONFIG_ERROR
    if isinstance(error, SolverAbortError):
        return EXIT_SOLVER_ABORT
    return EXIT_FAILURE


def _load_configs(config_files: List[str], preset: Optional[str], seed: Optional[int]) -> List[ExperimentConfig]:
    configs = []
    if preset:
        configs.append(load_preset(preset).model_copy(update={"name": preset}))
    for path in config_files:
        config = parse_config(path)
        configs.append(config.model_copy(update={"name": Path(path).stem}))
    if seed is not None:
        configs = [
            c.model_copy(update={"problem": c.problem.model_copy(update={"seed": seed})})
            for c in configs
        ]
    return configs


@click.group()
def cli():
    """Plug-and-play iterative regularization experiments on simulated CT data."""
    logging.basicConfig(level=settings.LOG_LEVEL, format=settings.LOG_FORMAT)


@cli.command(epilog=DEFAULTS_EPILOG)
@click.argument("config_files", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option("--output-dir", type=click.Path(file_okay=False), default=None,
              help=f"Directory for trace and summary files [default: config value or {settings.OUTPUT_DIR}]")
@click.option("--preset", type=str, default=None, help="Run a shipped preset (see --list-presets)")
@click.option("--seed", type=int, default=None, help="Override problem.seed of every config")
@click.option("--list-presets", "show_presets", is_flag=True, help="List shipped presets and exit")
@click.option("--workers", type=int, default=settings.MAX_WORKERS, show_default=True,
              help="Experiments run concurrently")
@click.option("--export-arrays", type=click.Choice(EXPORT_FORMATS), default=None,
              help="Also write each run's phantom and noisy sinogram in this format")
def run(config_files, output_dir, preset, seed, show_presets, workers, export_arrays):
    """Run one experiment per CONFIG_FILE (and/or --preset)."""
    if show_presets:
        for name in list_presets():
            click.echo(name)
        return
    if not config_files and not preset:
        raise click.UsageError("give at least one config file or --preset")

    try:
        configs = _load_configs(list(config_files), preset, seed)
        results = run_batch(configs, output_dir=output_dir, max_workers=workers, export_arrays=export_arrays)
    except ConfigError as e:
        click.echo(f"config error:\n{e}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    except PnPError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(_exit_code(e))

    exit_code = 0
    for name, result in results.items():
        if isinstance(result, Exception):
            click.echo(f"{name}: failed: {result}", err=True)
            exit_code = max(exit_code, _exit_code(result))
            continue
        click.echo(
            f"{name}: selected k={result.selected_k}, family {result.family_label.value}, "
            f"trace {result.trace_csv_path}"
        )
    sys.exit(exit_code)


@cli.command()
def presets():
    """List shipped presets."""
    for name in list_presets():
        click.echo(name)


@cli.command()
@click.option("--preset", type=str, default=None, help="Print this preset instead of the bare defaults")
def defaults(preset):
    """Print a fully defaulted config in config-file form."""
    try:
        config = load_preset(preset) if preset else ExperimentConfig()
    except ConfigError as e:
        click.echo(f"config error:\n{e}", err=True)
        sys.exit(EXIT_CONFIG_ERROR)
    click.echo(serialize(config), nl=False)


@cli.command()
@click.argument("trace_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="PNG path [default: next to the CSV]")
def plot(trace_csv, output):
    """Plot MSE, descent inner product, alpha and CV error of a trace CSV."""
    try:
        path = plot_trace(trace_csv, output)
    except PnPError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(_exit_code(e))
    click.echo(str(path))


if __name__ == "__main__":
    cli()
