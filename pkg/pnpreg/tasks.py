import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Optional, Union

from tqdm import tqdm

from pnpreg.config.settings import settings
from pnpreg.models.experiment import ExperimentConfig, ExperimentResult
from pnpreg.services.harness.workflow import run_experiment
from pnpreg.utils.errors import ConfigError, PnPError

logger = logging.getLogger(__name__)


def run_batch(
    configs: List[ExperimentConfig],
    output_dir: Optional[Union[str, Path]] = None,
    max_workers: Optional[int] = None,
    show_progress: Optional[bool] = None,
    export_arrays: Optional[str] = None,
) -> Dict[str, Union[ExperimentResult, PnPError]]:
    """
    Run several experiments in parallel, one thread per configuration.

    Args:
        configs: Experiment configurations; names must be unique, they key the output files
        output_dir: Directory shared by all runs (defaults to each config's own)
        max_workers: Thread count, defaults to settings.MAX_WORKERS
        show_progress: Show a tqdm bar, defaults to settings.SHOW_PROGRESS
        export_arrays: "csv" or "binary" to also write each run's phantom and sinogram

    Returns:
        Dictionary mapping experiment name to its result, or to the error that stopped it
    """
    names = [c.name for c in configs]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ConfigError([(None, name, "experiment name used more than once") for name in duplicates])

    max_workers = max_workers or settings.MAX_WORKERS
    show_progress = settings.SHOW_PROGRESS if show_progress is None else show_progress
    results: Dict[str, Union[ExperimentResult, PnPError]] = {}

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_name = {
            executor.submit(run_experiment, config, output_dir, None, export_arrays): config.name
            for config in configs
        }
        progress = tqdm(total=len(configs), desc="experiments", disable=not show_progress)
        for future in as_completed(future_to_name):
            name = future_to_name[future]
            try:
                results[name] = future.result()
            except PnPError as e:
                logger.error(f"Experiment {name} failed: {e}")
                results[name] = e
            progress.update(1)
        progress.close()

    return {name: results[name] for name in names}
