import logging
import os
from pathlib import Path
from typing import Optional, Union

from pnpreg.config.settings import settings
from pnpreg.models.experiment import ExperimentConfig, ExperimentResult
from pnpreg.services.harness.reporting import emit_trace_csv, summary_rows, write_summary
from pnpreg.services.selection.criteria import bind_criterion, criterion_for, select_stop
from pnpreg.services.selection.families import classify_family, default_corridor
from pnpreg.services.solvers.monitor import IterateMonitor
from pnpreg.services.solvers.runner import run_solver
from pnpreg.services.tomography.problem import build_problem
from pnpreg.storage.array_archive import export_problem_arrays
from pnpreg.utils.errors import ArchiveError, SolverAbortError

logger = logging.getLogger(__name__)


class ExperimentWorkflow:
    """Build the simulated problem, run the solver, score every iterate and write the reports."""

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def _prepare_output(self, output_dir: Optional[Union[str, Path]]) -> Path:
        target = Path(output_dir or self.config.output_dir or settings.OUTPUT_DIR)
        try:
            target.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ArchiveError(target, f"cannot create output directory: {e}") from e
        if not os.access(target, os.W_OK):
            raise ArchiveError(target, "output directory is not writable")
        return target

    def execute(
        self,
        output_dir: Optional[Union[str, Path]] = None,
        name: Optional[str] = None,
        export_arrays: Optional[str] = None,
    ) -> ExperimentResult:
        """Run the experiment; export_arrays ("csv" or "binary") also writes the phantom and sinogram."""
        config = self.config
        name = name or config.name
        out = self._prepare_output(output_dir)
        trace_path = out / f"{name}_trace.csv"
        summary_csv = out / f"{name}_summary.csv"
        summary_txt = out / f"{name}_summary.txt"
        logger.info(f"Starting experiment {name}: {config.solver.algorithm.value} with {config.denoiser.kind.value} denoiser")

        problem = build_problem(config.problem)
        exported = []
        if export_arrays:
            exported = export_problem_arrays(out, name, problem.truth, problem.sinogram, export_arrays)
        criterion = criterion_for(problem.sinogram, config.selection.kind, config.selection.eta)
        # alpha and sigma searches score candidates on the held-out rows
        cv_scorer = bind_criterion(
            criterion_for(problem.sinogram), problem.operator, problem.sinogram.data
        )
        monitor = IterateMonitor(problem.A_fit, problem.b_fit, problem.A_cv, problem.b_cv, problem.truth)
        corridor = config.corridor or default_corridor(problem.fit_delta)

        try:
            trace = run_solver(
                problem.A_fit,
                problem.b_fit,
                config.denoiser,
                config.solver,
                monitor=monitor,
                score=cv_scorer,
                image_shape=(problem.truth.height, problem.truth.width),
                corridor=corridor,
            )
        except SolverAbortError as e:
            if e.trace is not None and e.trace.records:
                emit_trace_csv(e.trace, trace_path)
                logger.error(f"Solver aborted; partial trace ({len(e.trace.records)} rows) flushed to {trace_path}")
            raise

        selected_k = select_stop(trace, criterion)
        trace.family_label = classify_family(trace, corridor)
        logger.info(f"Experiment {name}: selected k={selected_k}, family {trace.family_label.value}")

        emit_trace_csv(trace, trace_path)
        rows = summary_rows(trace, selected_k)
        write_summary(rows, summary_csv, summary_txt)

        return ExperimentResult(
            name=name,
            trace_csv_path=str(trace_path),
            summary_csv_path=str(summary_csv),
            summary_txt_path=str(summary_txt),
            summary=rows,
            selected_k=selected_k,
            family_label=trace.family_label,
            trace=trace,
            exported_paths=[str(p) for p in exported],
        )


def run_experiment(
    config: ExperimentConfig,
    output_dir: Optional[Union[str, Path]] = None,
    name: Optional[str] = None,
    export_arrays: Optional[str] = None,
) -> ExperimentResult:
    return ExperimentWorkflow(config).execute(output_dir=output_dir, name=name, export_arrays=export_arrays)
