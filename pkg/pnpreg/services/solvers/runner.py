from typing import Callable, Optional, Tuple

from pnpreg.models.denoising import DenoiserSpec
from pnpreg.models.imaging import Image
from pnpreg.models.selection import Corridor
from pnpreg.models.solver import Algorithm, IterationTrace, SolverConfig
from pnpreg.services.core_ops.operator import SparseOperator
from pnpreg.services.solvers.admm import admm_pnp
from pnpreg.services.solvers.fbs import fast_fbs_pnp, fbs_pnp
from pnpreg.services.solvers.landweber import landweber
from pnpreg.services.solvers.monitor import IterateMonitor


def run_solver(
    A_fit: SparseOperator,
    b_fit,
    denoiser: DenoiserSpec,
    config: SolverConfig,
    monitor: Optional[IterateMonitor] = None,
    x0: Optional[Image] = None,
    score: Optional[Callable[[Image], float]] = None,
    image_shape: Optional[Tuple[int, int]] = None,
    corridor: Optional[Corridor] = None,
) -> IterationTrace:
    """Dispatch on config.algorithm; Landweber ignores the denoiser, only the FBS solvers use the corridor."""
    if config.algorithm == Algorithm.LANDWEBER:
        return landweber(A_fit, b_fit, config, monitor, x0, image_shape)
    if config.algorithm == Algorithm.ADMM_PNP:
        return admm_pnp(A_fit, b_fit, denoiser, config, monitor, x0, score, image_shape)
    solver = fbs_pnp if config.algorithm == Algorithm.FBS_PNP else fast_fbs_pnp
    return solver(A_fit, b_fit, denoiser, config, monitor, x0, score, image_shape, corridor)
