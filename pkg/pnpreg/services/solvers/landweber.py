from typing import Optional, Tuple

from pnpreg.models.imaging import Image
from pnpreg.models.solver import Algorithm, IterationTrace, SolverConfig
from pnpreg.services.core_ops.operator import SparseOperator
from pnpreg.services.solvers.fbs import _require, gradient_iterations
from pnpreg.services.solvers.monitor import IterateMonitor


def landweber(
    A: SparseOperator,
    b_fit,
    config: SolverConfig,
    monitor: Optional[IterateMonitor] = None,
    x0: Optional[Image] = None,
    image_shape: Optional[Tuple[int, int]] = None,
) -> IterationTrace:
    """x_k = x_{k-1} - tau·2Aᵀ(Ax_{k-1} - b), started at zero."""
    _require(config, Algorithm.LANDWEBER)
    return gradient_iterations(A, b_fit, None, config, monitor, x0, None, False, image_shape)
