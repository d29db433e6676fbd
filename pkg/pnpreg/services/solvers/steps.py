import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from pnpreg.models.denoising import DenoiserSpec
from pnpreg.models.imaging import Image
from pnpreg.models.solver import SigmaUpdate, SolverConfig
from pnpreg.services.core_ops.linalg import power_iteration_norm_sq, step_size_bound
from pnpreg.services.core_ops.operator import SparseOperator
from pnpreg.utils.errors import RejectedInputError, StepSizeError

logger = logging.getLogger(__name__)

# power iteration carries rounding, so the bound is checked with this relative slack
STEP_SIZE_RTOL = 1e-9


def resolve_step_size(A: SparseOperator, config: SolverConfig) -> Tuple[float, float]:
    """(tau, ||A||²) for a gradient-step solver, checking tau against 1/(2||A||²)."""
    norm_sq = power_iteration_norm_sq(A, config.power_iters, config.seed)
    bound = step_size_bound(norm_sq)
    if config.tau is None:
        if math.isinf(bound):
            raise RejectedInputError("zero operator: step size cannot be derived from ||A||")
        tau = config.tau_fraction * bound
    else:
        tau = config.tau
        # tau == bound is still a convergent step for the quadratic
        if tau > bound * (1.0 + STEP_SIZE_RTOL):
            raise StepSizeError(tau, bound)
    logger.info(f"Step size tau={tau:.6g} (bound {bound:.6g}, ||A||^2={norm_sq:.6g})")
    return tau, norm_sq


def momentum_sequence(n: int) -> Tuple[List[float], List[float]]:
    """t_0..t_n and alpha_1..alpha_n of the accelerated recurrence, t_0 = 1."""
    t = [1.0]
    alphas = []
    for _ in range(n):
        t_next = (1.0 + math.sqrt(1.0 + 4.0 * t[-1] ** 2)) / 2.0
        alphas.append((t[-1] - 1.0) / t_next)
        t.append(t_next)
    return t, alphas


def scaled_sigma(denoiser: DenoiserSpec, config: SolverConfig, scale: float) -> float:
    """sigma_k for the configured update policy; scale is tau (FBS) or 1/rho (ADMM)."""
    if config.sigma_update == SigmaUpdate.SCALED:
        return denoiser.sigma * scale
    return denoiser.sigma


def image_template(cols: int, x0: Optional[Image], image_shape: Optional[Tuple[int, int]]) -> Image:
    """Zero image matching the operator's columns: x0's shape, an explicit (height, width), a square, or one row."""
    if x0 is not None:
        if x0.data.size != cols:
            raise RejectedInputError(f"start image has {x0.data.size} pixels, operator has {cols} columns")
        return x0.like(np.zeros(cols))
    if image_shape is not None:
        height, width = image_shape
    else:
        side = math.isqrt(cols)
        height, width = (side, side) if side * side == cols else (1, cols)
    if height * width != cols:
        raise RejectedInputError(f"image shape {image_shape} does not match {cols} columns")
    return Image(width=width, height=height, data=np.zeros(cols))
