import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from pnpreg.models.denoising import DenoiserSpec
from pnpreg.models.imaging import Image
from pnpreg.models.selection import Corridor
from pnpreg.models.solver import Algorithm, Attenuation, IterationRecord, IterationTrace, SolverConfig
from pnpreg.services.core_ops.operator import SparseOperator, as_vector, discrepancy, grad_ls
from pnpreg.services.denoisers.denoiser import denoise
from pnpreg.services.solvers.attenuation import attenuate_combined, attenuate_gamma, attenuate_select, select_sigma
from pnpreg.services.solvers.monitor import IterateMonitor
from pnpreg.services.solvers.steps import image_template, resolve_step_size, scaled_sigma
from pnpreg.utils.errors import RejectedInputError, SolverAbortError

logger = logging.getLogger(__name__)

ImageScorer = Callable[[Image], float]


def _require(config: SolverConfig, *algorithms: Algorithm) -> None:
    if config.algorithm not in algorithms:
        names = ", ".join(a.value for a in algorithms)
        raise RejectedInputError(f"config.algorithm is {config.algorithm.value}, expected {names}")


def _needs_score(config: SolverConfig, score: Optional[ImageScorer]) -> None:
    selects = config.attenuation in (Attenuation.SELECT_ALPHA, Attenuation.COMBINED)
    if score is None and (selects or config.select_sigma):
        raise RejectedInputError("alpha and sigma selection need a selection criterion")


def gradient_iterations(
    A: SparseOperator,
    b_fit,
    denoiser: Optional[DenoiserSpec],
    config: SolverConfig,
    monitor: Optional[IterateMonitor] = None,
    x0: Optional[Image] = None,
    score: Optional[ImageScorer] = None,
    momentum: bool = False,
    image_shape: Optional[Tuple[int, int]] = None,
    corridor: Optional[Corridor] = None,
) -> IterationTrace:
    """Explicit gradient step on D followed by an optional (attenuated) denoising step
    and an optional momentum step. denoiser=None gives plain Landweber.

    With config.corridor_guard, alpha selection is restricted by the corridor:
    above eps2 only gamma-bounded (descent) blends are allowed, at or below eps2
    only blends whose next discrepancy stays at or above eps1.
    """
    b_fit = as_vector(b_fit)
    if denoiser is not None:
        _needs_score(config, score)
    guard = corridor if config.corridor_guard else None
    if config.corridor_guard and corridor is None:
        raise RejectedInputError("corridor_guard needs a corridor")
    template = image_template(A.cols, x0, image_shape)
    tau, norm_sq = resolve_step_size(A, config)
    z_prev = template.like(np.zeros(A.cols) if x0 is None else x0.data.copy())
    trace = IterationTrace(
        config=config, tau_used=tau, norm_sq=norm_sq, initial_discrepancy=discrepancy(A, z_prev, b_fit)
    )
    previous_discrepancy = trace.initial_discrepancy
    t_prev = 1.0
    logger.info(f"Starting {config.algorithm.value}: {config.max_iters} iterations on {A.rows}x{A.cols}")

    for k in range(1, config.max_iters + 1):
        step = -tau * grad_ls(A, z_prev, b_fit)
        x_data = z_prev.data + step
        if not np.all(np.isfinite(x_data)):
            trace.aborted = True
            raise SolverAbortError(f"non-finite iterate at k={k}", trace=trace)
        x = template.like(x_data)
        grad_step_norm = float(np.linalg.norm(x_data - z_prev.data))

        momentum_k = None
        if momentum:
            t_k = (1.0 + math.sqrt(1.0 + 4.0 * t_prev ** 2)) / 2.0
            momentum_k = (t_prev - 1.0) / t_k
            t_prev = t_k

        def extrapolate(candidate: Image) -> Image:
            if momentum_k is None:
                return candidate
            return template.like(candidate.data + momentum_k * (candidate.data - z_prev.data))

        sigma_used = 0.0
        alpha = 1.0
        if denoiser is None:
            z = x
            denoise_change = 0.0
        else:
            sigma_used = scaled_sigma(denoiser, config, tau)
            if config.select_sigma:
                sigma_used = select_sigma(x, denoiser, config.sigma_range, config.sigma_grid_size, score)
            Hx = denoise(denoiser.with_sigma(sigma_used), x)
            denoise_change = float(np.linalg.norm(Hx.data - x_data))
            above_corridor = guard is not None and previous_discrepancy > guard.eps2
            if config.attenuation == Attenuation.GAMMA:
                z, alpha = attenuate_gamma(x, Hx, grad_step_norm, config.gamma)
            elif config.attenuation == Attenuation.COMBINED or above_corridor:
                z, alpha = attenuate_combined(x, Hx, grad_step_norm, config.gamma, score, config.alpha_grid)
            elif config.attenuation == Attenuation.SELECT_ALPHA and guard is not None:
                z, alpha = attenuate_select(
                    x, Hx, score, config.alpha_grid,
                    admissible=lambda c: discrepancy(A, extrapolate(c), b_fit) >= guard.eps1,
                )
            elif config.attenuation == Attenuation.SELECT_ALPHA:
                z, alpha = attenuate_select(x, Hx, score, config.alpha_grid)
            else:
                z = Hx
        z = extrapolate(z)

        inner_product = float((z.data - z_prev.data) @ step)
        record = IterationRecord(
            k=k,
            x=x if config.keep_iterates else None,
            z=z if config.keep_iterates else None,
            inner_product=inner_product,
            grad_step_norm=grad_step_norm,
            denoise_change=denoise_change,
            alpha_used=alpha,
            discrepancy=discrepancy(A, z, b_fit),
            sigma_used=sigma_used,
            momentum=momentum_k,
            **(monitor.evaluate(z) if monitor is not None else {}),
        )
        trace.append(record)

        if k % config.log_every == 0:
            logger.debug(
                f"k={k}: D={record.discrepancy:.6g} <d,-grad>={inner_product:.4g} "
                f"|step|={grad_step_norm:.4g} |H(x)-x|={denoise_change:.4g} alpha={alpha:.4g}"
            )
        z_prev = z
        previous_discrepancy = record.discrepancy

    logger.info(f"Finished {config.algorithm.value} after {trace.last_k} iterations")
    return trace


def fbs_pnp(
    A: SparseOperator,
    b_fit,
    denoiser: DenoiserSpec,
    config: SolverConfig,
    monitor: Optional[IterateMonitor] = None,
    x0: Optional[Image] = None,
    score: Optional[ImageScorer] = None,
    image_shape: Optional[Tuple[int, int]] = None,
    corridor: Optional[Corridor] = None,
) -> IterationTrace:
    """Forward-backward splitting with a plug-in denoiser: x_k = z_{k-1} - tau·grad D, z_k = H(x_k)."""
    _require(config, Algorithm.FBS_PNP)
    return gradient_iterations(A, b_fit, denoiser, config, monitor, x0, score, False, image_shape, corridor)


def fast_fbs_pnp(
    A: SparseOperator,
    b_fit,
    denoiser: DenoiserSpec,
    config: SolverConfig,
    monitor: Optional[IterateMonitor] = None,
    x0: Optional[Image] = None,
    score: Optional[ImageScorer] = None,
    image_shape: Optional[Tuple[int, int]] = None,
    corridor: Optional[Corridor] = None,
) -> IterationTrace:
    """fbs_pnp followed by z_k += alpha_k (z_k - z_{k-1}); momentum comes after attenuation."""
    _require(config, Algorithm.FAST_FBS_PNP)
    return gradient_iterations(A, b_fit, denoiser, config, monitor, x0, score, True, image_shape, corridor)
