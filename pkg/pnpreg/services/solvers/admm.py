import logging
from typing import Callable, Optional, Tuple

import numpy as np

from pnpreg.models.denoising import DenoiserSpec
from pnpreg.models.imaging import Image
from pnpreg.models.solver import Algorithm, Attenuation, FirstIterateL, IterationRecord, IterationTrace, SolverConfig
from pnpreg.services.core_ops.linalg import cg_solve, gradient_operator, power_iteration_norm_sq
from pnpreg.services.core_ops.operator import SparseOperator, apply_adjoint, as_vector, discrepancy, grad_ls
from pnpreg.services.denoisers.denoiser import denoise
from pnpreg.services.solvers.attenuation import select_sigma
from pnpreg.services.solvers.fbs import _require
from pnpreg.services.solvers.monitor import IterateMonitor
from pnpreg.services.solvers.steps import image_template, scaled_sigma
from pnpreg.utils.errors import RejectedInputError, SolverAbortError

logger = logging.getLogger(__name__)

ImageScorer = Callable[[Image], float]


def _first_iterate_operator(config: SolverConfig, template: Image) -> SparseOperator:
    if config.first_iterate_L == FirstIterateL.IDENTITY:
        return SparseOperator.identity(template.data.size)
    if template.width != template.height:
        raise RejectedInputError("gradient-magnitude first iterate needs a square image")
    return gradient_operator(template.width)


def admm_pnp(
    A: SparseOperator,
    b_fit,
    denoiser: DenoiserSpec,
    config: SolverConfig,
    monitor: Optional[IterateMonitor] = None,
    x0: Optional[Image] = None,
    score: Optional[ImageScorer] = None,
    image_shape: Optional[Tuple[int, int]] = None,
) -> IterationTrace:
    """ADMM with a plug-in denoiser in place of the z-proximal step.

    x_{k+1} = (AᵀA + rho·I)⁻¹ (Aᵀb + rho(z_k - u_k))   (inner CG)
    z_{k+1} = H(x_{k+1} + u_k)
    u_{k+1} = u_k + x_{k+1} - z_{k+1}
    The first x-update may use rho·LᵀL with L = |∇| and right-hand side Aᵀb.
    """
    _require(config, Algorithm.ADMM_PNP)
    if config.attenuation != Attenuation.NONE:
        raise RejectedInputError("admm_pnp does not support attenuation")
    if config.select_sigma and score is None:
        raise RejectedInputError("sigma selection needs a selection criterion")

    b_fit = as_vector(b_fit)
    rho = config.rho
    template = image_template(A.cols, x0, image_shape)
    identity = SparseOperator.identity(A.cols)
    Atb = apply_adjoint(A, b_fit)
    norm_sq = power_iteration_norm_sq(A, config.power_iters, config.seed)
    x = np.zeros(A.cols) if x0 is None else x0.data.copy()
    trace = IterationTrace(config=config, norm_sq=norm_sq, initial_discrepancy=discrepancy(A, x, b_fit))
    z = x.copy()
    u = np.zeros(A.cols)
    unconverged = 0
    logger.info(
        f"Starting admm_pnp: {config.max_iters} iterations, rho={rho}, "
        f"{config.inner_cg_iters} CG steps (tol {config.cg_tol:g})"
    )

    for k in range(1, config.max_iters + 1):
        if k == 1 and x0 is None:
            L = _first_iterate_operator(config, template)
            rhs = Atb
        else:
            L = identity
            rhs = Atb + rho * (z - u)
        start = x if config.cg_warm_start and k > 1 else None
        x_next, report = cg_solve(A, L, rho, rhs, config.inner_cg_iters, config.cg_tol, x0=start)
        trace.cg_reports.append(report)
        if report.breakdown or not np.all(np.isfinite(x_next)):
            trace.aborted = True
            logger.error(f"Inner CG failed at k={k}: {report}")
            raise SolverAbortError(f"admm_pnp inner solve failed at k={k}", trace=trace, cg_report=report)
        if not report.converged:
            unconverged += 1

        sigma_used = scaled_sigma(denoiser, config, 1.0 / rho)
        v = template.like(x_next + u)
        if config.select_sigma:
            sigma_used = select_sigma(v, denoiser, config.sigma_range, config.sigma_grid_size, score)
        Hv = denoise(denoiser.with_sigma(sigma_used), v)
        z_next = Hv.data
        u_next = u + x_next - z_next

        # monitored direction d_k = x_{k} - x_{k-1}
        inner_product = float((x_next - x) @ -grad_ls(A, x, b_fit))
        grad_step_norm = float(np.linalg.norm(x_next - (z - u)))
        z_img = template.like(z_next)
        record = IterationRecord(
            k=k,
            x=template.like(x_next) if config.keep_iterates else None,
            z=z_img if config.keep_iterates else None,
            inner_product=inner_product,
            grad_step_norm=grad_step_norm,
            denoise_change=float(np.linalg.norm(z_next - v.data)),
            alpha_used=1.0,
            discrepancy=discrepancy(A, x_next, b_fit),
            sigma_used=sigma_used,
            **(monitor.evaluate(z_img) if monitor is not None else {}),
        )
        trace.append(record)

        if k % config.log_every == 0:
            logger.debug(
                f"k={k}: D(x)={record.discrepancy:.6g} <d,-grad>={inner_product:.4g} "
                f"CG {report.iterations_used} steps, residual {report.final_residual_norm:.3e}"
            )
        x, z, u = x_next, z_next, u_next

    if unconverged and config.cg_tol > 0:
        logger.warning(
            f"Inner CG reached {config.inner_cg_iters} steps without meeting tol {config.cg_tol:g} "
            f"in {unconverged} of {config.max_iters} iterations"
        )
    logger.info(f"Finished admm_pnp after {trace.last_k} iterations")
    return trace
