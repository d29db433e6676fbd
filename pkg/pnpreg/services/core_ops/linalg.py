import logging
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from pnpreg.config.settings import settings
from pnpreg.models.operators import CgReport
from pnpreg.services.core_ops.operator import SparseOperator, apply, apply_adjoint, as_vector
from pnpreg.utils.errors import RejectedInputError

logger = logging.getLogger(__name__)


def power_iteration_norm_sq(A: SparseOperator, iters: int = 100, seed: int = 0) -> float:
    """Estimate ||A||₂² by power iteration on AᵀA.

    Returns the Rayleigh quotient ||Av||² of the last unit iterate, which never
    exceeds the true value.
    """
    if iters < 1:
        raise RejectedInputError(f"power iteration needs iters >= 1, got {iters}")
    if A.nnz == 0:
        return 0.0

    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.cols)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(iters):
        Av = apply(A, v)
        estimate = float(Av @ Av)
        w = apply_adjoint(A, Av)
        w_norm = np.linalg.norm(w)
        if w_norm == 0.0:
            # start vector in the null space
            return estimate
        v = w / w_norm
    Av = apply(A, v)
    return max(estimate, float(Av @ Av))


def step_size_bound(norm_sq: float) -> float:
    """Largest admissible gradient step, 1/(2||A||²)."""
    if norm_sq <= 0:
        return float("inf")
    return 1.0 / (2.0 * norm_sq)


def cg_solve(
    A: SparseOperator,
    L: SparseOperator,
    rho: float,
    rhs,
    max_iters: int = 100,
    tol: Optional[float] = None,
    x0: Optional[np.ndarray] = None,
    callback: Optional[Callable[[np.ndarray], None]] = None,
) -> Tuple[np.ndarray, CgReport]:
    """Conjugate gradients for (AᵀA + rho·LᵀL) x = rhs.

    Starts from zero unless x0 is given. Stops after max_iters steps, when the
    residual drops to tol·||rhs||, or when a search direction has no curvature.
    """
    rhs = as_vector(rhs)
    if rhs.size != A.cols:
        raise RejectedInputError(f"cg_solve: rhs of length {rhs.size} for operator with {A.cols} columns")
    if L.cols != A.cols:
        raise RejectedInputError(f"cg_solve: L has {L.cols} columns, A has {A.cols}")
    if rho < 0:
        raise RejectedInputError(f"cg_solve: rho must be >= 0, got {rho}")
    tol = settings.CG_DEFAULT_TOL if tol is None else tol

    def normal_apply(v: np.ndarray) -> np.ndarray:
        out = apply_adjoint(A, apply(A, v))
        if rho > 0:
            out = out + rho * apply_adjoint(L, apply(L, v))
        return out

    x = np.zeros(A.cols) if x0 is None else np.array(x0, dtype=np.float64)
    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm == 0.0 and x0 is None:
        return x, CgReport(iterations_used=0, final_residual_norm=0.0, converged=True)

    r = rhs - normal_apply(x) if x0 is not None else rhs.copy()
    p = r.copy()
    rs = float(r @ r)
    threshold = tol * rhs_norm
    iterations = 0
    breakdown = False

    while iterations < max_iters:
        if np.sqrt(rs) <= threshold:
            break
        Mp = normal_apply(p)
        curvature = float(p @ Mp)
        if curvature <= settings.CG_BREAKDOWN_CURVATURE:
            breakdown = True
            logger.debug(f"CG breakdown at step {iterations}: curvature {curvature:.3e}")
            break
        step = rs / curvature
        x += step * p
        r -= step * Mp
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new
        iterations += 1
        if callback is not None:
            callback(x)

    residual_norm = float(np.sqrt(rs))
    converged = residual_norm <= threshold
    if not converged:
        logger.debug(f"CG stopped after {iterations} steps with residual {residual_norm:.3e}")
    return x, CgReport(
        iterations_used=iterations,
        final_residual_norm=residual_norm,
        converged=converged,
        breakdown=breakdown,
    )


def _forward_difference(n: int) -> sp.csr_matrix:
    # last row zero: Neumann boundary
    main = -np.ones(n)
    main[-1] = 0.0
    return sp.diags([main, np.ones(n - 1)], [0, 1], shape=(n, n), format="csr")


def gradient_operator(n: int) -> SparseOperator:
    """Forward-difference gradient of an n×n row-major image as a (2n² × n²) operator.

    Rows [0, n²) hold the horizontal differences, rows [n², 2n²) the vertical ones.
    """
    if n < 1:
        raise RejectedInputError(f"gradient_operator needs n >= 1, got {n}")
    D = _forward_difference(n)
    I = sp.identity(n, format="csr")
    horizontal = sp.kron(I, D, format="csr")
    vertical = sp.kron(D, I, format="csr")
    return SparseOperator(sp.vstack([horizontal, vertical], format="csr"))
