import logging
from typing import Callable, Tuple

import numpy as np

from pnpreg.models.imaging import Sinogram
from pnpreg.models.selection import CriterionKind, SelectionCriterion
from pnpreg.models.solver import IterationTrace
from pnpreg.services.core_ops.operator import SparseOperator, VectorLike, apply, as_vector
from pnpreg.utils.errors import RejectedInputError

logger = logging.getLogger(__name__)

Scorer = Callable[[VectorLike], float]


def relative_residual(A_sub: SparseOperator, b_sub, x: VectorLike) -> float:
    """||A_sub x - b_sub|| / ||b_sub||."""
    b_sub = as_vector(b_sub)
    if b_sub.size == 0:
        raise RejectedInputError("criterion evaluated on an empty index set")
    b_norm = float(np.linalg.norm(b_sub))
    if b_norm == 0.0:
        raise RejectedInputError("criterion data has zero norm")
    return float(np.linalg.norm(apply(A_sub, x) - b_sub)) / b_norm


def criterion_rows(criterion: SelectionCriterion, m: int) -> np.ndarray:
    """Rows scored by the criterion: the held-out set for CV, its complement for DP."""
    cv_rows = criterion.cv_operator_rows
    if cv_rows.size and (cv_rows.min() < 0 or cv_rows.max() >= m):
        raise RejectedInputError(f"cv rows fall outside an operator with {m} rows")
    if criterion.kind == CriterionKind.CROSS_VALIDATION:
        return cv_rows
    mask = np.ones(m, dtype=bool)
    mask[cv_rows] = False
    return np.flatnonzero(mask)


def _restrict(criterion: SelectionCriterion, A: SparseOperator, b) -> Tuple[SparseOperator, np.ndarray]:
    rows = criterion_rows(criterion, A.rows)
    if rows.size == 0:
        raise RejectedInputError(f"{criterion.kind.value} criterion has an empty index set")
    b = as_vector(b)
    if b.size == A.rows:
        b_sub = b[rows]
    elif b.size == rows.size:
        b_sub = b
    else:
        raise RejectedInputError(
            f"data of length {b.size} matches neither the operator ({A.rows}) nor the criterion rows ({rows.size})"
        )
    return A.take_rows(rows), b_sub


def evaluate_criterion(criterion: SelectionCriterion, A: SparseOperator, b, x: VectorLike) -> float:
    """Relative residual over the criterion's rows of the full operator A.

    b may be the full data vector or already restricted to those rows.
    """
    A_sub, b_sub = _restrict(criterion, A, b)
    return relative_residual(A_sub, b_sub, x)


def bind_criterion(criterion: SelectionCriterion, A: SparseOperator, b) -> Scorer:
    """Fix the restriction once and return a scorer of iterates."""
    A_sub, b_sub = _restrict(criterion, A, b)
    return lambda x: relative_residual(A_sub, b_sub, x)


def criterion_for(sinogram: Sinogram, kind: CriterionKind = CriterionKind.CROSS_VALIDATION, eta: float = 1.1) -> SelectionCriterion:
    return SelectionCriterion(
        kind=kind,
        cv_operator_rows=sinogram.cv_indices,
        eta=eta,
        delta=sinogram.noise_level_delta,
    )


def select_stop(trace: IterationTrace, criterion: SelectionCriterion) -> int:
    """Iteration index picked by the criterion.

    Cross-validation takes the smallest k minimising cv_error. The discrepancy
    principle takes the first k with sqrt(discrepancy) <= eta·delta, else the last k.
    """
    if not trace.records:
        raise RejectedInputError("cannot select from an empty trace")
    ks = [r.k for r in trace.records]

    if criterion.kind == CriterionKind.CROSS_VALIDATION:
        errors = trace.series("cv_error")
        if np.any(np.isnan(errors)):
            raise RejectedInputError("trace has no cv_error recorded for cross-validation stopping")
        k = ks[int(np.argmin(errors))]
        logger.debug(f"Cross-validation selects k={k} (cv_error={errors.min():.6g})")
        return k

    tolerance = criterion.eta * criterion.delta
    for record in trace.records:
        if np.sqrt(record.discrepancy) <= tolerance:
            logger.debug(f"Discrepancy principle reached at k={record.k}")
            return record.k
    return ks[-1]
