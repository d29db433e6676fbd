"""Checks that a denoised gradient iteration stays close to plain Landweber."""
from typing import Sequence

import numpy as np


def cumulative_deviation_bound(denoise_changes: Sequence[float], tau: float, norm_sq: float) -> np.ndarray:
    """Bound on ||z_k - y_k|| for k = 1..len(denoise_changes), y_k the Landweber iterate.

    bound_k = sum_{i=0}^{k-1} (1 + tau·||AᵀA||)^i · denoise_change_{k-i}, with
    ||AᵀA|| = ||A||².
    """
    changes = np.asarray(denoise_changes, dtype=np.float64)
    growth = 1.0 + tau * norm_sq
    bounds = np.empty(changes.size)
    running = 0.0
    # bound_k = growth·bound_{k-1} + change_k
    for k, change in enumerate(changes):
        running = growth * running + change
        bounds[k] = running
    return bounds


def residue_bound(landweber_residual_norm: float, deviation_norm: float, norm_sq: float, margin: float = 1e-9) -> float:
    """Upper bound on ||Az_k - b||² from ||Ay_k - b|| and ||z_k - y_k||.

    Triangle form (||Ay - b|| + ||A||·||z - y||)², widened by (1 + margin).
    """
    return (landweber_residual_norm + np.sqrt(norm_sq) * deviation_norm) ** 2 * (1.0 + margin)
