import logging
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from pnpreg.models.denoising import DenoiserSpec
from pnpreg.models.imaging import Image
from pnpreg.services.denoisers.denoiser import denoise
from pnpreg.utils.errors import RejectedInputError

logger = logging.getLogger(__name__)

ImageScorer = Callable[[Image], float]


def gamma_alpha(x_k: Image, Hx: Image, grad_step_norm: float, gamma: float) -> float:
    """min(1, gamma·||step|| / ||H(x) - x||), 1 when the denoiser leaves x alone."""
    if not 0 < gamma <= 1:
        raise RejectedInputError(f"gamma must lie in (0, 1], got {gamma}")
    change = float(np.linalg.norm(Hx.data - x_k.data))
    return 1.0 if change == 0.0 else min(1.0, gamma * grad_step_norm / change)


def attenuate_gamma(x_k: Image, Hx: Image, grad_step_norm: float, gamma: float) -> Tuple[Image, float]:
    """Blend z = (1 - alpha)·x + alpha·H(x) with alpha = min(1, gamma·||step|| / ||H(x) - x||)."""
    alpha = gamma_alpha(x_k, Hx, grad_step_norm, gamma)
    z = (1.0 - alpha) * x_k.data + alpha * Hx.data
    return x_k.like(z), alpha


def attenuate_select(
    x_k: Image,
    Hx: Image,
    score: ImageScorer,
    alpha_grid: Sequence[float],
    admissible: Optional[Callable[[Image], bool]] = None,
) -> Tuple[Image, float]:
    """Pick the blend x + alpha·(H(x) - x) the selection criterion likes best.

    Ties go to the smallest alpha. With admissible, the best-scoring blend it
    accepts wins; when it accepts none the largest alpha is used.
    """
    if not alpha_grid:
        raise RejectedInputError("alpha_grid must not be empty")
    if any(not 0 < a <= 1 for a in alpha_grid):
        raise RejectedInputError(f"alpha_grid values must lie in (0, 1], got {list(alpha_grid)}")

    direction = Hx.data - x_k.data
    alphas = sorted(alpha_grid)
    blends = [x_k.like(x_k.data + alpha * direction) for alpha in alphas]
    scores = [score(z) for z in blends]

    def rank(i: int) -> Tuple[int, float, float]:
        # non-finite scores last, ties to the smaller alpha
        finite = bool(np.isfinite(scores[i]))
        return (0 if finite else 1, scores[i] if finite else 0.0, alphas[i])

    order = sorted(range(len(alphas)), key=rank)
    if admissible is None:
        best = order[0]
    else:
        best = next((i for i in order if admissible(blends[i])), None)
        if best is None:
            logger.debug(f"No alpha in the grid is admissible, using {alphas[-1]}")
            best = len(alphas) - 1
    return blends[best], float(alphas[best])


def attenuate_combined(
    x_k: Image,
    Hx: Image,
    grad_step_norm: float,
    gamma: float,
    score: ImageScorer,
    alpha_grid: Sequence[float],
) -> Tuple[Image, float]:
    """attenuate_select over the grid values up to the gamma bound, plus the bound itself.

    Every candidate keeps z - z_prev a descent direction, as attenuate_gamma does.
    """
    cap = gamma_alpha(x_k, Hx, grad_step_norm, gamma)
    if cap == 0.0:
        return x_k.like(x_k.data.copy()), 0.0
    candidates = sorted({a for a in alpha_grid if a <= cap} | {cap})
    return attenuate_select(x_k, Hx, score, candidates)


def select_sigma(
    x_k: Image,
    denoiser: DenoiserSpec,
    sigma_range: Tuple[float, float],
    grid_size: int,
    score: ImageScorer,
) -> float:
    """Denoiser strength on a uniform grid minimising the criterion of H_sigma(x); ties to the smallest."""
    sigma_min, sigma_max = sigma_range
    if not 0 <= sigma_min <= sigma_max:
        raise RejectedInputError(f"sigma range needs 0 <= min <= max, got {sigma_range}")
    if grid_size < 2:
        raise RejectedInputError(f"sigma grid needs at least 2 points, got {grid_size}")
    if sigma_min == sigma_max:
        return float(sigma_min)

    grid = np.linspace(sigma_min, sigma_max, grid_size)
    scores = [score(denoise(denoiser.with_sigma(float(s)), x_k)) for s in grid]
    return float(grid[int(np.argmin(scores))])
