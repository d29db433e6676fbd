"""Isotropic total variation and its proximal map, computed by projected gradient
on the dual problem."""
import logging

import numpy as np

from pnpreg.models.imaging import Image
from pnpreg.utils.errors import RejectedInputError

logger = logging.getLogger(__name__)

# 1/||div||², the step that keeps the dual iteration stable
DUAL_STEP = 1.0 / 8.0


def grad(image: np.ndarray) -> np.ndarray:
    """Forward differences with Neumann boundary, shape (2, h, w): horizontal then vertical."""
    out = np.zeros((2,) + image.shape)
    out[0, :, :-1] = image[:, 1:] - image[:, :-1]
    out[1, :-1, :] = image[1:, :] - image[:-1, :]
    return out


def div(field: np.ndarray) -> np.ndarray:
    """Negative adjoint of grad."""
    px, py = field[0], field[1]
    out = np.zeros(px.shape)
    out[:, :-1] += px[:, :-1]
    out[:, 1:] -= px[:, :-1]
    out[:-1, :] += py[:-1, :]
    out[1:, :] -= py[:-1, :]
    return out


def total_variation(x) -> float:
    image = x.as_array() if isinstance(x, Image) else np.asarray(x, dtype=np.float64)
    g = grad(image)
    return float(np.sum(np.sqrt(g[0] ** 2 + g[1] ** 2)))


def tv_objective(z, x, lam: float) -> float:
    """lam·TV(z) + ½||z - x||²."""
    z_arr = z.as_array() if isinstance(z, Image) else np.asarray(z, dtype=np.float64)
    x_arr = x.as_array() if isinstance(x, Image) else np.asarray(x, dtype=np.float64)
    return lam * total_variation(z_arr) + 0.5 * float(np.sum((z_arr - x_arr) ** 2))


def tv_prox_array(image: np.ndarray, lam: float, inner_iters: int = 30) -> np.ndarray:
    if inner_iters < 1:
        raise RejectedInputError(f"tv_prox needs inner_iters >= 1, got {inner_iters}")
    if lam < 0:
        raise RejectedInputError(f"tv_prox needs lambda >= 0, got {lam}")
    if lam == 0:
        return image.copy()

    scaled = image / lam
    p = np.zeros((2,) + image.shape)
    for _ in range(inner_iters):
        q = p + DUAL_STEP * grad(div(p) - scaled)
        magnitude = np.sqrt(q[0] ** 2 + q[1] ** 2)
        p = q / np.maximum(1.0, magnitude)
    return image - lam * div(p)


def tv_prox(x: Image, lam: float, inner_iters: int = 30) -> Image:
    """Approximate argmin_z lam·TV(z) + ½||z - x||² with a fixed number of dual steps."""
    return x.like(tv_prox_array(x.as_array(), lam, inner_iters).ravel())
