import logging
from typing import Optional

import numpy as np

from pnpreg.models.imaging import Sinogram
from pnpreg.utils.errors import RejectedInputError

logger = logging.getLogger(__name__)


def add_noise(
    b,
    target_rel_err: float,
    seed: int,
    n_angles: Optional[int] = None,
    n_rays_per_angle: Optional[int] = None,
) -> Sinogram:
    """Seeded white Gaussian noise scaled so ||b_delta - b|| / ||b|| == target_rel_err."""
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if target_rel_err < 0:
        raise RejectedInputError(f"target relative error must be >= 0, got {target_rel_err}")
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        raise RejectedInputError("cannot add relative noise to a zero sinogram")
    if n_angles is None or n_rays_per_angle is None:
        n_angles, n_rays_per_angle = 1, b.size

    if target_rel_err == 0:
        return Sinogram(data=b.copy(), n_angles=n_angles, n_rays_per_angle=n_rays_per_angle, noise_level_delta=0.0)

    e = np.random.default_rng(seed).standard_normal(b.size)
    noise = (target_rel_err * b_norm / np.linalg.norm(e)) * e
    delta = float(np.linalg.norm(noise))
    logger.info(f"Added noise with relative error {delta / b_norm:.4g} (delta={delta:.4g}, SNR {snr_db(b, b + noise):.2f} dB)")
    return Sinogram(
        data=b + noise,
        n_angles=n_angles,
        n_rays_per_angle=n_rays_per_angle,
        noise_level_delta=delta,
    )


def cv_subset_size(m: int, fraction: float) -> int:
    # round half up
    return int(np.floor(fraction * m + 0.5))


def split_cv(sinogram: Sinogram, fraction: float, seed: int) -> Sinogram:
    """Hold out a seeded uniform sample of measurements for cross-validation."""
    if not 0 < fraction < 1:
        raise RejectedInputError(f"cv fraction must lie in (0, 1), got {fraction}")
    m = sinogram.size
    k = cv_subset_size(m, fraction)
    if k == 0 or k == m:
        raise RejectedInputError(f"cv fraction {fraction} of {m} measurements leaves an empty fit or cv set")

    rng = np.random.default_rng(seed)
    cv = np.sort(rng.choice(m, size=k, replace=False)).astype(np.int64)
    mask = np.ones(m, dtype=bool)
    mask[cv] = False
    fit = np.flatnonzero(mask).astype(np.int64)
    logger.debug(f"Split {m} measurements into {fit.size} fit / {cv.size} cv")
    return sinogram.model_copy(update={"fit_indices": fit, "cv_indices": cv})


def snr_db(b, b_delta) -> float:
    """20·log10(||b|| / ||b - b_delta||); infinite for noiseless data."""
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    noise = float(np.linalg.norm(b - np.asarray(b_delta, dtype=np.float64).reshape(-1)))
    if noise == 0.0:
        return float("inf")
    return 20.0 * np.log10(np.linalg.norm(b) / noise)
