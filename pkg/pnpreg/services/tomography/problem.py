import logging

import numpy as np
from pydantic import BaseModel

from pnpreg.models.experiment import ProblemConfig
from pnpreg.models.imaging import Image, Sinogram
from pnpreg.services.core_ops.operator import SparseOperator, apply
from pnpreg.services.tomography.phantom import shepp_logan
from pnpreg.services.tomography.radon import build_radon
from pnpreg.services.tomography.sinogram import add_noise, split_cv

logger = logging.getLogger(__name__)


class CtProblem(BaseModel):
    """A simulated CT reconstruction problem with its fit/CV restrictions."""
    truth: Image
    operator: SparseOperator
    b_clean: np.ndarray
    sinogram: Sinogram
    A_fit: SparseOperator
    A_cv: SparseOperator

    class Config:
        arbitrary_types_allowed = True

    @property
    def b_fit(self) -> np.ndarray:
        return self.sinogram.b_fit

    @property
    def b_cv(self) -> np.ndarray:
        return self.sinogram.b_cv

    @property
    def delta(self) -> float:
        return self.sinogram.noise_level_delta

    @property
    def fit_delta(self) -> float:
        """Noise norm on the fit rows, the level D(x) is compared against."""
        fit = self.sinogram.fit_indices
        return float(np.linalg.norm(self.b_fit - self.b_clean[fit]))


def build_problem(problem: ProblemConfig) -> CtProblem:
    lo, hi = problem.phantom_range
    truth = shepp_logan(problem.n, lo, hi)
    A = build_radon(problem.geometry, problem.n)
    b = apply(A, truth)
    geometry = problem.geometry
    sinogram = add_noise(b, problem.noise_rel_err, problem.seed, geometry.n_angles, geometry.n_rays_per_angle)
    sinogram = split_cv(sinogram, problem.cv_fraction, problem.seed + 1)
    logger.info(
        f"Problem n={problem.n}: {A.rows} measurements ({sinogram.fit_indices.size} fit, "
        f"{sinogram.cv_indices.size} cv), delta={sinogram.noise_level_delta:.4g}"
    )
    return CtProblem(
        truth=truth,
        operator=A,
        b_clean=b,
        sinogram=sinogram,
        A_fit=A.take_rows(sinogram.fit_indices),
        A_cv=A.take_rows(sinogram.cv_indices),
    )
