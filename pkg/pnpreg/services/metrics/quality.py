import logging

import numpy as np
from skimage.metrics import structural_similarity

from pnpreg.config.settings import settings
from pnpreg.models.imaging import Image
from pnpreg.models.metrics import MetricsReport
from pnpreg.models.selection import CriterionKind, SelectionCriterion
from pnpreg.services.core_ops.operator import SparseOperator, VectorLike
from pnpreg.services.selection.criteria import evaluate_criterion, relative_residual
from pnpreg.utils.errors import RejectedInputError

logger = logging.getLogger(__name__)

# Gaussian-weighted SSIM: 11x11 window, std 1.5
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_MIN_SIZE = 11


def _check_same_shape(x: Image, truth: Image) -> None:
    if (x.width, x.height) != (truth.width, truth.height):
        raise RejectedInputError(
            f"image {x.width}x{x.height} compared against truth {truth.width}x{truth.height}"
        )


def rel_mse(x: Image, truth: Image) -> float:
    """Relative error ||x - truth|| / ||truth||."""
    _check_same_shape(x, truth)
    truth_norm = float(np.linalg.norm(truth.data))
    if truth_norm == 0.0:
        raise RejectedInputError("relative error against a zero truth")
    return float(np.linalg.norm(x.data - truth.data)) / truth_norm


def psnr(x: Image, truth: Image) -> float:
    """PSNR in dB with peak = max(truth), saturated at ±PSNR_SATURATION_DB."""
    _check_same_shape(x, truth)
    saturation = settings.PSNR_SATURATION_DB
    mse = float(np.mean((x.data - truth.data) ** 2))
    if mse == 0.0:
        return saturation
    peak = float(truth.data.max())
    with np.errstate(divide="ignore"):
        value = 10.0 * np.log10(peak ** 2 / mse)
    return float(np.clip(value, -saturation, saturation))


def _normalise(x: Image, what: str) -> np.ndarray:
    lo, hi = float(x.data.min()), float(x.data.max())
    if not hi > lo:
        if what == "truth":
            raise RejectedInputError("SSIM reference image is constant")
        logger.warning(f"SSIM input is constant (value {lo}); compared as zeros")
        return np.zeros((x.height, x.width))
    return (x.as_array() - lo) / (hi - lo)


def ssim(x: Image, truth: Image) -> float:
    """SSIM of the two images, each rescaled to [0, 1] first."""
    _check_same_shape(x, truth)
    if min(truth.width, truth.height) < SSIM_MIN_SIZE:
        raise RejectedInputError(f"SSIM needs images of at least {SSIM_MIN_SIZE}x{SSIM_MIN_SIZE}")
    reference = _normalise(truth, "truth")
    candidate = _normalise(x, "x")
    return float(
        structural_similarity(
            candidate,
            reference,
            data_range=1.0,
            gaussian_weights=True,
            sigma=SSIM_SIGMA,
            use_sample_covariance=False,
            K1=SSIM_K1,
            K2=SSIM_K2,
        )
    )


def d_err(A_fit: SparseOperator, b_fit, x: VectorLike) -> float:
    """Relative discrepancy over the fit rows."""
    return relative_residual(A_fit, b_fit, x)


def s_err(A_cv: SparseOperator, b_cv, x: VectorLike) -> float:
    """Relative cross-validation error over the held-out rows."""
    return relative_residual(A_cv, b_cv, x)


def evaluate_metrics(x: Image, truth: Image, A: SparseOperator, b, criterion: SelectionCriterion) -> MetricsReport:
    """All reported metrics of x; A and b are the full operator and data."""
    cv = criterion.model_copy(update={"kind": CriterionKind.CROSS_VALIDATION})
    dp = criterion.model_copy(update={"kind": CriterionKind.DISCREPANCY_PRINCIPLE})
    return MetricsReport(
        mse=rel_mse(x, truth),
        psnr=psnr(x, truth),
        ssim=ssim(x, truth),
        d_err=evaluate_criterion(dp, A, b, x),
        s_err=evaluate_criterion(cv, A, b, x),
    )
