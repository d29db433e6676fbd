import logging
from typing import Dict, Optional

from pnpreg.models.imaging import Image
from pnpreg.services.core_ops.operator import SparseOperator
from pnpreg.services.metrics.quality import d_err, psnr, rel_mse, s_err, ssim, SSIM_MIN_SIZE

logger = logging.getLogger(__name__)


class IterateMonitor:
    """Evaluates the reported iterate z_k against the data and, when known, the truth."""

    def __init__(
        self,
        A_fit: SparseOperator,
        b_fit,
        A_cv: Optional[SparseOperator] = None,
        b_cv=None,
        truth: Optional[Image] = None,
        compute_ssim: bool = True,
    ):
        self.A_fit = A_fit
        self.b_fit = b_fit
        self.A_cv = A_cv if A_cv is not None and A_cv.rows > 0 else None
        self.b_cv = b_cv
        self.truth = truth
        self.compute_ssim = (
            compute_ssim and truth is not None and min(truth.width, truth.height) >= SSIM_MIN_SIZE
        )

    def evaluate(self, z: Image) -> Dict[str, Optional[float]]:
        values: Dict[str, Optional[float]] = {
            "d_err": d_err(self.A_fit, self.b_fit, z),
            "cv_error": s_err(self.A_cv, self.b_cv, z) if self.A_cv is not None else None,
            "mse_vs_truth": None,
            "psnr": None,
            "ssim": None,
        }
        if self.truth is not None:
            values["mse_vs_truth"] = rel_mse(z, self.truth)
            values["psnr"] = psnr(z, self.truth)
            if self.compute_ssim:
                values["ssim"] = ssim(z, self.truth)
        return values
