from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from pnpreg.config.settings import settings
from pnpreg.models.imaging import Image
from pnpreg.models.operators import CgReport


class Algorithm(str, Enum):
    LANDWEBER = "landweber"
    FBS_PNP = "fbs_pnp"
    FAST_FBS_PNP = "fast_fbs_pnp"
    ADMM_PNP = "admm_pnp"


class SigmaUpdate(str, Enum):
    FIXED = "fixed"
    SCALED = "scaled"


class Attenuation(str, Enum):
    NONE = "none"
    GAMMA = "gamma"
    SELECT_ALPHA = "select_alpha"
    # select_alpha restricted to the gamma bound
    COMBINED = "combined"


class FirstIterateL(str, Enum):
    IDENTITY = "identity"
    GRAD_MAGNITUDE = "grad_magnitude"


class FamilyLabel(str, Enum):
    I3 = "I3"
    I5 = "I5"
    UNCLASSIFIED = "unclassified"


def _default_alpha_grid() -> List[float]:
    return [round(0.05 * i, 2) for i in range(1, 21)]


class SolverConfig(BaseModel):
    algorithm: Algorithm = Algorithm.FBS_PNP
    max_iters: int = Field(200, ge=1)
    # step size; None means tau_fraction / (2 ||A||^2)
    tau: Optional[float] = Field(None, gt=0)
    tau_fraction: float = Field(0.9, gt=0, lt=1)
    rho: float = Field(1.0, gt=0)
    sigma_update: SigmaUpdate = SigmaUpdate.FIXED
    attenuation: Attenuation = Attenuation.NONE
    gamma: float = Field(0.5, gt=0, le=1)
    alpha_grid: List[float] = Field(default_factory=_default_alpha_grid)
    # select_alpha only: descend above the corridor, stay at or above eps1 inside it
    corridor_guard: bool = False
    inner_cg_iters: int = Field(100, ge=1)
    cg_tol: float = Field(settings.CG_DEFAULT_TOL, ge=0)
    cg_warm_start: bool = False
    first_iterate_L: FirstIterateL = FirstIterateL.IDENTITY
    seed: int = 0
    power_iters: int = Field(100, ge=1)
    select_sigma: bool = False
    sigma_range: Tuple[float, float] = (0.0, 0.05)
    sigma_grid_size: int = Field(6, ge=2)
    keep_iterates: bool = True
    log_every: int = Field(50, ge=1)

    class Config:
        extra = "forbid"

    @field_validator("alpha_grid")
    @classmethod
    def _check_alpha_grid(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("alpha_grid must not be empty")
        bad = [a for a in value if not 0 < a <= 1]
        if bad:
            raise ValueError(f"alpha_grid values must lie in (0, 1], got {bad}")
        return value

    @field_validator("sigma_range")
    @classmethod
    def _check_sigma_range(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        lo, hi = value
        if not 0 <= lo <= hi:
            raise ValueError(f"sigma_range needs 0 <= min <= max, got {value}")
        return value

    @model_validator(mode="after")
    def _check_attenuation(self):
        if self.algorithm == Algorithm.ADMM_PNP and self.attenuation != Attenuation.NONE:
            raise ValueError("admm_pnp does not support attenuation; use attenuation = none")
        if self.corridor_guard and self.attenuation != Attenuation.SELECT_ALPHA:
            raise ValueError("corridor_guard needs attenuation = select_alpha")
        return self

    @property
    def uses_gradient_steps(self) -> bool:
        return self.algorithm != Algorithm.ADMM_PNP


class IterationRecord(BaseModel):
    """Everything measured at one outer iteration k.

    x is the pre-denoise iterate and z the reported one. For ADMM the monitored
    direction is x_{k} - x_{k-1}, so discrepancy is measured at x there; the
    image-quality columns are always taken at z.
    """
    k: int = Field(ge=1)
    x: Optional[Image] = None
    z: Optional[Image] = None
    inner_product: float
    grad_step_norm: float
    denoise_change: float
    alpha_used: float = 1.0
    discrepancy: float
    d_err: Optional[float] = None
    cv_error: Optional[float] = None
    mse_vs_truth: Optional[float] = None
    psnr: Optional[float] = None
    ssim: Optional[float] = None
    sigma_used: float = 0.0
    momentum: Optional[float] = None


class IterationTrace(BaseModel):
    records: List[IterationRecord] = Field(default_factory=list)
    config: SolverConfig
    family_label: FamilyLabel = FamilyLabel.UNCLASSIFIED
    tau_used: Optional[float] = None
    norm_sq: Optional[float] = None
    # D of the start iterate, paired with the first record when classifying
    initial_discrepancy: Optional[float] = None
    cg_reports: List[CgReport] = Field(default_factory=list)
    aborted: bool = False

    @model_validator(mode="after")
    def _check_order(self):
        ks = [r.k for r in self.records]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError("iteration indices must be strictly increasing")
        return self

    def append(self, record: IterationRecord) -> None:
        if self.records and record.k <= self.records[-1].k:
            raise ValueError(f"record k={record.k} does not follow k={self.records[-1].k}")
        self.records.append(record)

    def series(self, field: str) -> np.ndarray:
        """One record field across iterations, None mapped to NaN."""
        values = [getattr(r, field) for r in self.records]
        return np.array([np.nan if v is None else v for v in values], dtype=np.float64)

    def record_at(self, k: int) -> IterationRecord:
        for record in self.records:
            if record.k == k:
                return record
        raise KeyError(f"no record for k={k}")

    @property
    def last_k(self) -> int:
        return self.records[-1].k if self.records else 0
