from pydantic import BaseModel, Field


class MetricsReport(BaseModel):
    mse: float = Field(ge=0)
    psnr: float
    ssim: float = Field(le=1.0 + 1e-12)
    d_err: float
    s_err: float
