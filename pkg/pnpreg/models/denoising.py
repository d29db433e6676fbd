from enum import Enum

from pydantic import BaseModel, Field, field_validator


class DenoiserKind(str, Enum):
    GAUSSIAN = "gaussian"
    MEDIAN = "median"
    TV_PROX = "tv_prox"
    IDENTITY = "identity"


class DenoiserSpec(BaseModel):
    """A denoiser H_sigma.

    sigma is read per kind: gaussian maps it to a kernel width, median switches the
    window filter on for sigma > 0, tv_prox uses it as the TV weight lambda.
    """
    kind: DenoiserKind = DenoiserKind.GAUSSIAN
    sigma: float = Field(0.0, ge=0)
    rescale_wrap: bool = False
    window: int = Field(3, ge=1)
    inner_iters: int = Field(30, ge=1)

    class Config:
        extra = "forbid"

    @field_validator("window")
    @classmethod
    def _odd_window(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError(f"median window must be odd, got {value}")
        return value

    def with_sigma(self, sigma: float) -> "DenoiserSpec":
        return self.model_copy(update={"sigma": sigma})
