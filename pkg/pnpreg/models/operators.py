from pydantic import BaseModel, Field


class CgReport(BaseModel):
    """Outcome of one inner conjugate-gradient solve."""
    iterations_used: int = Field(ge=0)
    final_residual_norm: float = Field(ge=0)
    converged: bool
    breakdown: bool = False
