from enum import Enum

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator


class CriterionKind(str, Enum):
    CROSS_VALIDATION = "cross_validation"
    DISCREPANCY_PRINCIPLE = "discrepancy_principle"


class SelectionCriterion(BaseModel):
    """Rule S used to score iterates and pick the reported one.

    cv_operator_rows are rows of the full operator A held out from fitting; the
    discrepancy principle scores the complement.
    """
    kind: CriterionKind = CriterionKind.CROSS_VALIDATION
    cv_operator_rows: np.ndarray
    eta: float = 1.1
    delta: float = Field(0.0, ge=0)

    class Config:
        arbitrary_types_allowed = True

    @field_validator("cv_operator_rows", mode="before")
    @classmethod
    def _as_index_array(cls, value):
        return np.asarray(value, dtype=np.int64).reshape(-1)

    @model_validator(mode="after")
    def _check_eta(self):
        if self.kind == CriterionKind.DISCREPANCY_PRINCIPLE and not self.eta > 1:
            raise ValueError(f"discrepancy principle needs eta > 1, got {self.eta}")
        return self


class Corridor(BaseModel):
    """Two-sided bound [eps1, eps2] on the squared discrepancy."""
    eps1: float = Field(ge=0)
    eps2: float = Field(ge=0)

    @model_validator(mode="after")
    def _ordered(self):
        if self.eps2 < self.eps1:
            raise ValueError(f"corridor needs eps1 <= eps2, got ({self.eps1}, {self.eps2})")
        return self
