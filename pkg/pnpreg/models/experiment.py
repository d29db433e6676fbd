from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from pnpreg.models.denoising import DenoiserSpec
from pnpreg.models.imaging import Geometry
from pnpreg.models.metrics import MetricsReport
from pnpreg.models.selection import Corridor, CriterionKind
from pnpreg.models.solver import FamilyLabel, IterationTrace, SolverConfig


class ProblemConfig(BaseModel):
    n: int = Field(64, ge=16)
    geometry: Geometry = Field(default_factory=Geometry)
    noise_rel_err: float = Field(0.01, ge=0)
    cv_fraction: float = Field(0.01, gt=0, lt=1)
    phantom_range: Tuple[float, float] = (0.0, 1.0)
    seed: int = 0

    class Config:
        extra = "forbid"

    @field_validator("phantom_range")
    @classmethod
    def _ordered_range(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if not value[0] < value[1]:
            raise ValueError(f"phantom_range needs lo < hi, got {value}")
        return value


class SelectionSettings(BaseModel):
    kind: CriterionKind = CriterionKind.CROSS_VALIDATION
    eta: float = Field(1.1, gt=1)

    class Config:
        extra = "forbid"


class ExperimentConfig(BaseModel):
    name: str = "experiment"
    problem: ProblemConfig = Field(default_factory=ProblemConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    denoiser: DenoiserSpec = Field(default_factory=DenoiserSpec)
    selection: SelectionSettings = Field(default_factory=SelectionSettings)
    corridor: Optional[Corridor] = None
    output_dir: Optional[str] = None

    class Config:
        extra = "forbid"


class SummaryRow(BaseModel):
    label: str  # final_N, selected_S or min_mse
    k: int
    metrics: MetricsReport
    min_mse: float


class ExperimentResult(BaseModel):
    name: str
    trace_csv_path: str
    summary_csv_path: str
    summary_txt_path: str
    summary: List[SummaryRow]
    selected_k: int
    family_label: FamilyLabel
    trace: Optional[IterationTrace] = None
    exported_paths: List[str] = Field(default_factory=list)

    def row(self, label: str) -> SummaryRow:
        for row in self.summary:
            if row.label == label:
                return row
        raise KeyError(f"no summary row labelled {label}")
