from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator


class Image(BaseModel):
    """An N x M real image stored flat in row-major order (row 0 is the top row)."""
    width: int = Field(gt=0)
    height: int = Field(gt=0)
    data: np.ndarray

    class Config:
        arbitrary_types_allowed = True

    @field_validator("data", mode="before")
    @classmethod
    def _flatten(cls, value):
        return np.asarray(value, dtype=np.float64).reshape(-1)

    @model_validator(mode="after")
    def _check_shape_and_values(self):
        if self.data.size != self.width * self.height:
            raise ValueError(
                f"data length {self.data.size} does not match {self.width}x{self.height}"
            )
        if not np.all(np.isfinite(self.data)):
            raise ValueError("image contains non-finite values")
        return self

    @classmethod
    def from_array(cls, array: np.ndarray) -> "Image":
        array = np.asarray(array, dtype=np.float64)
        if array.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {array.shape}")
        height, width = array.shape
        return cls(width=width, height=height, data=array)

    def as_array(self) -> np.ndarray:
        return self.data.reshape(self.height, self.width)

    def like(self, data: np.ndarray) -> "Image":
        """Same dimensions, new pixel values."""
        return Image(width=self.width, height=self.height, data=data)


class GeometryKind(str, Enum):
    PARALLEL = "parallel"
    FAN_CURVED = "fan_curved"


class Geometry(BaseModel):
    kind: GeometryKind = GeometryKind.PARALLEL
    n_angles: int = Field(30, ge=1)
    n_rays_per_angle: int = Field(95, ge=1)
    angle_span_degrees: float = Field(180.0, gt=0, le=360)
    # fan only, grid units; None means 2*n
    source_radius: Optional[float] = Field(None, gt=0)
    detector_radius: Optional[float] = Field(None, gt=0)
    # parallel: pixel units (default 1); fan: radians between rays (default covers the grid disk)
    detector_spacing: Optional[float] = Field(None, gt=0)
    detector_offset: float = 0.0
    start_angle_degrees: float = 0.0

    class Config:
        extra = "forbid"

    @property
    def n_rays(self) -> int:
        return self.n_angles * self.n_rays_per_angle

    def angles_radians(self) -> np.ndarray:
        """Evenly spread view angles, span endpoint excluded."""
        step = self.angle_span_degrees / self.n_angles
        degrees = self.start_angle_degrees + step * np.arange(self.n_angles)
        return np.deg2rad(degrees)


class Sinogram(BaseModel):
    """Measured line integrals b_delta, ordered angle-major, plus the fit/CV partition."""
    data: np.ndarray
    n_angles: int = Field(ge=1)
    n_rays_per_angle: int = Field(ge=1)
    fit_indices: Optional[np.ndarray] = None
    cv_indices: Optional[np.ndarray] = None
    noise_level_delta: float = Field(0.0, ge=0)

    class Config:
        arbitrary_types_allowed = True

    @field_validator("data", mode="before")
    @classmethod
    def _flatten(cls, value):
        return np.asarray(value, dtype=np.float64).reshape(-1)

    @field_validator("fit_indices", "cv_indices", mode="before")
    @classmethod
    def _as_index_array(cls, value):
        if value is None:
            return None
        return np.asarray(value, dtype=np.int64).reshape(-1)

    @model_validator(mode="after")
    def _check_partition(self):
        m = self.data.size
        if m != self.n_angles * self.n_rays_per_angle:
            raise ValueError(
                f"sinogram length {m} does not match {self.n_angles} angles x {self.n_rays_per_angle} rays"
            )
        if self.fit_indices is None:
            self.fit_indices = np.arange(m, dtype=np.int64)
        if self.cv_indices is None:
            self.cv_indices = np.zeros(0, dtype=np.int64)
        covered = np.zeros(m, dtype=np.int64)
        np.add.at(covered, self.fit_indices, 1)
        np.add.at(covered, self.cv_indices, 1)
        if not np.all(covered == 1):
            raise ValueError("fit and cv index sets must partition the sinogram rows")
        return self

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def b_fit(self) -> np.ndarray:
        return self.data[self.fit_indices]

    @property
    def b_cv(self) -> np.ndarray:
        return self.data[self.cv_indices]
