import logging
from typing import Iterator, Tuple

import numpy as np
import scipy.sparse as sp

from pnpreg.models.imaging import Geometry, GeometryKind
from pnpreg.services.core_ops.operator import SparseOperator
from pnpreg.utils.errors import EmptyOperatorError, RejectedInputError

logger = logging.getLogger(__name__)

# intersections shorter than this are numerical noise at pixel corners
MIN_SEGMENT_LENGTH = 1e-12


def _slab(start: float, delta: float, lo: float, hi: float) -> Tuple[float, float]:
    """Parameter interval in which start + t*delta lies inside [lo, hi]."""
    if delta == 0.0:
        if lo <= start <= hi:
            return -np.inf, np.inf
        return np.inf, -np.inf
    t1 = (lo - start) / delta
    t2 = (hi - start) / delta
    return min(t1, t2), max(t1, t2)


def trace_ray(p0, p1, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Siddon traversal of the segment p0 -> p1 through an n×n unit-pixel grid.

    The grid covers [-n/2, n/2]² with row 0 at the top. Returns the row-major
    pixel indices crossed and the intersection length in each.
    """
    x0, y0 = float(p0[0]), float(p0[1])
    dx, dy = float(p1[0]) - x0, float(p1[1]) - y0
    length = np.hypot(dx, dy)
    empty = (np.zeros(0, dtype=np.int64), np.zeros(0))
    if length == 0.0:
        return empty

    half = n / 2.0
    tx_min, tx_max = _slab(x0, dx, -half, half)
    ty_min, ty_max = _slab(y0, dy, -half, half)
    t_min = max(0.0, tx_min, ty_min)
    t_max = min(1.0, tx_max, ty_max)
    if t_min >= t_max:
        return empty

    planes = np.arange(n + 1) - half
    crossings = [np.array([t_min, t_max])]
    if dx != 0.0:
        crossings.append((planes - x0) / dx)
    if dy != 0.0:
        crossings.append((planes - y0) / dy)
    t = np.unique(np.concatenate(crossings))
    t = t[(t >= t_min) & (t <= t_max)]

    seg = np.diff(t) * length
    mid = 0.5 * (t[:-1] + t[1:])
    keep = seg >= MIN_SEGMENT_LENGTH
    seg, mid = seg[keep], mid[keep]
    if seg.size == 0:
        return empty

    # rays on the outer boundary belong to the boundary pixels
    cols = np.clip(np.floor(x0 + mid * dx + half).astype(np.int64), 0, n - 1)
    rows = np.clip(np.floor(half - (y0 + mid * dy)).astype(np.int64), 0, n - 1)
    pixels = rows * n + cols
    unique, inverse = np.unique(pixels, return_inverse=True)
    weights = np.bincount(inverse, weights=seg)
    return unique, weights


def _parallel_rays(geometry: Geometry, n: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    spacing = geometry.detector_spacing if geometry.detector_spacing is not None else 1.0
    R = geometry.n_rays_per_angle
    offsets = (np.arange(R) - (R - 1) / 2.0) * spacing + geometry.detector_offset
    reach = float(n)  # beyond the grid's half-diagonal
    for theta in geometry.angles_radians():
        normal = np.array([np.cos(theta), np.sin(theta)])
        direction = np.array([-np.sin(theta), np.cos(theta)])
        for s in offsets:
            yield s * normal - reach * direction, s * normal + reach * direction


def fan_parameters(geometry: Geometry, n: int) -> Tuple[float, float, float]:
    """(source radius, detector radius, angular ray spacing) with defaults filled in."""
    source_radius = geometry.source_radius if geometry.source_radius is not None else 2.0 * n
    detector_radius = geometry.detector_radius if geometry.detector_radius is not None else 2.0 * n
    disk_radius = n / np.sqrt(2.0)
    if source_radius <= disk_radius:
        raise RejectedInputError(
            f"fan source radius {source_radius} must lie outside the grid (radius {disk_radius:.3f})"
        )
    if geometry.detector_spacing is not None:
        spacing = geometry.detector_spacing
    else:
        half_fan = np.arcsin(disk_radius / source_radius)
        R = geometry.n_rays_per_angle
        spacing = 2.0 * half_fan / (R - 1) if R > 1 else 2.0 * half_fan
    return source_radius, detector_radius, spacing


def _fan_rays(geometry: Geometry, n: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    source_radius, detector_radius, spacing = fan_parameters(geometry, n)
    R = geometry.n_rays_per_angle
    fan_angles = (np.arange(R) - (R - 1) / 2.0) * spacing + geometry.detector_offset
    reach = source_radius + detector_radius
    for theta in geometry.angles_radians():
        source = source_radius * np.array([np.cos(theta), np.sin(theta)])
        central = theta + np.pi  # towards the isocentre
        for gamma in fan_angles:
            direction = np.array([np.cos(central + gamma), np.sin(central + gamma)])
            yield source, source + reach * direction


def ray_endpoints(geometry: Geometry, n: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Segment end points for every ray, angle-major."""
    if geometry.kind == GeometryKind.PARALLEL:
        return _parallel_rays(geometry, n)
    return _fan_rays(geometry, n)


def build_radon(geometry: Geometry, n: int) -> SparseOperator:
    """Ray-driven system matrix: entry (r, c) is the length of ray r inside pixel c."""
    if n < 16:
        raise RejectedInputError(f"grid size must be at least 16, got {n}")

    row_parts, col_parts, weight_parts = [], [], []
    for r, (p0, p1) in enumerate(ray_endpoints(geometry, n)):
        pixels, weights = trace_ray(p0, p1, n)
        if pixels.size:
            row_parts.append(np.full(pixels.size, r, dtype=np.int64))
            col_parts.append(pixels)
            weight_parts.append(weights)

    if not row_parts:
        raise EmptyOperatorError()

    shape = (geometry.n_rays, n * n)
    matrix = sp.csr_matrix(
        (np.concatenate(weight_parts), (np.concatenate(row_parts), np.concatenate(col_parts))),
        shape=shape,
    )
    operator = SparseOperator(matrix)
    missed = geometry.n_rays - len(row_parts)
    logger.info(
        f"Built {geometry.kind.value} radon operator {operator.rows}x{operator.cols} "
        f"with {operator.nnz} nonzeros ({missed} rays miss the grid)"
    )
    return operator
