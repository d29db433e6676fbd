import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from pnpreg.models.imaging import Image
from pnpreg.utils.errors import RejectedInputError

logger = logging.getLogger(__name__)

# (intensity, semi-axis a, semi-axis b, centre x0, centre y0, rotation in degrees)
Ellipse = Tuple[float, float, float, float, float, float]

# Modified Shepp-Logan head (higher-contrast intensities), native range [0, 1]
SHEPP_LOGAN_ELLIPSES: List[Ellipse] = [
    (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    (-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
    (-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
    (-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
    (0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
    (0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
    (0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
    (0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
    (0.1, 0.023, 0.023, 0.0, -0.606, 0.0),
    (0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
]


def ellipse_table(mirrored: bool = False) -> List[Ellipse]:
    """The phantom's ellipses; mirrored=True reflects them about the vertical axis."""
    if not mirrored:
        return list(SHEPP_LOGAN_ELLIPSES)
    return [(A, a, b, -x0, y0, -phi) for A, a, b, x0, y0, phi in SHEPP_LOGAN_ELLIPSES]


def pixel_centres(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Normalised [-1, 1] coordinates of pixel centres; row 0 is the top row.

    Computed from integers so column j and column n-1-j are exact negatives.
    """
    idx = np.arange(n)
    x = (2.0 * idx + 1.0 - n) / n
    y = (n - 2.0 * idx - 1.0) / n
    X, Y = np.meshgrid(x, y)
    return X, Y


def _inside(X: np.ndarray, Y: np.ndarray, a: float, b: float, x0: float, y0: float, phi: float) -> np.ndarray:
    theta = np.deg2rad(abs(phi))
    c = np.cos(theta)
    s = np.copysign(np.sin(theta), phi)
    dx = X - x0
    dy = Y - y0
    xr = dx * c + dy * s
    yr = dy * c - dx * s
    return (xr / a) ** 2 + (yr / b) ** 2 <= 1.0


def shepp_logan(n: int, lo: float = 0.0, hi: float = 1.0, ellipses: Optional[Sequence[Ellipse]] = None) -> Image:
    """Shepp-Logan phantom on an n×n grid, rescaled so min = lo and max = hi."""
    if n < 16:
        raise RejectedInputError(f"phantom size must be at least 16, got {n}")
    if not lo < hi:
        raise RejectedInputError(f"phantom range needs lo < hi, got ({lo}, {hi})")

    X, Y = pixel_centres(n)
    phantom = np.zeros((n, n))
    for A, a, b, x0, y0, phi in (ellipses if ellipses is not None else SHEPP_LOGAN_ELLIPSES):
        phantom += A * _inside(X, Y, a, b, x0, y0, phi)

    p_min, p_max = phantom.min(), phantom.max()
    if p_max == p_min:
        raise RejectedInputError("phantom is constant and cannot be rescaled")
    phantom = (phantom - p_min) / (p_max - p_min) * (hi - lo) + lo
    logger.debug(f"Built {n}x{n} Shepp-Logan phantom in [{lo}, {hi}]")
    return Image.from_array(phantom)


def disk_phantom(n: int, radius: float, value: float = 1.0) -> Image:
    """Constant disk of the given radius (in pixels) centred on the grid."""
    X, Y = pixel_centres(n)
    half = n / 2.0
    inside = (X * half) ** 2 + (Y * half) ** 2 <= radius ** 2
    return Image.from_array(np.where(inside, value, 0.0))
