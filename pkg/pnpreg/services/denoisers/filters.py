import numpy as np
from scipy import ndimage

# kernel std in pixels = clamp(GAUSSIAN_STD_PER_SIGMA * sigma, min, max)
GAUSSIAN_STD_PER_SIGMA = 50.0
GAUSSIAN_STD_MIN = 0.3
GAUSSIAN_STD_MAX = 5.0
GAUSSIAN_TRUNCATE = 4.0


def gaussian_std(sigma: float) -> float:
    return float(np.clip(GAUSSIAN_STD_PER_SIGMA * sigma, GAUSSIAN_STD_MIN, GAUSSIAN_STD_MAX))


def gaussian_smooth(image: np.ndarray, sigma: float) -> np.ndarray:
    """Unit-sum Gaussian blur with half-sample reflective boundary."""
    return ndimage.gaussian_filter(image, sigma=gaussian_std(sigma), mode="reflect", truncate=GAUSSIAN_TRUNCATE)


def median_smooth(image: np.ndarray, window: int) -> np.ndarray:
    return ndimage.median_filter(image, size=window, mode="reflect")
