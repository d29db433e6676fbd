import logging
from typing import Callable, Dict

import numpy as np

from pnpreg.models.denoising import DenoiserKind, DenoiserSpec
from pnpreg.models.imaging import Image
from pnpreg.services.denoisers.filters import gaussian_smooth, median_smooth
from pnpreg.services.denoisers.tv import tv_prox_array
from pnpreg.utils.errors import RejectedInputError

logger = logging.getLogger(__name__)

_FILTERS: Dict[DenoiserKind, Callable[[DenoiserSpec, np.ndarray], np.ndarray]] = {
    DenoiserKind.GAUSSIAN: lambda spec, img: gaussian_smooth(img, spec.sigma),
    DenoiserKind.MEDIAN: lambda spec, img: median_smooth(img, spec.window),
    DenoiserKind.TV_PROX: lambda spec, img: tv_prox_array(img, spec.sigma, spec.inner_iters),
}


def _check_finite(x: Image) -> None:
    if not np.all(np.isfinite(x.data)):
        raise RejectedInputError("denoiser input contains non-finite values")


def _is_neutral(spec: DenoiserSpec) -> bool:
    return spec.kind == DenoiserKind.IDENTITY or spec.sigma == 0


def _raw(spec: DenoiserSpec, image: np.ndarray) -> np.ndarray:
    if _is_neutral(spec):
        return image.copy()
    return _FILTERS[spec.kind](spec, image)


def rescale_wrap(spec: DenoiserSpec, x: Image) -> Image:
    """Apply the denoiser to x mapped onto [0, 1], then map the result back."""
    _check_finite(x)
    x_lo, x_hi = float(x.data.min()), float(x.data.max())
    image = x.as_array()
    if not x_hi > x_lo:
        logger.warning(f"Rescale wrapper bypassed: constant image (value {x_lo})")
        return x.like(_raw(spec, image).ravel())
    span = x_hi - x_lo
    denoised = _raw(spec, (image - x_lo) / span)
    return x.like((span * denoised + x_lo).ravel())


def denoise(spec: DenoiserSpec, x: Image) -> Image:
    """H_sigma(x); the rescale wrapper is used when spec.rescale_wrap is set."""
    _check_finite(x)
    if _is_neutral(spec):
        return x.like(x.data.copy())
    if spec.rescale_wrap:
        return rescale_wrap(spec, x)
    return x.like(_raw(spec, x.as_array()).ravel())


def denoise_strength(spec: DenoiserSpec, x: Image) -> float:
    """||H_sigma(x) - x||."""
    return float(np.linalg.norm(denoise(spec, x).data - x.data))
