import logging
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from pnpreg.models.imaging import Image, Sinogram
from pnpreg.utils.errors import ArchiveError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# 17 significant digits round-trip any float64 exactly
FLOAT_FORMAT = "%.17g"
BINARY_HEADER_DTYPE = np.dtype("<u8")
BINARY_DATA_DTYPE = np.dtype("<f8")


def write_array_csv(path: PathLike, dims: Tuple[int, int], values: np.ndarray) -> Path:
    """
    Writes a flat array as CSV: a "d0,d1" header line, then one value per line.

    Args:
        path: Destination file.
        dims: The two dimensions stored in the header.
        values: Row-major data of length d0*d1.

    Returns:
        The path written.

    Raises:
        ArchiveError: If the file cannot be written.
    """
    path = Path(path)
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, values, fmt=FLOAT_FORMAT, header=f"{dims[0]},{dims[1]}", comments="", newline="\n")
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}", exc_info=True)
        raise ArchiveError(path, str(e)) from e
    logger.debug(f"Wrote {values.size} values to {path}")
    return path


def read_array_csv(path: PathLike) -> Tuple[Tuple[int, int], np.ndarray]:
    """
    Reads a file written by write_array_csv.

    Returns:
        ((d0, d1), flat float64 data)
    """
    path = Path(path)
    try:
        with open(path, "r") as f:
            header = f.readline().strip()
            values = np.array([float(line) for line in f if line.strip()], dtype=np.float64)
        d0, d1 = (int(part) for part in header.split(","))
    except (OSError, ValueError) as e:
        logger.error(f"Failed to read {path}: {e}", exc_info=True)
        raise ArchiveError(path, str(e)) from e
    if values.size != d0 * d1:
        raise ArchiveError(path, f"header says {d0}x{d1} but file holds {values.size} values")
    return (d0, d1), values


def write_array_binary(path: PathLike, dims: Tuple[int, int], values: np.ndarray) -> Path:
    """Two little-endian uint64 dims followed by little-endian float64 data."""
    path = Path(path)
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "wb") as f:
            f.write(np.array(dims, dtype=BINARY_HEADER_DTYPE).tobytes())
            f.write(values.astype(BINARY_DATA_DTYPE).tobytes())
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}", exc_info=True)
        raise ArchiveError(path, str(e)) from e
    return path


def read_array_binary(path: PathLike) -> Tuple[Tuple[int, int], np.ndarray]:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        logger.error(f"Failed to read {path}: {e}", exc_info=True)
        raise ArchiveError(path, str(e)) from e
    header_size = 2 * BINARY_HEADER_DTYPE.itemsize
    if len(raw) < header_size:
        raise ArchiveError(path, "file shorter than its 16-byte header")
    d0, d1 = (int(v) for v in np.frombuffer(raw[:header_size], dtype=BINARY_HEADER_DTYPE))
    values = np.frombuffer(raw[header_size:], dtype=BINARY_DATA_DTYPE).astype(np.float64)
    if values.size != d0 * d1:
        raise ArchiveError(path, f"header says {d0}x{d1} but file holds {values.size} values")
    return (d0, d1), values


def write_image_csv(path: PathLike, image: Image) -> Path:
    return write_array_csv(path, (image.width, image.height), image.data)


def read_image_csv(path: PathLike) -> Image:
    (width, height), values = read_array_csv(path)
    return Image(width=width, height=height, data=values)


def write_sinogram_csv(path: PathLike, sinogram: Sinogram) -> Path:
    return write_array_csv(path, (sinogram.n_angles, sinogram.n_rays_per_angle), sinogram.data)


def read_sinogram_csv(path: PathLike) -> Sinogram:
    (n_angles, n_rays), values = read_array_csv(path)
    return Sinogram(data=values, n_angles=n_angles, n_rays_per_angle=n_rays)


def write_image_binary(path: PathLike, image: Image) -> Path:
    return write_array_binary(path, (image.width, image.height), image.data)


def read_image_binary(path: PathLike) -> Image:
    (width, height), values = read_array_binary(path)
    return Image(width=width, height=height, data=values)


def write_sinogram_binary(path: PathLike, sinogram: Sinogram) -> Path:
    return write_array_binary(path, (sinogram.n_angles, sinogram.n_rays_per_angle), sinogram.data)


def read_sinogram_binary(path: PathLike) -> Sinogram:
    (n_angles, n_rays), values = read_array_binary(path)
    return Sinogram(data=values, n_angles=n_angles, n_rays_per_angle=n_rays)


EXPORT_FORMATS = ("csv", "binary")


def export_problem_arrays(out_dir: PathLike, name: str, truth: Image, sinogram: Sinogram, fmt: str = "csv") -> List[Path]:
    """Write the phantom and the noisy sinogram of a run as <name>_phantom.<ext> and <name>_sinogram.<ext>."""
    if fmt not in EXPORT_FORMATS:
        raise ArchiveError(out_dir, f"unknown export format {fmt!r} (expected one of {', '.join(EXPORT_FORMATS)})")
    out_dir = Path(out_dir)
    if fmt == "csv":
        paths = [
            write_image_csv(out_dir / f"{name}_phantom.csv", truth),
            write_sinogram_csv(out_dir / f"{name}_sinogram.csv", sinogram),
        ]
    else:
        paths = [
            write_image_binary(out_dir / f"{name}_phantom.bin", truth),
            write_sinogram_binary(out_dir / f"{name}_sinogram.bin", sinogram),
        ]
    logger.info(f"Exported phantom and sinogram of {name} to {out_dir} ({fmt})")
    return paths
