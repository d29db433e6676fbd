import numpy as np
import pytest

from pnpreg.models.imaging import Image, Sinogram
from pnpreg.storage.array_archive import (
    read_array_binary,
    read_array_csv,
    read_image_binary,
    read_image_csv,
    read_sinogram_binary,
    read_sinogram_csv,
    write_array_binary,
    write_array_csv,
    write_image_binary,
    write_image_csv,
    write_sinogram_binary,
    write_sinogram_csv,
)
from pnpreg.utils.errors import ArchiveError


def test_csv_layout(tmp_path):
    path = write_array_csv(tmp_path / "a.csv", (2, 3), np.array([0.1, 1.0, -2.5, 1e-300, 3.0, 1 / 3]))
    lines = path.read_text().split("\n")
    assert lines[0] == "2,3"
    assert lines[1] == "0.10000000000000001"
    assert len(lines) == 8 and lines[-1] == ""


def test_image_csv_is_exact(tmp_path, rng):
    image = Image.from_array(rng.standard_normal((5, 7)))
    restored = read_image_csv(write_image_csv(tmp_path / "img.csv", image))
    assert (restored.width, restored.height) == (7, 5)
    np.testing.assert_array_equal(restored.data, image.data)


def test_sinogram_binary_is_exact(tmp_path, rng):
    sinogram = Sinogram(data=rng.standard_normal(12), n_angles=3, n_rays_per_angle=4)
    path = write_sinogram_binary(tmp_path / "sino.bin", sinogram)
    assert path.stat().st_size == 16 + 12 * 8
    restored = read_sinogram_binary(path)
    assert (restored.n_angles, restored.n_rays_per_angle) == (3, 4)
    np.testing.assert_array_equal(restored.data, sinogram.data)


def test_binary_header_is_little_endian(tmp_path):
    path = write_array_binary(tmp_path / "a.bin", (2, 1), np.array([1.0, 2.0]))
    raw = path.read_bytes()
    assert raw[:16] == (2).to_bytes(8, "little") + (1).to_bytes(8, "little")
    assert read_array_binary(path)[0] == (2, 1)


def test_image_binary_and_sinogram_csv(tmp_path, ramp_image):
    assert read_image_binary(write_image_binary(tmp_path / "i.bin", ramp_image)).data.tolist() == ramp_image.data.tolist()
    sinogram = Sinogram(data=np.arange(6.0), n_angles=2, n_rays_per_angle=3)
    assert read_sinogram_csv(write_sinogram_csv(tmp_path / "s.csv", sinogram)).data.tolist() == list(range(6))


def test_size_mismatch_detected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("2,2\n1.0\n2.0\n3.0\n")
    with pytest.raises(ArchiveError):
        read_array_csv(path)
    truncated = tmp_path / "bad.bin"
    truncated.write_bytes(b"\x01\x00")
    with pytest.raises(ArchiveError):
        read_array_binary(truncated)


def test_missing_file(tmp_path):
    with pytest.raises(ArchiveError):
        read_array_csv(tmp_path / "nope.csv")
