import numpy as np
import pytest

from pnpreg.models.imaging import Geometry, Sinogram
from pnpreg.services.core_ops.operator import apply, apply_adjoint
from pnpreg.services.tomography.phantom import disk_phantom, ellipse_table, shepp_logan
from pnpreg.services.tomography.radon import build_radon, fan_parameters, ray_endpoints, trace_ray
from pnpreg.services.tomography.sinogram import add_noise, cv_subset_size, snr_db, split_cv
from pnpreg.utils.errors import EmptyOperatorError, RejectedInputError


@pytest.mark.parametrize("lo, hi", [(0.0, 1.0), (-1.0, 1.0)])
def test_shepp_logan_range(lo, hi):
    phantom = shepp_logan(128, lo, hi)
    assert (phantom.width, phantom.height) == (128, 128)
    assert phantom.data.min() == lo
    assert phantom.data.max() == hi


def test_shepp_logan_rejects_bad_input():
    with pytest.raises(RejectedInputError):
        shepp_logan(8)
    with pytest.raises(RejectedInputError):
        shepp_logan(32, 1.0, 1.0)


def test_mirrored_table_gives_mirrored_phantom():
    phantom = shepp_logan(64).as_array()
    mirrored = shepp_logan(64, ellipses=ellipse_table(mirrored=True)).as_array()
    assert np.allclose(mirrored, phantom[:, ::-1], atol=1e-12)


def test_trace_ray_axis_aligned_row():
    pixels, weights = trace_ray((-5.0, 0.5), (5.0, 0.5), 4)
    assert list(pixels) == [4, 5, 6, 7]
    assert np.allclose(weights, 1.0, atol=1e-12)


def test_trace_ray_pixel_diagonal():
    pixels, weights = trace_ray((0.0, 0.0), (1.0, 1.0), 4)
    assert list(pixels) == [6]
    assert weights[0] == pytest.approx(np.sqrt(2.0), abs=1e-12)


def test_trace_ray_missing_the_grid():
    pixels, weights = trace_ray((10.0, 10.0), (20.0, 10.0), 4)
    assert pixels.size == 0 and weights.size == 0


def test_vertical_rays_have_full_chord_length():
    geometry = Geometry(n_angles=1, n_rays_per_angle=15)
    A = build_radon(geometry, 16)
    assert A.shape == (15, 256)
    assert np.allclose(A.row_sums(), 16.0, atol=1e-12)


def square_chord(p0, p1, half):
    """Length of the segment p0 -> p1 inside the closed square [-half, half]²."""
    p0, p1 = np.asarray(p0, dtype=float), np.asarray(p1, dtype=float)
    delta = p1 - p0
    t_lo, t_hi = 0.0, 1.0
    for axis in range(2):
        if delta[axis] == 0.0:
            if abs(p0[axis]) > half:
                return 0.0
            continue
        t1, t2 = sorted(((-half - p0[axis]) / delta[axis], (half - p0[axis]) / delta[axis]))
        t_lo, t_hi = max(t_lo, t1), min(t_hi, t2)
    return max(0.0, t_hi - t_lo) * float(np.hypot(*delta))


@pytest.mark.parametrize(
    "geometry",
    [
        Geometry(n_angles=7, n_rays_per_angle=25),
        Geometry(n_angles=5, n_rays_per_angle=19, detector_spacing=0.73, detector_offset=0.31),
        Geometry(kind="fan_curved", n_angles=9, n_rays_per_angle=21, angle_span_degrees=360),
    ],
)
def test_every_row_sums_to_its_chord_length(geometry):
    n = 16
    A = build_radon(geometry, n)
    chords = np.array([square_chord(p0, p1, n / 2.0) for p0, p1 in ray_endpoints(geometry, n)])
    assert chords.size == A.rows
    assert (chords > 0).sum() > A.rows // 2
    np.testing.assert_allclose(A.row_sums(), chords, rtol=0, atol=1e-9)


def test_rays_outside_the_grid_give_empty_operator():
    geometry = Geometry(n_angles=2, n_rays_per_angle=1, detector_offset=100.0)
    with pytest.raises(EmptyOperatorError, match="empty operator"):
        build_radon(geometry, 16)


def test_radon_adjoint_consistency(rng):
    for geometry in (Geometry(n_angles=7, n_rays_per_angle=25), Geometry(kind="fan_curved", n_angles=9, n_rays_per_angle=21, angle_span_degrees=360)):
        A = build_radon(geometry, 16)
        x = rng.standard_normal(A.cols)
        y = rng.standard_normal(A.rows)
        assert apply(A, x) @ y == pytest.approx(x @ apply_adjoint(A, y), rel=1e-10)


def test_disk_projection_matches_chord_lengths():
    n, radius = 32, 6.0
    # 0 and 90 degree views with rays through pixel centres
    geometry = Geometry(n_angles=2, n_rays_per_angle=31, detector_offset=0.5)
    A = build_radon(geometry, n)
    values = apply(A, disk_phantom(n, radius)).reshape(2, 31)
    offsets = np.arange(31) - 15.0 + 0.5
    chords = 2.0 * np.sqrt(np.clip(radius ** 2 - offsets ** 2, 0.0, None))
    assert np.all(np.abs(values - chords[None, :]) <= 2.0)


def test_fan_geometry_covers_the_grid():
    geometry = Geometry(kind="fan_curved", n_angles=4, n_rays_per_angle=31, angle_span_degrees=360)
    A = build_radon(geometry, 16)
    assert A.rows == 124
    # the central ray of every view crosses the centre of the grid
    centre_rays = apply(A, np.ones(A.cols)).reshape(4, 31)[:, 15]
    assert np.allclose(centre_rays, 16.0, atol=1e-9)


def test_fan_source_inside_grid_is_rejected():
    geometry = Geometry(kind="fan_curved", source_radius=5.0)
    with pytest.raises(RejectedInputError):
        fan_parameters(geometry, 16)


def test_add_noise_hits_target(rng):
    b = rng.uniform(1.0, 2.0, 500)
    sinogram = add_noise(b, 0.01, seed=3)
    rel = np.linalg.norm(sinogram.data - b) / np.linalg.norm(b)
    assert rel == pytest.approx(0.01, rel=1e-12)
    assert sinogram.noise_level_delta == pytest.approx(np.linalg.norm(sinogram.data - b), rel=1e-12)
    assert snr_db(b, sinogram.data) == pytest.approx(40.0, abs=1e-9)


def test_add_noise_zero_target_and_determinism(rng):
    b = rng.uniform(1.0, 2.0, 100)
    clean = add_noise(b, 0.0, seed=1)
    assert np.array_equal(clean.data, b)
    assert clean.noise_level_delta == 0.0
    assert snr_db(b, clean.data) == float("inf")

    first = add_noise(b, 0.05, seed=7)
    again = add_noise(b, 0.05, seed=7)
    other = add_noise(b, 0.05, seed=8)
    assert np.array_equal(first.data, again.data)
    assert not np.array_equal(first.data, other.data)


def test_add_noise_rejects_bad_input():
    with pytest.raises(RejectedInputError):
        add_noise(np.ones(4), -0.1, seed=0)
    with pytest.raises(RejectedInputError):
        add_noise(np.zeros(4), 0.01, seed=0)


@pytest.mark.parametrize("m, expected", [(100, 1), (8064, 81), (2850, 29)])
def test_cv_subset_size(m, expected):
    assert cv_subset_size(m, 0.01) == expected


def test_split_cv_partitions_rows():
    sinogram = Sinogram(data=np.arange(8064.0), n_angles=1, n_rays_per_angle=8064)
    split = split_cv(sinogram, 0.01, seed=5)
    assert split.cv_indices.size == 81
    assert split.fit_indices.size == 8064 - 81
    assert np.intersect1d(split.cv_indices, split.fit_indices).size == 0
    assert np.array_equal(np.sort(np.concatenate([split.cv_indices, split.fit_indices])), np.arange(8064))
    assert np.array_equal(split_cv(sinogram, 0.01, seed=5).cv_indices, split.cv_indices)


def test_split_cv_rejects_empty_sets():
    sinogram = Sinogram(data=np.ones(10), n_angles=1, n_rays_per_angle=10)
    with pytest.raises(RejectedInputError):
        split_cv(sinogram, 0.01, seed=0)


def test_desk_problem_dimensions(desk_problem):
    assert desk_problem.operator.shape == (2850, 4096)
    assert desk_problem.sinogram.cv_indices.size == 29
    assert desk_problem.A_fit.rows == 2850 - 29
    rel = desk_problem.delta / np.linalg.norm(desk_problem.b_clean)
    assert rel == pytest.approx(0.01, rel=1e-12)


def test_fit_delta_is_the_noise_on_the_fit_rows(tiny_problem):
    fit = tiny_problem.sinogram.fit_indices
    expected = np.linalg.norm(tiny_problem.b_fit - tiny_problem.b_clean[fit])
    assert tiny_problem.fit_delta == pytest.approx(expected, rel=1e-12)
    assert 0 < tiny_problem.fit_delta <= tiny_problem.delta
