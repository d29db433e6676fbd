import numpy as np
import pytest

from pnpreg.models.imaging import Image
from pnpreg.services.metrics.quality import d_err, evaluate_metrics, psnr, rel_mse, s_err, ssim
from pnpreg.services.selection.criteria import criterion_for, evaluate_criterion
from pnpreg.models.selection import CriterionKind
from pnpreg.utils.errors import RejectedInputError


@pytest.fixture
def truth(tiny_problem):
    return tiny_problem.truth


def test_rel_mse(truth):
    assert rel_mse(truth, truth) == 0.0
    assert rel_mse(truth.like(2.0 * truth.data), truth) == pytest.approx(1.0, rel=1e-14)
    assert rel_mse(truth.like(np.zeros_like(truth.data)), truth) == 1.0


def test_rel_mse_zero_truth_rejected(truth):
    zero = truth.like(np.zeros_like(truth.data))
    with pytest.raises(RejectedInputError):
        rel_mse(truth, zero)


def test_shape_mismatch_rejected(truth):
    other = Image.from_array(np.ones((16, 17)))
    with pytest.raises(RejectedInputError):
        psnr(other, truth)


def test_psnr_saturates_on_exact_match(truth):
    assert psnr(truth, truth) == 300.0


def test_psnr_known_offsets():
    truth = Image.from_array(np.linspace(0.0, 1.0, 256).reshape(16, 16))
    assert psnr(truth.like(truth.data + 0.1), truth) == pytest.approx(20.0, abs=1e-9)
    assert psnr(truth.like(truth.data - 0.01), truth) == pytest.approx(40.0, abs=1e-9)


def test_psnr_decreases_as_error_grows(truth, rng):
    noise = rng.standard_normal(truth.data.size)
    values = [psnr(truth.like(truth.data + c * noise), truth) for c in (1e-3, 1e-2, 1e-1, 1.0)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_ssim_identity_and_affine_invariance(truth):
    assert ssim(truth, truth) == pytest.approx(1.0, abs=1e-12)
    assert ssim(truth.like(2.0 * truth.data + 3.0), truth) == pytest.approx(1.0, abs=1e-10)


def test_ssim_noise_and_symmetry(truth, rng):
    noisy = truth.like(truth.data + 0.2 * rng.standard_normal(truth.data.size))
    value = ssim(noisy, truth)
    assert value < 1.0
    assert ssim(truth, noisy) == pytest.approx(value, abs=1e-12)


def test_ssim_rejects_constant_truth_and_small_images(truth):
    constant = truth.like(np.full_like(truth.data, 0.5))
    with pytest.raises(RejectedInputError):
        ssim(truth, constant)
    small = Image.from_array(np.random.default_rng(0).random((8, 8)))
    with pytest.raises(RejectedInputError):
        ssim(small, small)


def test_constant_candidate_is_scored_with_a_warning(truth, caplog):
    constant = truth.like(np.full_like(truth.data, 0.5))
    assert ssim(constant, truth) < 1.0
    assert "constant" in caplog.text


def test_residual_errors_match_criteria(tiny_problem):
    x = tiny_problem.truth.data + 0.05
    A, b = tiny_problem.operator, tiny_problem.sinogram.data
    cv = criterion_for(tiny_problem.sinogram)
    dp = criterion_for(tiny_problem.sinogram, CriterionKind.DISCREPANCY_PRINCIPLE)
    assert s_err(tiny_problem.A_cv, tiny_problem.b_cv, x) == evaluate_criterion(cv, A, b, x)
    assert d_err(tiny_problem.A_fit, tiny_problem.b_fit, x) == evaluate_criterion(dp, A, b, x)


def test_residual_errors_limits(tiny_problem):
    A_fit = tiny_problem.A_fit
    clean = A_fit.matrix @ tiny_problem.truth.data
    assert d_err(A_fit, clean, tiny_problem.truth) == 0.0
    assert d_err(A_fit, tiny_problem.b_fit, np.zeros(A_fit.cols)) == 1.0


def test_evaluate_metrics_report(tiny_problem):
    x = tiny_problem.truth.like(tiny_problem.truth.data * 0.9)
    criterion = criterion_for(tiny_problem.sinogram)
    report = evaluate_metrics(x, tiny_problem.truth, tiny_problem.operator, tiny_problem.sinogram.data, criterion)
    assert report.mse == pytest.approx(0.1, rel=1e-12)
    assert report.psnr == psnr(x, tiny_problem.truth)
    assert report.ssim == pytest.approx(1.0, abs=1e-10)
    assert report.s_err == s_err(tiny_problem.A_cv, tiny_problem.b_cv, x)
    assert report.d_err == d_err(tiny_problem.A_fit, tiny_problem.b_fit, x)
