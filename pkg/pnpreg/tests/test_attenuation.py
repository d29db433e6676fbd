import numpy as np
import pytest

from pnpreg.models.denoising import DenoiserSpec
from pnpreg.models.imaging import Image
from pnpreg.models.solver import SolverConfig
from pnpreg.services.selection.criteria import bind_criterion, criterion_for
from pnpreg.services.solvers.attenuation import attenuate_combined, attenuate_gamma, attenuate_select, select_sigma
from pnpreg.utils.errors import RejectedInputError

ALPHA_GRID = SolverConfig().alpha_grid


def _pair(x, h):
    return Image.from_array(np.array(x, dtype=float)), Image.from_array(np.array(h, dtype=float))


def test_gamma_formula():
    x, hx = _pair([[0.0, 0.0]], [[4.0, 0.0]])
    z, alpha = attenuate_gamma(x, hx, grad_step_norm=2.0, gamma=0.5)
    assert alpha == 0.25
    assert np.allclose(z.data, [1.0, 0.0])


def test_gamma_weak_denoiser_is_not_attenuated():
    x, hx = _pair([[0.0, 0.0]], [[0.5, 0.0]])
    z, alpha = attenuate_gamma(x, hx, grad_step_norm=2.0, gamma=0.5)
    assert alpha == 1.0
    assert np.array_equal(z.data, hx.data)


def test_gamma_with_no_denoising_change():
    x, _ = _pair([[1.0, 2.0]], [[1.0, 2.0]])
    z, alpha = attenuate_gamma(x, x, grad_step_norm=0.3, gamma=0.5)
    assert alpha == 1.0
    assert np.array_equal(z.data, x.data)


def test_gamma_out_of_range():
    x, hx = _pair([[0.0]], [[1.0]])
    with pytest.raises(RejectedInputError):
        attenuate_gamma(x, hx, 1.0, 0.0)
    with pytest.raises(RejectedInputError):
        attenuate_gamma(x, hx, 1.0, 1.5)


@pytest.fixture
def clean_scorer(tiny_problem):
    """Cross-validation scorer against noiseless data, so the truth scores exactly 0."""
    return bind_criterion(criterion_for(tiny_problem.sinogram), tiny_problem.operator, tiny_problem.b_clean)


def test_select_degenerate_denoiser_returns_smallest_alpha(ramp_image, clean_scorer):
    z, alpha = attenuate_select(ramp_image, ramp_image, clean_scorer, ALPHA_GRID)
    assert alpha == 0.05
    assert np.array_equal(z.data, ramp_image.data)


def test_select_prefers_full_denoising_towards_truth(tiny_problem, clean_scorer, rng):
    truth = tiny_problem.truth
    noisy = truth.like(truth.data + 0.1 * rng.standard_normal(truth.data.size))
    _, alpha = attenuate_select(noisy, truth, clean_scorer, ALPHA_GRID)
    assert alpha == 1.0


def test_select_returns_grid_argmin(tiny_problem, clean_scorer, rng):
    truth = tiny_problem.truth
    x = truth.like(truth.data + 0.1 * rng.standard_normal(truth.data.size))
    hx = truth.like(truth.data + 0.1 * rng.standard_normal(truth.data.size))
    z, alpha = attenuate_select(x, hx, clean_scorer, ALPHA_GRID)
    chosen = clean_scorer(z)
    for a in ALPHA_GRID:
        assert chosen <= clean_scorer(x.like(x.data + a * (hx.data - x.data)))
    assert alpha in ALPHA_GRID


def test_select_rejects_bad_grid(ramp_image, clean_scorer):
    with pytest.raises(RejectedInputError):
        attenuate_select(ramp_image, ramp_image, clean_scorer, [])
    with pytest.raises(RejectedInputError):
        attenuate_select(ramp_image, ramp_image, clean_scorer, [0.0, 0.5])


def test_select_respects_admissible_filter(tiny_problem, clean_scorer, rng):
    truth = tiny_problem.truth
    noisy = truth.like(truth.data + 0.1 * rng.standard_normal(truth.data.size))
    gap = float(np.linalg.norm(noisy.data - truth.data))

    def far_enough(candidate):
        return np.linalg.norm(candidate.data - truth.data) >= 0.42 * gap

    # the criterion keeps improving towards the truth, so the last admitted alpha wins
    z, alpha = attenuate_select(noisy, truth, clean_scorer, ALPHA_GRID, admissible=far_enough)
    assert alpha == 0.55
    assert far_enough(z)
    # nothing admissible: the largest alpha
    _, alpha = attenuate_select(noisy, truth, clean_scorer, [0.1, 0.3], admissible=lambda c: False)
    assert alpha == 0.3


def test_combined_never_exceeds_gamma_bound(tiny_problem, clean_scorer):
    truth = tiny_problem.truth
    x = truth.like(np.zeros_like(truth.data))
    # full denoising would reach the truth, but the bound caps alpha at 0.5·1/||truth||
    step_norm = 1.0
    cap = 0.5 * step_norm / float(np.linalg.norm(truth.data))
    z, alpha = attenuate_combined(x, truth, step_norm, 0.5, clean_scorer, ALPHA_GRID)
    assert alpha == pytest.approx(cap)
    assert np.allclose(z.data, cap * truth.data)


def test_combined_picks_from_grid_below_the_bound(tiny_problem, clean_scorer, rng):
    truth = tiny_problem.truth
    noisy = truth.like(truth.data + 0.1 * rng.standard_normal(truth.data.size))
    step_norm = 0.8 * float(np.linalg.norm(truth.data - noisy.data))
    _, alpha = attenuate_combined(noisy, truth, step_norm, 0.5, clean_scorer, ALPHA_GRID)
    assert alpha == pytest.approx(0.4)
    _, unbounded = attenuate_combined(noisy, truth, 1e6, 0.5, clean_scorer, ALPHA_GRID)
    assert unbounded == 1.0


def test_combined_with_zero_step_keeps_iterate(ramp_image, clean_scorer):
    shifted = ramp_image.like(ramp_image.data + 1.0)
    z, alpha = attenuate_combined(ramp_image, shifted, 0.0, 0.5, clean_scorer, ALPHA_GRID)
    assert alpha == 0.0
    assert np.array_equal(z.data, ramp_image.data)


def test_select_sigma(tiny_problem, clean_scorer):
    spec = DenoiserSpec(kind="gaussian")
    assert select_sigma(tiny_problem.truth, spec, (0.02, 0.02), 4, clean_scorer) == 0.02
    sigma = select_sigma(tiny_problem.truth, spec, (0.0, 0.05), 6, clean_scorer)
    assert sigma == 0.0
    noisy = tiny_problem.truth.like(tiny_problem.truth.data + 0.2)
    chosen = select_sigma(noisy, spec, (0.0, 0.05), 6, clean_scorer)
    assert chosen in list(np.linspace(0.0, 0.05, 6))


def test_select_sigma_rejects_bad_ranges(ramp_image, clean_scorer):
    spec = DenoiserSpec(kind="gaussian")
    with pytest.raises(RejectedInputError):
        select_sigma(ramp_image, spec, (0.1, 0.0), 4, clean_scorer)
    with pytest.raises(RejectedInputError):
        select_sigma(ramp_image, spec, (0.0, 0.1), 1, clean_scorer)
