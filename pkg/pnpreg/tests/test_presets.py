"""The shipped presets on the 64x64 desk problem, run once per session."""
from pathlib import Path

import numpy as np
import pytest

from pnpreg.config.presets import ADMM_SWEEP, PRESETS, load_preset
from pnpreg.models.experiment import ExperimentResult
from pnpreg.models.solver import FamilyLabel
from pnpreg.services.selection import detect_semiconvergence
from pnpreg.tasks import run_batch

DESK_PRESETS = [name for name in sorted(PRESETS) if name != "full_scale_fan"]


@pytest.fixture(scope="session")
def preset_results(tmp_path_factory):
    out = tmp_path_factory.mktemp("presets")
    results = run_batch([load_preset(name) for name in DESK_PRESETS], output_dir=out, show_progress=False)
    for name, result in results.items():
        assert isinstance(result, ExperimentResult), f"{name}: {result}"
    return results


def mse_curve(result: ExperimentResult) -> np.ndarray:
    return result.trace.series("mse_vs_truth")


@pytest.mark.parametrize("name", ["example1_weak", "example1_landweber"])
def test_weak_regularisation_semiconverges(preset_results, name):
    result = preset_results[name]
    mse = mse_curve(result)
    rises, argmin = detect_semiconvergence(mse)
    assert rises, f"{name}: minimum {mse.min():.4g} at k={argmin + 1}, final {mse[-1]:.4g}"
    assert mse[result.selected_k - 1] <= mse[-1]


def test_smaller_step_boosts_the_weak_denoiser(preset_results):
    boosted = mse_curve(preset_results["example1_boost"])
    full_step = mse_curve(preset_results["example1_weak"])
    assert boosted[-1] < full_step[-1]


def test_unattenuated_strong_denoiser_leaves_descent(preset_results):
    inner = preset_results["example2_unattenuated"].trace.series("inner_product")
    assert (inner <= 0).any()


def test_gamma_attenuation_shrinks_alpha(preset_results):
    result = preset_results["example2_strong"]
    alpha = result.trace.series("alpha_used")
    assert alpha[-10:].max() < alpha[:10].min()
    assert result.family_label == FamilyLabel.I3


def test_selected_alpha_does_not_vanish(preset_results):
    alpha = preset_results["example2_select"].trace.series("alpha_used")
    assert alpha[-50:].max() > 0.01


def test_corridor_guarded_selection_is_i5(preset_results):
    result = preset_results["example2_select"]
    assert result.family_label == FamilyLabel.I5
    assert (result.trace.series("inner_product") <= 0).any()


def test_combined_attenuation_is_i3(preset_results):
    result = preset_results["example2_combined"]
    assert result.family_label == FamilyLabel.I3
    assert (result.trace.series("inner_product") > 0).all()


def test_fixed_sigma_large_rho_wins_the_sweep(preset_results):
    finals = {name: mse_curve(preset_results[name])[-1] for name in ADMM_SWEEP}
    assert finals["example3_admm"] < finals["example3_fixed_rho0p01"]
    assert min(finals, key=finals.get) == "example3_admm", finals


def test_gradient_first_iterate_is_no_worse(preset_results):
    plain = mse_curve(preset_results["example3_admm"])[-1]
    preconditioned = mse_curve(preset_results["example4_precond"])[-1]
    assert preconditioned <= plain + 1e-3


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_preset_runs_are_reproducible(tmp_path, name):
    config = load_preset(name)
    config = config.model_copy(update={"solver": config.solver.model_copy(update={"max_iters": 3})})
    first = run_batch([config], output_dir=tmp_path / "a", show_progress=False)[name]
    second = run_batch([config], output_dir=tmp_path / "b", show_progress=False)[name]
    for attr in ("trace_csv_path", "summary_csv_path", "summary_txt_path"):
        assert Path(getattr(first, attr)).read_bytes() == Path(getattr(second, attr)).read_bytes()
