"""End-to-end runs on the 16x16 problem through the public entry points."""
import numpy as np
import pytest

from pnpreg.models.experiment import ExperimentResult
from pnpreg.models.solver import Algorithm, Attenuation, FamilyLabel, FirstIterateL
from pnpreg.services.harness import read_trace_csv, run_experiment
from pnpreg.tasks import run_batch


def with_solver(config, name, **solver):
    return config.model_copy(update={"name": name, "solver": config.solver.model_copy(update=solver)})


def test_landweber_is_a_descent_method(tiny_config, tmp_path):
    config = with_solver(tiny_config, "landweber", algorithm=Algorithm.LANDWEBER)
    result = run_experiment(config, tmp_path)
    assert result.family_label == FamilyLabel.I3
    frame = read_trace_csv(result.trace_csv_path)
    assert (frame["inner_product"] > 0).all()
    assert np.all(np.diff(frame["discrepancy"]) <= 0)


def test_gamma_attenuated_strong_denoiser_is_i3(tiny_config, tmp_path):
    config = with_solver(tiny_config, "gamma", algorithm=Algorithm.FAST_FBS_PNP, attenuation=Attenuation.GAMMA, gamma=0.5)
    config = config.model_copy(
        update={"denoiser": config.denoiser.model_copy(update={"sigma": 0.05, "rescale_wrap": True})}
    )
    result = run_experiment(config, tmp_path)
    assert result.family_label == FamilyLabel.I3
    frame = read_trace_csv(result.trace_csv_path)
    assert ((frame["alpha"] > 0) & (frame["alpha"] <= 1)).all()


def test_every_algorithm_completes(tiny_config, tmp_path):
    configs = [
        with_solver(tiny_config, "landweber", algorithm=Algorithm.LANDWEBER, max_iters=5),
        with_solver(tiny_config, "fbs", algorithm=Algorithm.FBS_PNP, max_iters=5),
        with_solver(tiny_config, "fast_fbs", algorithm=Algorithm.FAST_FBS_PNP, max_iters=5),
        with_solver(tiny_config, "admm", algorithm=Algorithm.ADMM_PNP, max_iters=5, rho=10.0, first_iterate_L=FirstIterateL.GRAD_MAGNITUDE),
    ]
    results = run_batch(configs, output_dir=tmp_path, show_progress=False)
    for name, result in results.items():
        assert isinstance(result, ExperimentResult), f"{name}: {result}"
        assert len(result.trace.records) == 5
        assert 1 <= result.selected_k <= 5


@pytest.mark.parametrize("algorithm", [Algorithm.FBS_PNP, Algorithm.ADMM_PNP])
def test_same_seed_same_trace(tiny_config, tmp_path, algorithm):
    config = with_solver(tiny_config, "repeat", algorithm=algorithm, max_iters=8)
    first = read_trace_csv(run_experiment(config, tmp_path / "a").trace_csv_path)
    second = read_trace_csv(run_experiment(config, tmp_path / "b").trace_csv_path)
    assert first.equals(second)
