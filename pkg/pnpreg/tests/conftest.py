import numpy as np
import pytest

from pnpreg.models.experiment import ExperimentConfig, ProblemConfig
from pnpreg.models.imaging import Geometry, Image
from pnpreg.services.core_ops.operator import SparseOperator
from pnpreg.services.tomography.problem import build_problem

# 16x16 parallel-beam problem, small enough for many solver runs per test
TINY_GEOMETRY = dict(kind="parallel", n_angles=12, n_rays_per_angle=23, angle_span_degrees=180)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_operator(rng):
    """Dense-backed 20x15 operator with its dense copy."""
    dense = rng.standard_normal((20, 15))
    return SparseOperator.from_dense(dense), dense


@pytest.fixture
def full_rank_operator(rng):
    """10x8 full-rank synthetic system with data b."""
    dense = rng.standard_normal((10, 8))
    b = rng.standard_normal(10)
    return SparseOperator.from_dense(dense), dense, b


@pytest.fixture(scope="session")
def desk_problem():
    """Default 64x64 parallel-beam problem at 1% noise, built once."""
    return build_problem(ProblemConfig(n=64))


@pytest.fixture(scope="session")
def tiny_problem():
    return build_problem(ProblemConfig(n=16, geometry=Geometry(**TINY_GEOMETRY)))


@pytest.fixture
def tiny_config():
    """A complete experiment config on the 16x16 problem, 20 FBS iterations."""
    return ExperimentConfig.model_validate(
        {
            "name": "tiny",
            "problem": {"n": 16, "geometry": TINY_GEOMETRY, "noise_rel_err": 0.01, "cv_fraction": 0.02},
            "solver": {"algorithm": "fbs_pnp", "max_iters": 20},
            "denoiser": {"kind": "gaussian", "sigma": 0.01},
        }
    )


@pytest.fixture
def ramp_image():
    return Image.from_array(np.add.outer(np.arange(16.0), np.arange(16.0)) / 30.0)
