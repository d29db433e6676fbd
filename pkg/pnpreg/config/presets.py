"""Shipped experiment configs, one per reconstruction scenario.

All but full_scale_fan run on the 64x64 desk problem: a fan-beam scan with 45
views over 360 degrees and 91 rays per view, so there are about as many
measurements as pixels. Step sizes are given relative to the 1/(2||A||²) bound,
since absolute values depend on how the operator is scaled.
"""
from typing import Dict, List

from pnpreg.config.parser import parse_text
from pnpreg.models.experiment import ExperimentConfig
from pnpreg.utils.errors import ConfigError

_DESK_PROBLEM = """\
problem.n = 64
problem.geometry.kind = fan_curved
problem.geometry.n_angles = 45
problem.geometry.n_rays_per_angle = 91
problem.geometry.angle_span_degrees = 360
problem.noise_rel_err = 0.01
problem.cv_fraction = 0.01
problem.phantom_range = -1, 1
problem.seed = 0
selection.kind = cross_validation
"""

_WEAK_DENOISER = """\
denoiser.kind = gaussian
denoiser.sigma = 0.0005
denoiser.rescale_wrap = true
"""

_STRONG_DENOISER = """\
denoiser.kind = gaussian
denoiser.sigma = 0.02
denoiser.rescale_wrap = true
"""

# ADMM runs use the TV proximal map, so with a fixed sigma the limit minimises
# ½||Ax - b||² + rho·sigma·TV(x), and with sigma/rho it minimises ½||Ax - b||² + sigma·TV(x)
_ADMM = """\
solver.algorithm = admm_pnp
solver.max_iters = 250
solver.inner_cg_iters = 30
solver.cg_tol = 0
solver.cg_warm_start = true
denoiser.kind = tv_prox
denoiser.sigma = 0.02
denoiser.inner_iters = 100
"""


def _admm(name: str, rho: str, sigma_update: str, extra: str = "") -> str:
    return _DESK_PROBLEM + _ADMM + f"name = {name}\nsolver.rho = {rho}\nsolver.sigma_update = {sigma_update}\n" + extra


PRESETS: Dict[str, str] = {
    # weak denoiser: semi-convergent errors, CV picks an early iterate
    "example1_weak": _DESK_PROBLEM + _WEAK_DENOISER + """\
name = example1_weak
solver.algorithm = fast_fbs_pnp
solver.max_iters = 600
solver.tau_fraction = 0.99
""",
    # plain Landweber on the same data; it needs more iterations to turn
    "example1_landweber": _DESK_PROBLEM + """\
name = example1_landweber
solver.algorithm = landweber
solver.max_iters = 3000
solver.tau_fraction = 0.99
solver.keep_iterates = false
""",
    # example1_weak with a twentieth of the step: the weak denoiser acts relatively harder
    "example1_boost": _DESK_PROBLEM + _WEAK_DENOISER + """\
name = example1_boost
solver.algorithm = fast_fbs_pnp
solver.max_iters = 600
solver.tau_fraction = 0.0495
""",
    # strong denoiser tamed by gamma attenuation
    "example2_strong": _DESK_PROBLEM + _STRONG_DENOISER + """\
name = example2_strong
solver.algorithm = fast_fbs_pnp
solver.max_iters = 250
solver.tau_fraction = 0.99
solver.attenuation = gamma
solver.gamma = 0.5
""",
    # strong denoiser, alpha chosen by CV under the discrepancy corridor
    "example2_select": _DESK_PROBLEM + _STRONG_DENOISER + """\
name = example2_select
solver.algorithm = fast_fbs_pnp
solver.max_iters = 250
solver.tau_fraction = 0.99
solver.attenuation = select_alpha
solver.corridor_guard = true
solver.gamma = 0.5
""",
    # strong denoiser, alpha chosen by CV below the gamma bound
    "example2_combined": _DESK_PROBLEM + _STRONG_DENOISER + """\
name = example2_combined
solver.algorithm = fast_fbs_pnp
solver.max_iters = 250
solver.tau_fraction = 0.99
solver.attenuation = combined
solver.gamma = 0.5
""",
    # strong denoiser with no attenuation at all
    "example2_unattenuated": _DESK_PROBLEM + _STRONG_DENOISER + """\
name = example2_unattenuated
solver.algorithm = fast_fbs_pnp
solver.max_iters = 250
solver.tau_fraction = 0.99
""",
    # large rho with a fixed (not rho-scaled) denoiser
    "example3_admm": _admm("example3_admm", "100", "fixed"),
    # the rest of the rho x sigma-policy sweep around example3_admm
    "example3_fixed_rho0p01": _admm("example3_fixed_rho0p01", "0.01", "fixed"),
    "example3_scaled_rho0p1": _admm("example3_scaled_rho0p1", "0.1", "scaled"),
    "example3_scaled_rho100": _admm("example3_scaled_rho100", "100", "scaled"),
    # example3_admm with a gradient-magnitude regularised first iterate
    "example4_precond": _admm("example4_precond", "100", "fixed", "solver.first_iterate_L = grad_magnitude\n"),
    # full-size fan-beam problem: 128x128, 45 views over 360 degrees, 181 rays each
    "full_scale_fan": """\
name = full_scale_fan
problem.n = 128
problem.geometry.kind = fan_curved
problem.geometry.n_angles = 45
problem.geometry.n_rays_per_angle = 181
problem.geometry.angle_span_degrees = 360
problem.noise_rel_err = 0.01
problem.cv_fraction = 0.01
problem.phantom_range = -1, 1
problem.seed = 0
selection.kind = cross_validation
solver.algorithm = fast_fbs_pnp
solver.max_iters = 1000
solver.tau_fraction = 0.9
solver.keep_iterates = false
""" + _WEAK_DENOISER,
}

# the rho x sigma-policy sweep, best expected first
ADMM_SWEEP = ["example3_admm", "example3_fixed_rho0p01", "example3_scaled_rho0p1", "example3_scaled_rho100"]


def list_presets() -> List[str]:
    return sorted(PRESETS)


def load_preset(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError([(None, name, f"unknown preset (available: {', '.join(list_presets())})")])
    return parse_text(PRESETS[name], source=f"preset:{name}")
