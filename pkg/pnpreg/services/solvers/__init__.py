from pnpreg.services.solvers.admm import admm_pnp
from pnpreg.services.solvers.attenuation import attenuate_gamma, attenuate_select, select_sigma
from pnpreg.services.solvers.bounds import cumulative_deviation_bound, residue_bound
from pnpreg.services.solvers.fbs import fast_fbs_pnp, fbs_pnp
from pnpreg.services.solvers.landweber import landweber
from pnpreg.services.solvers.monitor import IterateMonitor
from pnpreg.services.solvers.runner import run_solver
from pnpreg.services.solvers.steps import momentum_sequence, resolve_step_size
