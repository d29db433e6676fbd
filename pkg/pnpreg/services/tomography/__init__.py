from pnpreg.services.tomography.phantom import disk_phantom, ellipse_table, shepp_logan
from pnpreg.services.tomography.problem import CtProblem, build_problem
from pnpreg.services.tomography.radon import build_radon, trace_ray
from pnpreg.services.tomography.sinogram import add_noise, snr_db, split_cv
