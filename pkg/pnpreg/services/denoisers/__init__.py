from pnpreg.services.denoisers.denoiser import denoise, denoise_strength, rescale_wrap
from pnpreg.services.denoisers.tv import total_variation, tv_objective, tv_prox
