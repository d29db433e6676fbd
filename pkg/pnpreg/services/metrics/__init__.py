from pnpreg.services.metrics.quality import d_err, evaluate_metrics, psnr, rel_mse, s_err, ssim
