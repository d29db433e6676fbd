from pydantic_settings import BaseSettings
from dotenv import load_dotenv
import os
import logging

load_dotenv()

logger = logging.getLogger(__name__)

class Settings(BaseSettings):
    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT: str = os.getenv("LOG_FORMAT", "%(asctime)s - %(levelname)s - %(message)s")

    # Experiment output
    OUTPUT_DIR: str = os.getenv("OUTPUT_DIR", "results")

    # Concurrent experiment runs (one thread per config)
    MAX_WORKERS: int = int(os.getenv("MAX_WORKERS", "4"))
    SHOW_PROGRESS: bool = os.getenv("SHOW_PROGRESS", "True").lower() == "true"

    # Inner conjugate-gradient solves
    CG_BREAKDOWN_CURVATURE: float = float(os.getenv("CG_BREAKDOWN_CURVATURE", "1e-300"))
    CG_DEFAULT_TOL: float = float(os.getenv("CG_DEFAULT_TOL", "1e-10"))

    # Finite stand-in for the PSNR of an exact reconstruction
    PSNR_SATURATION_DB: float = float(os.getenv("PSNR_SATURATION_DB", "300"))

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True
        extra = 'ignore' # Ignore extra fields from environment variables


settings = Settings()

if settings.MAX_WORKERS < 1:
    logger.warning(f"MAX_WORKERS={settings.MAX_WORKERS} is not usable, falling back to 1 worker.")
    settings.MAX_WORKERS = 1
