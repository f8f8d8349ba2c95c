import logging
from typing import List, Optional, Union

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables"""

    # Logging
    ENABLE_LOGGING: bool = True
    LOG_LEVEL: str = "INFO"
    LOG_DIR: Optional[str] = None

    # Greedy recovery
    GREEDY_EPSILON: float = 1e-6
    UNIT_NORM_TOL: float = 1e-12
    ORTHOGONALITY_TOL: float = 1e-8

    # RIC analysis
    RIC_ENUMERATION_BUDGET: int = 1_000_000
    RIC_BATCH_SIZE: int = 2048
    DIAGNOSTICS_EXHAUSTIVE_LIMIT: int = 20

    # Benchmark harness
    BENCH_TRIALS: int = 200
    BENCH_WORKERS: int = 1
    BENCH_WARMUP_TRIALS: int = 5
    RESULTS_DIR: str = "results"

    # API server
    ALLOWED_ORIGINS: Union[List[str], str] = ["http://localhost"]
    HOST: str = "127.0.0.1"
    PORT: int = 7890
    DEBUG: bool = False

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"

    def model_post_init(self, __context):
        """Process values after model initialization"""
        # Convert string ALLOWED_ORIGINS to list if needed
        if isinstance(self.ALLOWED_ORIGINS, str):
            self.ALLOWED_ORIGINS = [origin.strip() for origin in self.ALLOWED_ORIGINS.split(",")]


def validate_settings(settings: Settings) -> Settings:
    """Reject settings that would make the numerics meaningless"""
    problems = []

    for name in ("GREEDY_EPSILON", "UNIT_NORM_TOL", "ORTHOGONALITY_TOL"):
        if getattr(settings, name) < 0:
            problems.append(f"{name} must be nonnegative")

    for name in ("RIC_ENUMERATION_BUDGET", "RIC_BATCH_SIZE", "BENCH_TRIALS", "BENCH_WORKERS"):
        if getattr(settings, name) < 1:
            problems.append(f"{name} must be positive")

    if settings.BENCH_WARMUP_TRIALS < 0:
        problems.append("BENCH_WARMUP_TRIALS must be nonnegative")

    if logging.getLevelName(settings.LOG_LEVEL.upper()) not in (
        logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR, logging.CRITICAL
    ):
        problems.append(f"LOG_LEVEL '{settings.LOG_LEVEL}' is not a logging level")

    if problems:
        raise ValueError(f"Invalid configuration: {'; '.join(problems)}")

    return settings


# Initialize settings
settings = validate_settings(Settings())
