"""
Configuration management for ForestWise.

Runtime settings (logging, worker pool, enumeration guards, continuum grids
and statistical thresholds) read from the environment or a .env file.
"""

import os
from typing import Optional
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings
from loguru import logger


class Settings(BaseSettings):
    """
    ForestWise runtime settings.

    Every field can be set through the environment variable of the same
    name (case-insensitive). Experiment-specific knobs live in
    ExperimentConfig instead.
    """

    # Logging
    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )

    log_file_path: Optional[str] = Field(
        default=None,
        description="Optional log file path for file logging"
    )

    # Exhaustive search guards
    enumeration_cap: int = Field(
        default=10,
        description="Largest n(s) for which bridges and forests are enumerated",
        ge=1,
        le=12
    )

    exact_gh_cap: int = Field(
        default=8,
        description="Largest space size for the exact rooted Gromov-Hausdorff search",
        ge=1,
        le=10
    )

    # Replicate pool
    workers: int = Field(
        default=1,
        description="Worker processes for Monte Carlo replicates (1 runs in-process)",
        ge=1,
        le=256
    )

    pool_chunksize: int = Field(
        default=64,
        description="Replicates handed to a worker per dispatch",
        ge=1
    )

    # Continuum simulation
    default_grid_m: int = Field(
        default=2 ** 14,
        description="Grid resolution for continuum path draws",
        ge=2
    )

    excursion_grid_m: int = Field(
        default=2 ** 16,
        description="Grid resolution for excursion-length sum checks",
        ge=2
    )

    # Statistical thresholds
    ks_alpha: float = Field(
        default=1e-3,
        description="Significance level of the KS and chi-square thresholds",
        gt=0.0,
        lt=1.0
    )

    ks_grid_margin: float = Field(
        default=0.01,
        description="Additive discretization margin added to KS thresholds",
        ge=0.0
    )

    # Experiment defaults
    default_seed: int = Field(
        default=20240601,
        description="Seed used when a command is given none",
        ge=0,
        lt=2 ** 64
    )

    output_dir: str = Field(
        default="out",
        description="Default directory for reports and tables"
    )

    @field_validator('log_level')
    def validate_log_level(cls, v):
        """Validate log level is one of the supported levels."""
        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if v.upper() not in valid_levels:
            raise ValueError(f'log_level must be one of: {", ".join(valid_levels)}')
        return v.upper()

    @field_validator('excursion_grid_m', 'default_grid_m')
    def validate_grid(cls, v):
        """Grid resolutions must be powers of two."""
        if v & (v - 1):
            raise ValueError('grid resolution must be a power of two')
        return v

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False
        validate_assignment = True
        extra = "ignore"  # Ignore extra environment variables


def load_settings() -> Settings:
    """
    Build the settings once at import time.

    Returns:
        Validated Settings

    Raises:
        ValueError: If environment variables are invalid
    """
    try:
        env_file_path = ".env"
        if os.path.exists(env_file_path):
            logger.debug(f"Loading environment variables from {env_file_path}")

        settings = Settings()

        logger.debug(f"Log level: {settings.log_level}")
        logger.debug(f"Workers: {settings.workers}, enumeration cap: {settings.enumeration_cap}")

        return settings

    except Exception as e:
        logger.error(f"Failed to load configuration: {e}")
        raise ValueError(f"Configuration error: {e}") from e


settings = load_settings()


__all__ = ["settings", "Settings", "load_settings"]
