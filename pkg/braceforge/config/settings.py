"""Application configuration management."""

import os
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from BRACEFORGE_* environment variables."""

    # Logging
    log_level: str = "INFO"

    # Workers for chunked exhaustive loops (BRACEFORGE_THREADS)
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)

    # Sampled verification
    seed: int = Field(default=20240917, ge=0, lt=2**64)
    samples: int = Field(default=100_000, ge=1)

    # Cooperative wall-clock budget in seconds; None means unlimited
    time_budget: float | None = Field(default=None, gt=0)

    # Search guards
    max_subspaces: int = 1_000_000
    iso_node_limit: int = 2_000_000
    full_check_max_order: int = 625

    model_config = SettingsConfigDict(
        env_prefix="BRACEFORGE_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
