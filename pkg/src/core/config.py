"""
Application configuration management using Pydantic Settings.
"""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from BOOTPERC_* environment variables."""

    # Application
    app_name: str = "Bootstrap Percolation Toolkit"
    app_version: str = "1.0.0"
    environment: str = "development"
    log_level: str = "INFO"

    # Reproducibility
    seed: int = 20240601
    workers: int = 1
    batch_size: int = 256

    # Resource caps
    max_vertices: int = 2**30
    exact_max_vertices: int = 22
    profile_budget: int = 10**9
    max_regular_restarts: int = 1000

    # Estimation
    ci_level: float = 0.95
    trial_doubling_cap: int = 64  # 2^6 x base trials per probe
    audit_sigma: float = 4.0

    # Bounds
    chernoff_n_min: int = 100

    # Output
    float_format: str = "%.10g"

    model_config = SettingsConfigDict(
        env_prefix="BOOTPERC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
_settings = None


def get_settings() -> Settings:
    """
    Get settings instance (singleton pattern).

    Returns:
        Settings instance
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


settings = get_settings()
