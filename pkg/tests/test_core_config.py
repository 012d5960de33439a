"""
Unit tests for core configuration.
"""

from src.core.config import Settings, get_settings, settings


def test_settings_initialization():
    """Test that settings can be initialized."""
    test_settings = Settings()
    assert test_settings.app_name == "Bootstrap Percolation Toolkit"
    assert test_settings.app_version == "1.0.0"


def test_settings_defaults():
    """Test default estimation and resource values."""
    test_settings = Settings()
    assert test_settings.workers == 1
    assert test_settings.ci_level == 0.95
    assert test_settings.trial_doubling_cap == 64
    assert test_settings.exact_max_vertices == 22
    assert test_settings.max_vertices == 2**30
    assert test_settings.profile_budget == 10**9
    assert test_settings.float_format == "%.10g"


def test_settings_env_override(monkeypatch):
    """Test BOOTPERC_* environment variables override defaults."""
    monkeypatch.setenv("BOOTPERC_SEED", "7")
    monkeypatch.setenv("BOOTPERC_WORKERS", "4")
    test_settings = Settings()
    assert test_settings.seed == 7
    assert test_settings.workers == 4


def test_global_settings_instance():
    """Test that global settings instance exists."""
    assert settings is not None
    assert isinstance(settings, Settings)
    assert get_settings() is get_settings()
