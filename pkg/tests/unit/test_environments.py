"""Test environment-specific configurations."""

from src.config.environments import DevelopmentConfig, ProductionConfig, TestingConfig
from src.config.settings import Settings


def test_development_config():
    """Test development configuration values."""
    config_dict = DevelopmentConfig.as_dict()

    assert config_dict == {"debug": False, "log_level": "INFO"}


def test_testing_config():
    """Test testing configuration values."""
    config_dict = TestingConfig.as_dict()

    assert config_dict["debug"] is True
    assert config_dict["log_level"] == "WARNING"


def test_production_config():
    """Test production configuration values."""
    config_dict = ProductionConfig.as_dict()

    assert config_dict["debug"] is False
    assert config_dict["log_level"] == "WARNING"


def test_overrides_name_settings_fields():
    """Every override key is a Settings field."""
    for config in (DevelopmentConfig, TestingConfig, ProductionConfig):
        assert set(config.as_dict()) <= set(Settings.model_fields)
