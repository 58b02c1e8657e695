"""Configuration module."""

from .environments import DevelopmentConfig, ProductionConfig, TestingConfig
from .loader import create_test_settings, load_settings
from .settings import Settings

__all__ = [
    "Settings",
    "load_settings",
    "create_test_settings",
    "DevelopmentConfig",
    "ProductionConfig",
    "TestingConfig",
]
