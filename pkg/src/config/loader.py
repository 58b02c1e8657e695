"""Settings loading with environment detection."""

import os
from pathlib import Path
from typing import Any, Optional

import structlog
from dotenv import load_dotenv
from pydantic import ValidationError

from src.exceptions import ConfigurationError

from .environments import DevelopmentConfig, ProductionConfig, TestingConfig
from .settings import Settings

logger = structlog.get_logger()

ENV_PREFIX = "METABOUND_"


def load_settings(
    env: Optional[str] = None, env_file: Optional[Path] = None
) -> Settings:
    """Load settings for the given environment.

    Args:
        env: Environment name (development, testing, production)
        env_file: Optional path to a .env file

    Returns:
        Configured Settings instance

    Raises:
        ConfigurationError: If the environment holds invalid values
    """
    env_file = env_file or Path(".env")
    if env_file.exists():
        logger.debug("Loading .env file", path=str(env_file))
        load_dotenv(env_file)

    env = env or os.getenv("ENVIRONMENT", "development")

    try:
        settings = Settings()
    except ValidationError as e:
        problems = "; ".join(
            f"{ENV_PREFIX}{'.'.join(str(p) for p in err['loc']).upper()}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigurationError(f"Invalid settings: {problems}") from e

    settings = _apply_environment_overrides(settings, env)
    logger.debug(
        "Settings loaded",
        environment=env,
        parallel=settings.parallel,
        log_level=settings.log_level,
    )
    return settings


def _apply_environment_overrides(settings: Settings, env: Optional[str]) -> Settings:
    """Apply environment-specific overrides unless the variable is set explicitly."""
    overrides = {}

    if env == "development":
        overrides = DevelopmentConfig.as_dict()
    elif env == "testing":
        overrides = TestingConfig.as_dict()
    elif env == "production":
        overrides = ProductionConfig.as_dict()
    else:
        logger.warning("Unknown environment, using default settings", environment=env)

    updates = {
        key: value
        for key, value in overrides.items()
        if key in Settings.model_fields and os.getenv(f"{ENV_PREFIX}{key.upper()}") is None
    }
    if updates:
        logger.debug("Applied environment overrides", environment=env, keys=sorted(updates))
        settings = settings.model_copy(update=updates)
    return settings


def create_test_settings(**overrides: Any) -> Settings:
    """Create settings for testing with optional overrides.

    Args:
        **overrides: Setting values to override

    Returns:
        Settings instance configured for testing
    """
    values = TestingConfig.as_dict()
    values.update(overrides)
    return Settings(_env_file=None, **values)
