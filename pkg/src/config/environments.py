"""Environment-specific settings overrides."""

from typing import Any, Dict


class _Overrides:
    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        """Return config as dictionary."""
        return {
            key: value
            for key, value in vars(cls).items()
            if not key.startswith("_")
            and not callable(value)
            and not isinstance(value, classmethod)
        }


class DevelopmentConfig(_Overrides):
    """Development environment overrides."""

    debug: bool = False
    log_level: str = "INFO"


class TestingConfig(_Overrides):
    """Testing environment configuration."""

    debug: bool = True
    log_level: str = "WARNING"


class ProductionConfig(_Overrides):
    """Production environment configuration."""

    debug: bool = False
    log_level: str = "WARNING"
