"""Process settings using Pydantic Settings.

Features:
- Environment variable loading (METABOUND_ prefix)
- .env file support
- Type validation
"""

from pathlib import Path
from typing import Any, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

VALID_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class Settings(BaseSettings):
    """Runtime settings loaded from environment variables."""

    # Execution
    parallel: int = Field(1, ge=1, description="Worker processes for sweeps")
    output_dir: Optional[Path] = Field(
        None, description="Result directory overriding the experiment document"
    )

    # Monitoring
    log_level: str = Field("INFO", description="Logging level")
    debug: bool = Field(False, description="Enable debug mode")

    model_config = SettingsConfigDict(
        env_prefix="METABOUND_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: Any) -> str:
        """Validate log level."""
        if str(v).upper() not in VALID_LOG_LEVELS:
            raise ValueError(f"log_level must be one of {VALID_LOG_LEVELS}")
        return str(v).upper()

    @property
    def parallel_from_environment(self) -> bool:
        """True when METABOUND_PARALLEL (or .env) supplied the worker count."""
        return "parallel" in self.model_fields_set
