from functools import lru_cache
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide settings with environment variable support"""

    # Application Settings
    APP_NAME: str = Field(default="slrecon", description="Application name")
    APP_VERSION: str = Field(default="0.1.0", description="Application version")

    # Logging Settings
    LOG_LEVEL: str = Field(default="INFO", description="Logging level")
    LOG_FILE: str = Field(default="slrecon.log", description="Log file name")
    LOG_TO_FILE: bool = Field(default=False, description="Enable logging to file")

    # Numerics
    RECON_THREADS: Optional[int] = Field(
        default=None, description="Cap on data-parallel width (default: CPU count)"
    )
    EVAL_CHUNK_SIZE: int = Field(
        default=2048, description="Evaluation points per dense kernel block"
    )
    PROGRESS_EVERY: int = Field(
        default=10, description="Iterations between progress lines"
    )

    # Outputs
    OUTPUT_DIR: str = Field(default="out", description="Default output directory")

    @field_validator("LOG_LEVEL", mode="before")
    def validate_log_level(cls, v: str) -> str:
        allowed = ["DEBUG", "INFO", "WARNING", "ERROR"]
        if str(v).upper() not in allowed:
            raise ValueError(f"LOG_LEVEL must be one of {allowed}")
        return str(v).upper()

    @field_validator("RECON_THREADS", mode="before")
    def validate_threads(cls, v):
        if v in (None, ""):
            return None
        if int(v) < 1:
            raise ValueError("RECON_THREADS must be a positive integer")
        return int(v)

    @field_validator("EVAL_CHUNK_SIZE", "PROGRESS_EVERY")
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    @property
    def is_debug(self) -> bool:
        return self.LOG_LEVEL == "DEBUG"

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", case_sensitive=True, extra="ignore"
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


# Global settings instance
settings = get_settings()
