"""
Configuration management for the qbundle symbolic engine.
Uses python-dotenv to load environment variables from .env file.
"""

from typing import Dict
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class EngineSettings(BaseSettings):
    """Rewriting engine limits."""

    model_config = SettingsConfigDict(env_prefix="QB_ENGINE_", env_file=".env", extra="ignore")

    reduction_budget: int = Field(default=1_000_000, gt=0)
    completion_caps: Dict[int, int] = Field(default={2: 6, 3: 6, 4: 4})
    default_completion_cap: int = Field(default=4, gt=0)
    max_completion_rounds: int = Field(default=12, gt=0)

    def completion_cap(self, n: int) -> int:
        """Degree cap used when completing the rule system of an n-indexed algebra."""
        return self.completion_caps.get(n, self.default_completion_cap)


class VerifySettings(BaseSettings):
    """Verification suite defaults."""

    model_config = SettingsConfigDict(env_prefix="QB_VERIFY_", env_file=".env", extra="ignore")

    degree_bounds: Dict[int, int] = Field(default={2: 6, 3: 4, 4: 3})
    fallback_degree: int = Field(default=3, gt=0)
    seed: int = Field(default=0)
    max_words_per_check: int = Field(default=400, gt=0)
    max_workers: int = Field(default=4, gt=0)


class LoggingSettings(BaseSettings):
    """Logging configuration settings."""

    model_config = SettingsConfigDict(env_prefix="QB_LOG_", env_file=".env", extra="ignore")

    level: str = Field(default="WARNING")
    file: str = Field(default="logs/qbundle.log")
    console: bool = Field(default=True)


class StorageSettings(BaseSettings):
    """Report and fixture storage settings."""

    model_config = SettingsConfigDict(env_prefix="QB_STORAGE_", env_file=".env", extra="ignore")

    reports_dir: str = Field(default="reports")
    fixtures_dir: str = Field(default="fixtures")
    logs_dir: str = Field(default="logs")


class Settings(BaseSettings):
    """Main application settings that combines all configuration sections."""

    model_config = SettingsConfigDict(env_prefix="QB_", env_file=".env", extra="ignore")

    environment: str = Field(default="development")

    # Sub-settings
    engine: EngineSettings = EngineSettings()
    verify: VerifySettings = VerifySettings()
    logging: LoggingSettings = LoggingSettings()
    storage: StorageSettings = StorageSettings()

    def default_degree(self, n: int) -> int:
        """Default verification degree bound for matrix size n."""
        return self.verify.degree_bounds.get(n, self.verify.fallback_degree)


# Create global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Get the global settings instance."""
    return settings


def get_engine_config() -> dict:
    """Get engine configuration as dictionary."""
    return {
        "reduction_budget": settings.engine.reduction_budget,
        "completion_caps": dict(settings.engine.completion_caps),
        "max_completion_rounds": settings.engine.max_completion_rounds,
    }


def get_verify_config() -> dict:
    """Get verification configuration as dictionary."""
    return {
        "degree_bounds": dict(settings.verify.degree_bounds),
        "seed": settings.verify.seed,
        "max_words_per_check": settings.verify.max_words_per_check,
        "max_workers": settings.verify.max_workers,
    }


if __name__ == "__main__":
    # Test configuration loading
    print("Configuration loaded successfully!")
    print(f"Environment: {settings.environment}")
    print(f"Reduction budget: {settings.engine.reduction_budget}")
    print(f"Degree bounds: {settings.verify.degree_bounds}")
    print(f"Reports dir: {settings.storage.reports_dir}")
