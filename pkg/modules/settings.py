"""
Process-wide configuration for the QSTS simulator

Values come from QSTS_* environment variables or the .env file next to
the server script.
"""
import logging
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

ENV_PATH = Path(__file__).resolve().parent.parent / ".env"

# 2^21 complex amplitudes is 32 MiB; m <= 3 for the full protocol
DEFAULT_MAX_QUBITS = 21


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="QSTS_", env_file=ENV_PATH, extra="ignore"
    )

    seed: int = 20240601
    max_qubits: int = Field(DEFAULT_MAX_QUBITS, ge=1, le=30)
    tolerance: float = 1e-10
    fidelity_tolerance: float = 1e-9
    decoys_per_sequence: int = Field(16, ge=0)
    decoy_threshold: int = Field(0, ge=0)
    workers: int = Field(1, ge=1)
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the cached settings instance"""
    return Settings()


def setup_logging(level: str) -> None:
    """Send log records to stderr; stdout carries MCP frames and CLI documents"""
    logging.basicConfig(
        level=level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
