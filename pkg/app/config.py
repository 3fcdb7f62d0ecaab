"""
Taskwell - Configuration
Configurazione centralizzata del pool e dell'harness di test/benchmark
"""
from pathlib import Path
from typing import List, Optional
from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    # App
    APP_NAME: str = "Taskwell"
    APP_VERSION: str = "1.0.0"
    RELEASE_DATE: str = "2026-10-19"
    DEBUG: bool = False

    # Paths
    BASE_DIR: Path = Path(__file__).resolve().parent.parent
    LOG_DIR: Path = Path("logs")
    LOG_FILE_PREFIX: str = "taskwell_test"

    # Harness (sovrascrivibili da riga di comando)
    HARNESS_THREADS: Optional[int] = None  # None = hardware concurrency
    HARNESS_REPEATS: int = 20
    HARNESS_TARGET_MS: float = 50.0
    HARNESS_VECTOR_LEN: int = 500
    HARNESS_SEED: int = 0x7A5C_3E11_D00D_F00D

    # Self-test
    LOOP_CHECKS: int = 10  # per tipo (copertura indici, somme)
    LOOP_RANGE_LIMIT: int = 1_000_000
    LOOP_MAX_TASKS: int = 24
    VECTOR_CHECKS: int = 10
    VECTOR_MAX_LEN: int = 1_000_000

    # Benchmark
    CALIBRATION_START_VECTORS: int = 64
    CALIBRATION_TOLERANCE: float = 0.10  # 10% sopra il target
    CALIBRATION_CHUNK_VECTORS: int = 256  # limita i temporanei numpy
    BENCHMARK_MULTIPLIERS: List[float] = [0.25, 0.5, 1, 2, 4]

    @property
    def version_string(self) -> str:
        """Versione nel formato 'vX.Y.Z (YYYY-MM-DD)'"""
        return f"v{self.APP_VERSION} ({self.RELEASE_DATE})"

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
