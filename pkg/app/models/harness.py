"""
Harness models - Configurazione dell'eseguibile di test e riepilogo dei controlli
"""
from pathlib import Path
from typing import List, Optional
from pydantic import BaseModel, Field, PositiveFloat, PositiveInt, model_validator


class HarnessConfig(BaseModel):
    threads: Optional[PositiveInt] = None  # None = hardware concurrency
    repeats: int = Field(default=20, ge=2)
    target_ms: PositiveFloat = 50.0
    vector_len: PositiveInt = 500
    seed: int = Field(default=0, ge=0, lt=2**64)
    log_dir: Path = Path("logs")
    skip_benchmark: bool = False
    only_benchmark: bool = False

    @model_validator(mode="after")
    def _check_flags(self) -> "HarnessConfig":
        if self.skip_benchmark and self.only_benchmark:
            raise ValueError("--skip-benchmark e --only-benchmark sono mutuamente esclusivi")
        return self


class CheckSummary(BaseModel):
    """Esito della suite automatica"""
    passed: int = 0
    failed: List[str] = Field(default_factory=list)

    @property
    def total(self) -> int:
        return self.passed + len(self.failed)

    @property
    def success(self) -> bool:
        return not self.failed
