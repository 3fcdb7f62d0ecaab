"""
Benchmark models - Statistiche di tempo per configurazione e riepilogo dello speedup
"""
from typing import List, Optional
from pydantic import BaseModel, Field


class BenchmarkRecord(BaseModel):
    """Una configurazione misurata; task_count == 0 indica il riferimento single-thread"""
    task_count: int = Field(ge=0)
    mean_ms: float = Field(ge=0)
    stddev_ms: float = Field(ge=0)
    samples_ms: List[float] = Field(default_factory=list)

    @property
    def is_baseline(self) -> bool:
        return self.task_count == 0


class BestSpeedup(BaseModel):
    speedup: float
    task_count: int = Field(ge=1)


class BenchmarkReport(BaseModel):
    thread_count: int = Field(ge=1)
    repeats: int = Field(ge=2)
    vector_len: int = Field(ge=1)
    vector_count: int = Field(ge=1)
    records: List[BenchmarkRecord] = Field(default_factory=list)
    best: Optional[BestSpeedup] = None

    @property
    def baseline(self) -> BenchmarkRecord:
        for record in self.records:
            if record.is_baseline:
                return record
        raise ValueError("Report senza misura single-thread")

    @property
    def multithreaded(self) -> List[BenchmarkRecord]:
        return [r for r in self.records if not r.is_baseline]
