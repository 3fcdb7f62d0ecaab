from .task_counts import TaskCountSnapshot
from .block_range import BlockRange, BlockPartition
from .benchmark import BenchmarkRecord, BestSpeedup, BenchmarkReport
from .harness import HarnessConfig, CheckSummary

__all__ = [
    "TaskCountSnapshot",
    "BlockRange", "BlockPartition",
    "BenchmarkRecord", "BestSpeedup", "BenchmarkReport",
    "HarnessConfig", "CheckSummary"
]
