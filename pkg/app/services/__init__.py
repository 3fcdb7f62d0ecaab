from .thread_pool import ThreadPool, THREAD_POOL_VERSION, hardware_concurrency
from .task_future import TaskFuture, MultiFuture
from .loop_partition import compute_blocks
from .synced_stream import SyncedStream
from .timer import Stopwatch
from .harness_log import HarnessLog
from .workload_service import calibrate_workload, generate_vectors
from .benchmark_service import BenchmarkService
from .self_test_service import SelfTestService, run_automated_tests

__all__ = [
    "ThreadPool", "THREAD_POOL_VERSION", "hardware_concurrency",
    "TaskFuture", "MultiFuture",
    "compute_blocks",
    "SyncedStream", "Stopwatch",
    "HarnessLog",
    "calibrate_workload", "generate_vectors",
    "BenchmarkService",
    "SelfTestService", "run_automated_tests"
]
