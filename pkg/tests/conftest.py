from __future__ import annotations

import io
import os
import threading
import time
from typing import Iterator, Sequence

import pytest

from models.harness import HarnessConfig
from services.harness_log import HarnessLog
from services.thread_pool import ThreadPool

WAIT_TIMEOUT_S = 10.0


def wait_all(events: Sequence[threading.Event], timeout: float = WAIT_TIMEOUT_S) -> bool:
    deadline = time.monotonic() + timeout
    return all(e.wait(max(0.0, deadline - time.monotonic())) for e in events)


def requires_cores(n: int):
    return pytest.mark.skipif((os.cpu_count() or 1) < n, reason=f"needs at least {n} hardware threads")


@pytest.fixture
def pool() -> Iterator[ThreadPool]:
    with ThreadPool(4) as p:
        yield p


@pytest.fixture
def single_pool() -> Iterator[ThreadPool]:
    with ThreadPool(1) as p:
        yield p


@pytest.fixture
def harness_config(tmp_path) -> HarnessConfig:
    return HarnessConfig(threads=4, repeats=3, target_ms=5.0, vector_len=64, seed=12345, log_dir=tmp_path)


@pytest.fixture
def console() -> io.StringIO:
    return io.StringIO()


@pytest.fixture
def harness_log(tmp_path, console) -> Iterator[HarnessLog]:
    with HarnessLog(tmp_path, console=console) as log:
        yield log
