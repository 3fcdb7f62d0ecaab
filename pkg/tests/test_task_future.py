from __future__ import annotations

import random
import threading
import time

import pytest

from services.task_future import MultiFuture, TaskFuture
from services.thread_pool import ThreadPool


def multiply(a, b):
    return a * b


def inverse(x):
    if x == 0:
        raise ZeroDivisionError("Division by zero!")
    return 1 / x


def test_submit_returns_value(pool: ThreadPool) -> None:
    assert pool.submit(lambda: 42).get() == 42


def test_submit_with_arguments(pool: ThreadPool) -> None:
    assert pool.submit(multiply, 6, 7).get() == 42
    assert pool.submit(multiply, a=6, b=7).get() == 42


def test_exception_is_forwarded(pool: ThreadPool) -> None:
    future = pool.submit(inverse, 0)
    with pytest.raises(ZeroDivisionError, match="^Division by zero!$"):
        future.get()
    assert future.failed()


def test_forwarded_exception_is_the_original_object(pool: ThreadPool) -> None:
    error = KeyError("missing")

    def raise_it():
        raise error

    with pytest.raises(KeyError) as excinfo:
        pool.submit(raise_it).get()
    assert excinfo.value is error


def test_get_twice_is_a_usage_error(pool: ThreadPool) -> None:
    future = pool.submit(lambda: 1)
    assert future.get() == 1
    with pytest.raises(RuntimeError):
        future.get()


def test_wait_blocks_until_done(pool: ThreadPool) -> None:
    start = time.monotonic()
    future = pool.submit(time.sleep, 0.2)
    future.wait()
    assert future.done()
    assert time.monotonic() - start >= 0.2


def test_get_after_ready_does_not_block(pool: ThreadPool) -> None:
    future = pool.submit(lambda: "ready")
    future.wait()
    start = time.monotonic()
    assert future.get() == "ready"
    assert time.monotonic() - start < 0.1


def test_dropped_future_still_runs(pool: ThreadPool) -> None:
    ran = threading.Event()
    pool.submit(ran.set)
    pool.wait_for_tasks()
    assert ran.is_set()


def test_random_pure_functions_roundtrip(pool: ThreadPool) -> None:
    rng = random.Random(7)
    cases = []
    for _ in range(200):
        a, b = rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6)
        fn = rng.choice([lambda x, y: x + y, lambda x, y: x * y, lambda x, y: (x, y), max])
        cases.append((pool.submit(fn, a, b), fn(a, b)))
    for future, expected in cases:
        assert future.get() == expected


# ===================== MULTI FUTURE =====================

def test_multi_future_groups_of_squares(pool: ThreadPool) -> None:
    mf1: MultiFuture[int] = MultiFuture()
    mf2: MultiFuture[int] = MultiFuture()
    for i in range(100):
        mf1.push(pool.submit(lambda x: x * x, i))
    for i in range(100, 200):
        mf2.push(pool.submit(lambda x: x * x, i))
    assert mf1.get() == [i * i for i in range(100)]
    assert mf2.get() == [i * i for i in range(100, 200)]


def test_multi_future_keeps_storage_order(pool: ThreadPool) -> None:
    def slow_identity(i, delay):
        time.sleep(delay)
        return i

    mf = MultiFuture(pool.submit(slow_identity, i, 0.05 * (4 - i)) for i in range(4))
    assert len(mf) == 4
    assert mf.get() == [0, 1, 2, 3]


def test_empty_multi_future() -> None:
    mf: MultiFuture[int] = MultiFuture()
    mf.wait()
    assert mf.done()
    assert mf.get() == []


def test_multi_future_partial_sums(pool: ThreadPool) -> None:
    mf = MultiFuture(pool.submit(lambda a, b: sum(range(a, b)), a, a + 10) for a in range(1, 101, 10))
    assert sum(mf.get()) == 5050


def test_multi_future_raises_first_failure_after_settling(pool: ThreadPool) -> None:
    def fail(message, delay):
        time.sleep(delay)
        raise ValueError(message)

    slow_ok = pool.submit(lambda: time.sleep(0.1) or "late")
    mf = MultiFuture([
        pool.submit(lambda: 1),
        pool.submit(fail, "first", 0.05),
        pool.submit(fail, "second", 0.0),
        slow_ok,
    ])
    with pytest.raises(ValueError, match="first"):
        mf.get()
    assert all(f.done() for f in mf)
    assert all(f.consumed for f in mf)


def test_task_future_repr_reflects_state() -> None:
    future: TaskFuture[int] = TaskFuture()
    assert "pending" in repr(future)
    future._run(lambda: 3, (), {})
    assert "ready" in repr(future)
