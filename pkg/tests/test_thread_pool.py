from __future__ import annotations

import os
import re
import subprocess
import sys
import threading
import time
from pathlib import Path

import pytest

from conftest import wait_all
from models.task_counts import TaskCountSnapshot
from services.thread_pool import THREAD_POOL_VERSION, ThreadPool, hardware_concurrency


def _gated_tasks(pool: ThreadPool, n: int):
    started = [threading.Event() for _ in range(n)]
    gates = [threading.Event() for _ in range(n)]

    def gated(i):
        started[i].set()
        gates[i].wait(10)

    for i in range(n):
        pool.push_task(gated, i)
    return started, gates


def _counts(pool: ThreadPool) -> tuple:
    return pool.task_counts().as_tuple()


# ===================== CONSTRUCTION =====================

def test_default_pool_uses_hardware_concurrency() -> None:
    with ThreadPool() as pool:
        assert pool.thread_count == hardware_concurrency() == (os.cpu_count() or 1)


def test_explicit_thread_count() -> None:
    with ThreadPool(12) as pool:
        assert pool.thread_count == 12


def test_zero_threads_is_clamped_to_one() -> None:
    with ThreadPool(0) as pool:
        assert pool.thread_count == 1
        assert pool.submit(lambda: "ok").get() == "ok"


def test_new_pool_is_idle_and_unpaused(pool: ThreadPool) -> None:
    assert pool.paused is False
    assert pool.task_counts() == TaskCountSnapshot(queued=0, running=0, total=0)


def test_version_string_format() -> None:
    assert re.fullmatch(r"v\d+\.\d+\.\d+ \(\d{4}-\d{2}-\d{2}\)", THREAD_POOL_VERSION)


# ===================== RESET =====================

def test_reset_changes_thread_count(pool: ThreadPool) -> None:
    pool.reset(5)
    assert pool.thread_count == 5
    pool.reset()
    assert pool.thread_count == hardware_concurrency()


def test_reset_keeps_distinct_worker_count(pool: ThreadPool) -> None:
    pool.reset(6)
    barrier = threading.Barrier(6)
    ids = set()
    lock = threading.Lock()

    def record():
        with lock:
            ids.add(threading.get_ident())
        barrier.wait(10)

    for _ in range(6):
        pool.push_task(record)
    pool.wait_for_tasks()
    assert len(ids) == 6


def test_reset_preserves_queued_tasks() -> None:
    done = []
    lock = threading.Lock()

    def work(i):
        time.sleep(0.01)
        with lock:
            done.append(i)

    with ThreadPool(2) as pool:
        for i in range(10):
            pool.push_task(work, i)
        pool.reset(3)
        pool.wait_for_tasks()
        assert sorted(done) == list(range(10))
        assert pool.thread_count == 3


def test_reset_preserves_pause_state() -> None:
    ran = []
    with ThreadPool(2) as pool:
        pool.paused = True
        for i in range(5):
            pool.push_task(ran.append, i)
        pool.reset(3)
        assert pool.paused is True
        assert _counts(pool) == (5, 0, 5)
        pool.paused = False
        pool.wait_for_tasks()
    assert sorted(ran) == list(range(5))


def test_waiter_during_reset_sees_an_empty_pool() -> None:
    done = []
    paused_seen = []
    at_return = {}
    lock = threading.Lock()

    def work(i):
        time.sleep(0.05)
        with lock:
            done.append(i)
            paused_seen.append(pool.paused)

    with ThreadPool(2) as pool:
        for i in range(20):
            pool.push_task(work, i)

        def waiter():
            pool.wait_for_tasks()
            at_return["total"] = pool.get_tasks_total()
            with lock:
                at_return["done"] = len(done)

        waiting = threading.Thread(target=waiter)
        waiting.start()
        time.sleep(0.02)
        pool.reset(3)
        assert pool.paused is False
        waiting.join(30)
        assert not waiting.is_alive()

    assert at_return == {"total": 0, "done": 20}
    assert not any(paused_seen)


def test_reset_after_shutdown_is_rejected() -> None:
    pool = ThreadPool(1)
    pool.shutdown()
    with pytest.raises(RuntimeError):
        pool.reset(2)


def test_reset_from_worker_is_rejected(pool: ThreadPool) -> None:
    with pytest.raises(RuntimeError):
        pool.submit(pool.reset, 2).get()
    with pytest.raises(RuntimeError):
        pool.submit(pool.wait_for_tasks).get()
    assert pool.thread_count == 4


# ===================== WAITING =====================

def test_wait_for_tasks_squares() -> None:
    squares = [0] * 100

    def square(i):
        time.sleep(0.005)
        squares[i] = i * i

    with ThreadPool(5) as pool:
        for i in range(100):
            pool.push_task(square, i)
        pool.wait_for_tasks()
        assert squares[50] == 2500
        assert squares == [i * i for i in range(100)]
        assert pool.get_tasks_total() == 0


def test_wait_for_tasks_on_empty_pool_returns(pool: ThreadPool) -> None:
    start = time.monotonic()
    pool.wait_for_tasks()
    assert time.monotonic() - start < 1.0


def test_push_task_no_op_returns_total_to_zero(pool: ThreadPool) -> None:
    pool.push_task(lambda: None)
    pool.wait_for_tasks()
    assert pool.get_tasks_total() == 0


# ===================== MONITORING =====================

def test_monitoring_timeline(pool: ThreadPool) -> None:
    started, gates = _gated_tasks(pool, 12)
    try:
        assert wait_all(started[0:4])
        assert _counts(pool) == (12, 4, 8)
        for g in gates[0:4]:
            g.set()
        assert wait_all(started[4:8])
        assert _counts(pool) == (8, 4, 4)
        for g in gates[4:8]:
            g.set()
        assert wait_all(started[8:12])
        assert _counts(pool) == (4, 4, 0)
        for g in gates[8:12]:
            g.set()
        pool.wait_for_tasks()
        assert _counts(pool) == (0, 0, 0)
    finally:
        for g in gates:
            g.set()


def test_individual_counters_match_snapshot(pool: ThreadPool) -> None:
    started, gates = _gated_tasks(pool, 6)
    try:
        assert wait_all(started[0:4])
        assert pool.get_tasks_queued() == 2
        assert pool.get_tasks_running() == 4
        assert pool.get_tasks_total() == 6
    finally:
        for g in gates:
            g.set()


def test_counter_identity_under_stress() -> None:
    violations = []
    stop = threading.Event()
    executed = []
    lock = threading.Lock()

    def tick():
        with lock:
            executed.append(1)

    with ThreadPool(4) as pool:
        def sampler():
            while not stop.is_set():
                try:
                    snapshot = pool.task_counts()
                except ValueError as e:
                    violations.append(e)
                    continue
                if snapshot.total != snapshot.queued + snapshot.running:
                    violations.append(snapshot)

        def submitter(k):
            for i in range(2500):
                if i % 2:
                    pool.push_task(tick)
                else:
                    pool.submit(tick)

        samplers = [threading.Thread(target=sampler) for _ in range(2)]
        submitters = [threading.Thread(target=submitter, args=(k,)) for k in range(4)]
        for t in samplers + submitters:
            t.start()
        for t in submitters:
            t.join(60)
        pool.wait_for_tasks()
        stop.set()
        for t in samplers:
            t.join(60)

    assert violations == []
    assert len(executed) == 10_000


# ===================== PAUSE =====================

def test_pause_lets_running_tasks_finish(pool: ThreadPool) -> None:
    started, gates = _gated_tasks(pool, 8)
    try:
        assert wait_all(started[0:4])
        pool.paused = True
        for i in range(4):
            pool.push_task(lambda: None)
        assert _counts(pool) == (12, 4, 8)
        for g in gates[0:4]:
            g.set()
        pool.wait_for_tasks()
        assert _counts(pool) == (8, 0, 8)
        time.sleep(0.1)
        assert _counts(pool) == (8, 0, 8)
        assert not any(e.is_set() for e in started[4:8])
        for g in gates[4:8]:
            g.set()
        pool.paused = False
        pool.wait_for_tasks()
        assert _counts(pool) == (0, 0, 0)
    finally:
        for g in gates:
            g.set()


def test_paused_timeline(pool: ThreadPool) -> None:
    pool.paused = True
    started, gates = _gated_tasks(pool, 12)
    try:
        assert _counts(pool) == (12, 0, 12)
        time.sleep(0.3)
        assert _counts(pool) == (12, 0, 12)

        pool.paused = False
        assert wait_all(started[0:4])
        for g in gates[0:4]:
            g.set()
        assert wait_all(started[4:8])
        assert _counts(pool) == (8, 4, 4)

        pool.paused = True
        for g in gates[4:8]:
            g.set()
        pool.wait_for_tasks()
        assert _counts(pool) == (4, 0, 4)

        for g in gates[8:12]:
            g.set()
        pool.paused = False
        pool.wait_for_tasks()
        assert _counts(pool) == (0, 0, 0)
    finally:
        for g in gates:
            g.set()


def test_unpause_resumes_in_fifo_order(single_pool: ThreadPool) -> None:
    order = []
    single_pool.paused = True
    for i in range(10):
        single_pool.push_task(order.append, i)
    assert single_pool.get_tasks_running() == 0
    single_pool.paused = False
    single_pool.wait_for_tasks()
    assert order == list(range(10))


# ===================== ORDER & FAILURES =====================

def test_fifo_start_order_with_mixed_submissions(single_pool: ThreadPool) -> None:
    order = []
    for i in range(1000):
        if i % 3 == 0:
            single_pool.submit(order.append, i)
        else:
            single_pool.push_task(order.append, i)
    single_pool.wait_for_tasks()
    assert order == list(range(1000))


def test_failing_push_task_does_not_kill_worker(single_pool: ThreadPool) -> None:
    errors = []
    single_pool.on_task_error = errors.append

    def boom(i):
        raise ValueError(f"boom {i}")

    for i in range(3):
        single_pool.push_task(boom, i)
    assert single_pool.submit(lambda: "alive").get() == "alive"
    assert single_pool.thread_count == 1
    assert [str(e) for e in errors] == ["boom 0", "boom 1", "boom 2"]


def test_base_exception_in_push_task_does_not_kill_worker(single_pool: ThreadPool) -> None:
    errors = []
    single_pool.on_task_error = errors.append

    def interrupt():
        raise KeyboardInterrupt

    single_pool.push_task(sys.exit, 3)
    single_pool.push_task(interrupt)
    future = single_pool.submit(lambda: "alive")
    assert future.get() == "alive"
    single_pool.wait_for_tasks()
    assert [type(e) for e in errors] == [SystemExit, KeyboardInterrupt]
    assert single_pool.task_counts().as_tuple() == (0, 0, 0)


# ===================== SHUTDOWN =====================

def test_shutdown_runs_pending_tasks() -> None:
    done = []
    lock = threading.Lock()

    def work(i):
        time.sleep(0.01)
        with lock:
            done.append(i)

    pool = ThreadPool(2)
    for i in range(10):
        pool.push_task(work, i)
    pool.shutdown()
    assert sorted(done) == list(range(10))


def test_shutdown_while_paused_discards_queue() -> None:
    done = []
    pool = ThreadPool(2)
    started, gates = _gated_tasks(pool, 2)
    assert wait_all(started)
    pool.paused = True
    for i in range(10):
        pool.push_task(done.append, i)
    for g in gates:
        g.set()
    pool.shutdown()
    assert done == []
    assert _counts(pool) == (0, 0, 0)


def test_conservation_after_paused_shutdown() -> None:
    completed = []
    lock = threading.Lock()

    def work(i):
        with lock:
            completed.append(i)

    pool = ThreadPool(1)
    for i in range(5):
        pool.push_task(work, i)
    pool.wait_for_tasks()
    pool.paused = True
    for i in range(5, 12):
        pool.push_task(work, i)
    discarded = pool.get_tasks_queued()
    pool.shutdown()
    assert len(completed) + discarded + pool.get_tasks_total() == 12
    assert completed == list(range(5))


def test_task_accepted_while_stopping_still_runs() -> None:
    ran = []

    class LateSubmitPool(ThreadPool):
        def _destroy_threads(self, close: bool = False) -> None:
            if close:
                self.push_task(ran.append, "late")
            super()._destroy_threads(close)

    pool = LateSubmitPool(2)
    pool.shutdown()
    assert ran == ["late"]
    assert _counts(pool) == (0, 0, 0)


def test_concurrent_submitter_during_shutdown_loses_nothing() -> None:
    executed = []
    accepted = []
    lock = threading.Lock()

    def tick(i):
        with lock:
            executed.append(i)

    pool = ThreadPool(4)

    def submitter():
        i = 0
        while True:
            try:
                pool.push_task(tick, i)
            except RuntimeError:
                return
            accepted.append(i)
            i += 1

    thread = threading.Thread(target=submitter)
    thread.start()
    time.sleep(0.05)
    pool.shutdown()
    thread.join(30)
    assert not thread.is_alive()
    assert sorted(executed) == accepted


_DROPPED_POOL_SCRIPT = """
import sys, time
sys.path.insert(0, {app_dir!r})
from services.thread_pool import ThreadPool

def work(i):
    time.sleep(0.02)
    with open({out!r}, "a") as f:
        f.write(f"{{i}}\\n")

pool = ThreadPool(2)
pool.paused = {paused}
for i in range(10):
    pool.push_task(work, i)
del pool
"""


def _run_dropped_pool(tmp_path: Path, paused: bool) -> list:
    out = tmp_path / "side_effects.txt"
    app_dir = str(Path(__file__).resolve().parent.parent / "app")
    script = _DROPPED_POOL_SCRIPT.format(app_dir=app_dir, out=str(out), paused=paused)
    result = subprocess.run([sys.executable, "-c", script], cwd=tmp_path, timeout=60, capture_output=True)
    assert result.returncode == 0, result.stderr
    return out.read_text().split() if out.exists() else []


def test_dropped_pool_runs_pending_tasks_at_exit(tmp_path) -> None:
    assert sorted(_run_dropped_pool(tmp_path, paused=False), key=int) == [str(i) for i in range(10)]


def test_dropped_paused_pool_discards_queue_at_exit(tmp_path) -> None:
    assert _run_dropped_pool(tmp_path, paused=True) == []


def test_shutdown_idle_pool_is_prompt() -> None:
    start = time.monotonic()
    ThreadPool(8).shutdown()
    assert time.monotonic() - start < 2.0


def test_submit_after_shutdown_is_rejected() -> None:
    pool = ThreadPool(1)
    pool.shutdown()
    with pytest.raises(RuntimeError):
        pool.push_task(lambda: None)
