"""
Self Test Service - Suite automatica di controlli sul pool

Sezioni, nell'ordine: costruttore, reset(), push_task(), submit(),
wait_for_tasks(), parallelize_loop(), monitoraggio, pausa, eccezioni, somma di
vettori. Le sezioni di monitoraggio e pausa usano task con "cancello"
(threading.Event) aperto dalla suite, così i contatori sono esatti nei punti di
controllo; le attese a tempo restano solo dove serve verificare che nulla cambi.
"""
import logging
import threading
import time
from typing import Callable, List, Optional, Sequence

import numpy as np

from config import settings
from models.harness import CheckSummary, HarnessConfig
from services.harness_log import HarnessLog
from services.thread_pool import ThreadPool, hardware_concurrency

logger = logging.getLogger(__name__)

GATE_TIMEOUT_S = 10.0
MONITORING_THREADS = 4
MONITORING_TASKS = 12


class SelfTestService:
    def __init__(self, config: HarnessConfig, log: HarnessLog):
        self.config = config
        self.log = log
        self.threads = config.threads or hardware_concurrency()
        self.summary = CheckSummary()
        self.rng = np.random.default_rng(config.seed)
        self.pool: Optional[ThreadPool] = None

    # ===================== HELPERS =====================

    def check(self, condition: bool, label: str) -> bool:
        if condition:
            self.summary.passed += 1
            self.log.println("-> PASSED!")
        else:
            self.summary.failed.append(label)
            self.log.println("-> FAILED!")
            logger.error(f"Check failed: {label}")
        return bool(condition)

    def _count_unique_threads(self) -> int:
        """Ogni worker trattiene un task finché tutti non sono arrivati alla barriera"""
        n = self.pool.thread_count
        barrier = threading.Barrier(n)
        ids = set()
        ids_lock = threading.Lock()

        def record_id():
            with ids_lock:
                ids.add(threading.get_ident())
            try:
                barrier.wait(timeout=GATE_TIMEOUT_S)
            except threading.BrokenBarrierError:
                pass

        for _ in range(n):
            self.pool.push_task(record_id)
        self.pool.wait_for_tasks()
        return len(ids)

    def _check_thread_count(self, expected: int, what: str) -> None:
        self.log.println(f"Checking that {what}the thread pool reports a number of threads equal to {expected}...")
        self.check(self.pool.thread_count == expected, f"{what}thread_count == {expected}")
        self.log.println(
            f"Checking that {what}the manually counted number of unique thread IDs "
            f"is equal to the reported number of threads..."
        )
        self.check(self._count_unique_threads() == self.pool.thread_count, f"{what}unique thread IDs")

    def _check_counts(self, total: int, running: int, queued: int) -> None:
        self.log.println(f"{total} tasks total, {running} tasks running, {queued} tasks queued...")
        snapshot = self.pool.task_counts()
        self.check(
            snapshot.as_tuple() == (total, running, queued),
            f"expected {total}-{running}-{queued}, got {snapshot}"
        )

    @staticmethod
    def _wait_events(events: Sequence[threading.Event]) -> bool:
        deadline = time.monotonic() + GATE_TIMEOUT_S
        return all(e.wait(max(0.0, deadline - time.monotonic())) for e in events)

    def _reset_pool(self, thread_count: int) -> None:
        self.log.println(f"Resetting pool to {thread_count} threads.")
        self.pool.reset(thread_count)

    def _random_range(self) -> tuple:
        limit = settings.LOOP_RANGE_LIMIT
        start = int(self.rng.integers(-limit, limit + 1))
        end = int(self.rng.integers(-limit, limit + 1))
        if start == end:
            end += 1
        tasks = int(self.rng.integers(2, settings.LOOP_MAX_TASKS + 1))
        return start, end, tasks

    # ===================== SECTIONS =====================

    def check_constructor(self) -> None:
        self.log.banner("Checking that the constructor works:")
        self._check_thread_count(self.threads, "")

    def check_reset(self) -> None:
        self.log.banner("Checking that reset() works:")
        half = max(1, self.threads // 2)
        self.pool.reset(half)
        self._check_thread_count(half, "after reset() ")
        self.pool.reset(self.threads)
        self._check_thread_count(self.threads, "after a second reset() ")

    def check_push_task(self) -> None:
        self.log.banner("Checking that push_task() works:")
        state = {}

        def no_args():
            state["none"] = True

        def one_arg(target):
            target["one"] = True

        def two_args(first, second):
            first["two_a"] = True
            second["two_b"] = True

        self.log.println("Checking that push_task() works for a function with no arguments or return value...")
        self.pool.push_task(no_args)
        self.pool.wait_for_tasks()
        self.check(state.get("none", False), "push_task() without arguments")

        self.log.println("Checking that push_task() works for a function with one argument and no return value...")
        self.pool.push_task(one_arg, state)
        self.pool.wait_for_tasks()
        self.check(state.get("one", False), "push_task() with one argument")

        self.log.println("Checking that push_task() works for a function with two arguments and no return value...")
        other = {}
        self.pool.push_task(two_args, state, other)
        self.pool.wait_for_tasks()
        self.check(state.get("two_a", False) and other.get("two_b", False), "push_task() with two arguments")

    def check_submit(self) -> None:
        self.log.banner("Checking that submit() works:")
        state = {}

        def no_args():
            state["none"] = True

        def one_arg(target):
            target["one"] = True

        def two_args(first, second):
            first["two_a"] = True
            second["two_b"] = True

        self.log.println("Checking that submit() works for a function with no arguments or return value...")
        self.pool.submit(no_args).wait()
        self.check(state.get("none", False), "submit() without arguments or return value")

        self.log.println("Checking that submit() works for a function with one argument and no return value...")
        self.pool.submit(one_arg, state).wait()
        self.check(state.get("one", False), "submit() with one argument and no return value")

        self.log.println("Checking that submit() works for a function with two arguments and no return value...")
        other = {}
        self.pool.submit(two_args, state, other).wait()
        self.check(
            state.get("two_a", False) and other.get("two_b", False),
            "submit() with two arguments and no return value"
        )

        self.log.println("Checking that submit() works for a function with no arguments and a return value...")
        self.check(self.pool.submit(lambda: 42).get() == 42, "submit() with a return value")

        self.log.println("Checking that submit() works for a function with one argument and a return value...")
        self.check(self.pool.submit(lambda x: x, 42).get() == 42, "submit() with one argument and a return value")

        self.log.println("Checking that submit() works for a function with two arguments and a return value...")
        self.check(
            self.pool.submit(lambda a, b: a + b, 40, 2).get() == 42,
            "submit() with two arguments and a return value"
        )

    def check_wait_for_tasks(self) -> None:
        self.log.banner("Checking that wait_for_tasks() works...")
        n = self.pool.thread_count * 10
        flags = [False] * n

        def sleep_and_set(i):
            time.sleep(0.01)
            flags[i] = True

        for i in range(n):
            self.pool.push_task(sleep_and_set, i)
        self.pool.wait_for_tasks()
        self.check(all(flags), "wait_for_tasks()")

    def check_parallelize_loop(self) -> None:
        self.log.banner("Checking that parallelize_loop() works:")
        for _ in range(settings.LOOP_CHECKS):
            start, end, tasks = self._random_range()
            self.log.println(f"Verifying that a loop from {start} to {end} with {tasks} tasks modifies all indices...")
            low = min(start, end)
            touched = np.zeros(abs(end - start), dtype=np.int64)

            def mark(a, b):
                touched[a - low:b - low] += 1

            self.pool.parallelize_loop(start, end, mark, tasks).wait()
            self.check(bool(np.all(touched == 1)), f"loop coverage {start}..{end} / {tasks}")

        for _ in range(settings.LOOP_CHECKS):
            start, end, tasks = self._random_range()
            self.log.println(f"Verifying that a loop from {start} to {end} with {tasks} tasks correctly sums all indices...")
            low, high = min(start, end), max(start, end)

            def block_sum(a, b):
                return int(np.arange(a, b, dtype=np.int64).sum())

            total = sum(self.pool.parallelize_loop(start, end, block_sum, tasks).get())
            expected = (low + high - 1) * (high - low) // 2
            self.check(total == expected, f"loop sum {start}..{end} / {tasks}")

    def _submit_gated(self, on_done: Optional[Callable[[int], None]] = None) -> tuple:
        started = [threading.Event() for _ in range(MONITORING_TASKS)]
        gates = [threading.Event() for _ in range(MONITORING_TASKS)]

        def gated(i):
            started[i].set()
            gates[i].wait(GATE_TIMEOUT_S)
            if on_done is not None:
                on_done(i)

        for i in range(MONITORING_TASKS):
            self.pool.push_task(gated, i)
        return started, gates

    def _release(self, gates: List[threading.Event], indices: range, verbose: bool = False) -> None:
        for i in indices:
            gates[i].set()
            if verbose:
                self.log.println(f"Task {i} released.")

    def check_task_monitoring(self) -> None:
        self.log.banner("Checking that task monitoring works:")
        self._reset_pool(MONITORING_THREADS)
        self.log.println(f"Submitting {MONITORING_TASKS} tasks.")
        started, gates = self._submit_gated()
        try:
            self._wait_events(started[0:4])
            self.log.println("After submission, should have:")
            self._check_counts(12, 4, 8)

            self._release(gates, range(0, 4), verbose=True)
            self._wait_events(started[4:8])
            self.log.println("After releasing 4 tasks, should have:")
            self._check_counts(8, 4, 4)

            self._release(gates, range(4, 8), verbose=True)
            self._wait_events(started[8:12])
            self.log.println("After releasing 4 more tasks, should have:")
            self._check_counts(4, 4, 0)

            self._release(gates, range(8, 12), verbose=True)
            self.pool.wait_for_tasks()
            self.log.println("After releasing the final 4 tasks, should have:")
            self._check_counts(0, 0, 0)
        finally:
            self._release(gates, range(MONITORING_TASKS))
            self.pool.wait_for_tasks()
        self._reset_pool(self.threads)

    def check_pausing(self) -> None:
        self.log.banner("Checking that pausing works:")
        self._reset_pool(MONITORING_THREADS)
        self.log.println("Pausing pool.")
        self.pool.paused = True
        self.log.println(f"Submitting {MONITORING_TASKS} tasks, each one waiting to be released.")
        started, gates = self._submit_gated(lambda i: self.log.println(f"Task {i} done."))
        try:
            self.log.println("Immediately after submission, should have:")
            self._check_counts(12, 0, 12)

            time.sleep(0.3)
            self.log.println("300ms later, should still have:")
            self._check_counts(12, 0, 12)

            self.log.println("Unpausing pool.")
            self.pool.paused = False
            self._wait_events(started[0:4])
            self._release(gates, range(0, 4))
            self._wait_events(started[4:8])
            self.log.println("After 4 tasks finished, should have:")
            self._check_counts(8, 4, 4)

            self.log.println("Pausing pool and using wait_for_tasks() to wait for the running tasks.")
            self.pool.paused = True
            self._release(gates, range(4, 8))
            self.pool.wait_for_tasks()
            self.log.println("After waiting, should have:")
            self._check_counts(4, 0, 4)

            time.sleep(0.2)
            self.log.println("200ms later, should still have:")
            self._check_counts(4, 0, 4)

            self.log.println("Unpausing pool and using wait_for_tasks() to wait for all tasks.")
            self._release(gates, range(8, 12))
            self.pool.paused = False
            self.pool.wait_for_tasks()
            self.log.println("After waiting, should have:")
            self._check_counts(0, 0, 0)
        finally:
            self._release(gates, range(MONITORING_TASKS))
            self.pool.paused = False
            self.pool.wait_for_tasks()
        self._reset_pool(self.threads)

    def check_exceptions(self) -> None:
        self.log.banner("Checking that exception handling works:")

        def inverse(x):
            if x == 0:
                raise ZeroDivisionError("Division by zero!")
            return 1 / x

        caught = False
        try:
            self.pool.submit(inverse, 0).get()
        except ZeroDivisionError as e:
            caught = str(e) == "Division by zero!"
        self.check(caught, "exception forwarded to the future")

    def check_vectors(self) -> None:
        self.log.banner("Testing that vector operations produce the expected results:")
        for _ in range(settings.VECTOR_CHECKS):
            size = int(self.rng.integers(1, settings.VECTOR_MAX_LEN + 1))
            tasks = int(self.rng.integers(2, settings.LOOP_MAX_TASKS + 1))
            self.log.println(f"Adding two vectors with {size} elements using {tasks} tasks...")
            x = self.rng.random(size)
            y = self.rng.random(size)
            result = np.empty(size)

            def add(a, b):
                result[a:b] = x[a:b] + y[a:b]

            self.pool.parallelize_loop(0, size, add, tasks).wait()
            self.check(bool(np.array_equal(result, x + y)), f"vector addition {size} / {tasks}")

    # ===================== RUN =====================

    def run(self) -> CheckSummary:
        """Esegue tutte le sezioni e stampa il riepilogo finale"""
        with ThreadPool(self.threads) as pool:
            self.pool = pool
            self.check_constructor()
            self.check_reset()
            self.check_push_task()
            self.check_submit()
            self.check_wait_for_tasks()
            self.check_parallelize_loop()
            self.check_task_monitoring()
            self.check_pausing()
            self.check_exceptions()
            self.check_vectors()

        summary = self.summary
        if summary.success:
            self.log.success_banner(f"SUCCESS: Passed all {summary.total} checks!")
        else:
            self.log.success_banner(
                f"FAILURE: Passed {summary.passed} checks, but failed {len(summary.failed)}!"
            )
            for label in summary.failed:
                self.log.println("Failed: ", label)
        return summary


def run_automated_tests(config: HarnessConfig, log: HarnessLog) -> CheckSummary:
    return SelfTestService(config, log).run()
