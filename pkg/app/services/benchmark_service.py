"""
Benchmark Service - Confronto tra riempimento single-thread e multi-thread

Procedura:
1. Calibrazione del numero di vettori sul thread principale
2. Misura del riferimento single-thread, ripetuta `repeats` volte
3. Misura con parallelize_loop() per ogni numero di task in {T/4, T/2, T, 2T, 4T}
4. Media, deviazione standard (di popolazione) e speedup massimo
"""
import logging
from typing import List, Optional, Sequence

import numpy as np

from config import settings
from models.benchmark import BenchmarkRecord, BenchmarkReport, BestSpeedup
from models.harness import HarnessConfig
from services.harness_log import HarnessLog
from services.thread_pool import ThreadPool, hardware_concurrency
from services.timer import Stopwatch
from services.workload_service import allocate_vectors, calibrate_workload, fill_vectors

logger = logging.getLogger(__name__)


def summarize(task_count: int, samples_ms: Sequence[float]) -> BenchmarkRecord:
    """Media aritmetica e deviazione standard di popolazione (divisione per n)"""
    samples = np.asarray(samples_ms, dtype=np.float64)
    return BenchmarkRecord(
        task_count=task_count,
        mean_ms=float(np.mean(samples)),
        stddev_ms=float(np.std(samples)),
        samples_ms=[float(s) for s in samples]
    )


def task_count_schedule(threads: int, multipliers: Optional[Sequence[float]] = None) -> List[int]:
    """Numeri di task da provare: multipli di `threads`, almeno 1, senza duplicati"""
    if multipliers is None:
        multipliers = settings.BENCHMARK_MULTIPLIERS
    counts = {max(1, int(threads * m)) for m in multipliers}
    return sorted(counts)


def best_speedup(records: Sequence[BenchmarkRecord]) -> BestSpeedup:
    baseline = next(r for r in records if r.is_baseline)
    fastest = min((r for r in records if not r.is_baseline), key=lambda r: r.mean_ms)
    return BestSpeedup(speedup=baseline.mean_ms / fastest.mean_ms, task_count=fastest.task_count)


class BenchmarkService:
    def __init__(self, config: HarnessConfig, log: HarnessLog):
        self.config = config
        self.log = log
        self.threads = config.threads or hardware_concurrency()

    def _time_baseline(self, out: np.ndarray) -> float:
        sw = Stopwatch()
        sw.start()
        fill_vectors(out, 0, out.shape[0], self.config.seed)
        sw.stop()
        return sw.ms()

    def _time_parallel(self, pool: ThreadPool, out: np.ndarray, tasks: int) -> float:
        seed = self.config.seed
        sw = Stopwatch()
        sw.start()
        pool.parallelize_loop(
            0, out.shape[0], lambda a, b: fill_vectors(out, a, b, seed), tasks
        ).wait()
        sw.stop()
        return sw.ms()

    def _measure(self, task_count: int, run) -> BenchmarkRecord:
        run()  # warm-up, non misurato
        samples = [run() for _ in range(self.config.repeats)]
        return summarize(task_count, samples)

    def run(self) -> BenchmarkReport:
        """Esegue il benchmark completo e stampa i risultati"""
        config = self.config
        log = self.log
        log.banner("Performing benchmarks:")
        log.println("Using ", self.threads, " threads.")
        log.println(f"Each test will be repeated {config.repeats} times to collect reliable statistics.")

        vector_count = calibrate_workload(config.target_ms, config.vector_len, config.seed)
        log.println(f"Generating {vector_count} random vectors with {config.vector_len} elements each:")
        out = allocate_vectors(vector_count, config.vector_len)

        records = [self._measure(0, lambda: self._time_baseline(out))]
        log.println(
            f"Single-threaded, mean execution time was {records[0].mean_ms:6.1f} ms "
            f"with standard deviation {records[0].stddev_ms:4.1f} ms."
        )

        with ThreadPool(self.threads) as pool:
            for tasks in task_count_schedule(self.threads):
                record = self._measure(tasks, lambda: self._time_parallel(pool, out, tasks))
                records.append(record)
                log.println(
                    f"With {tasks:4d} tasks, mean execution time was {record.mean_ms:6.1f} ms "
                    f"with standard deviation {record.stddev_ms:4.1f} ms."
                )

        best = best_speedup(records)
        log.println(
            f"Maximum speedup obtained by multithreading vs. single-threading: "
            f"{best.speedup:.1f}x, using {best.task_count} tasks."
        )
        self._speedup_notes(best)
        log.success_banner("Thread pool performance test completed!")

        return BenchmarkReport(
            thread_count=self.threads,
            repeats=config.repeats,
            vector_len=config.vector_len,
            vector_count=vector_count,
            records=records,
            best=best
        )

    def _speedup_notes(self, best: BestSpeedup) -> None:
        """Avvisi non bloccanti: lo speedup dipende dall'hardware"""
        hardware = hardware_concurrency()
        if hardware >= 24 and best.speedup < 8.0:
            expected = 8
        elif hardware >= 4 and best.speedup < 2.0:
            expected = 2
        else:
            return
        self.log.println(f"Note: speedup below {expected}x on a host with {hardware} hardware threads.")
        logger.warning(f"Low multithreading speedup: {best.speedup:.2f}x (expected >= {expected}x)")
