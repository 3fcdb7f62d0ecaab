"""
Taskwell - Thread pool test & benchmark harness
Esegue la suite automatica di controlli e il benchmark calibrato del pool
"""
import argparse
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from config import settings
from models.harness import HarnessConfig
from services.benchmark_service import BenchmarkService
from services.harness_log import HarnessLog
from services.self_test_service import run_automated_tests
from services.thread_pool import THREAD_POOL_VERSION, hardware_concurrency

# Logging configuration
logging.basicConfig(
    level=logging.DEBUG if settings.DEBUG else logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taskwell",
        description=f"{settings.APP_NAME} {THREAD_POOL_VERSION} - automated tests and benchmarks"
    )
    parser.add_argument("--threads", type=int, default=settings.HARNESS_THREADS,
                        help="worker threads (default: hardware concurrency)")
    parser.add_argument("--repeats", type=int, default=settings.HARNESS_REPEATS,
                        help="repetitions per benchmark configuration")
    parser.add_argument("--target-ms", type=float, default=settings.HARNESS_TARGET_MS,
                        help="single-threaded duration targeted by the calibration")
    parser.add_argument("--vector-len", type=int, default=settings.HARNESS_VECTOR_LEN,
                        help="elements per random vector")
    parser.add_argument("--seed", type=int, default=settings.HARNESS_SEED,
                        help="64-bit seed for random ranges and vectors")
    parser.add_argument("--log-dir", type=Path, default=settings.LOG_DIR,
                        help="directory for the log file")
    parser.add_argument("--skip-benchmark", action="store_true",
                        help="run only the automated tests")
    parser.add_argument("--only-benchmark", action="store_true",
                        help="run only the benchmark")
    return parser


def parse_config(argv: Optional[List[str]] = None) -> HarnessConfig:
    """Converte gli argomenti in HarnessConfig; errori di validazione -> uscita 2"""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return HarnessConfig(
            threads=args.threads,
            repeats=args.repeats,
            target_ms=args.target_ms,
            vector_len=args.vector_len,
            seed=args.seed,
            log_dir=args.log_dir,
            skip_benchmark=args.skip_benchmark,
            only_benchmark=args.only_benchmark
        )
    except ValidationError as e:
        parser.error(str(e))


def print_header(log: HarnessLog, config: HarnessConfig) -> None:
    title = f"{settings.APP_NAME}: a fixed-size thread pool with a FIFO task queue"
    log.banner(title, symbol="=")
    log.println(f"Thread pool library version is {THREAD_POOL_VERSION}.")
    log.println(f"Hardware concurrency is {hardware_concurrency()}.")
    if log.log_path is not None:
        log.println(f"Generating log file: {log.log_path.name}.")
    log.println(
        f"Configuration: threads={config.threads or hardware_concurrency()}, repeats={config.repeats}, "
        f"target_ms={config.target_ms}, vector_len={config.vector_len}, seed={config.seed}."
    )
    log.println("Important: Please do not run any other applications, especially multithreaded")
    log.println("applications, in parallel with this test!")


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    # Lo stream sincronizzato (dentro HarnessLog) va creato prima di qualsiasi pool
    with HarnessLog(config.log_dir, started_at=datetime.now()) as log:
        logger.info(f"Starting {settings.APP_NAME} harness {THREAD_POOL_VERSION}...")
        print_header(log, config)

        if not config.only_benchmark:
            summary = run_automated_tests(config, log)
            if not summary.success:
                logger.error(f"{len(summary.failed)} checks failed, benchmark skipped")
                return EXIT_CHECKS_FAILED

        if not config.skip_benchmark:
            BenchmarkService(config, log).run()

        logger.info(f"Shutting down {settings.APP_NAME} harness...")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
