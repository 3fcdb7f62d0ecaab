"""
Thread Pool - Pool di worker riutilizzabili con coda FIFO condivisa

I worker vengono creati una volta sola e prelevano i task dalla coda finché il
pool è attivo. Funzionalità:
- submit() con future, push_task() senza future
- parallelize_loop() per dividere un ciclo in blocchi
- contatori queued/running/total, pausa, wait_for_tasks(), reset(), shutdown()
"""
import atexit
import logging
import os
import threading
import weakref
from collections import deque
from typing import Any, Callable, Deque, List, Optional, TypeVar

from config import settings
from models.task_counts import TaskCountSnapshot
from services.loop_partition import compute_blocks
from services.task_future import MultiFuture, TaskFuture

logger = logging.getLogger(__name__)

T = TypeVar("T")

THREAD_POOL_VERSION = settings.version_string


def hardware_concurrency() -> int:
    """Numero di thread eseguibili in parallelo; 1 se la piattaforma non lo sa"""
    return os.cpu_count() or 1


# Pool ancora aperti: i worker tengono vivo il pool, quindi la fine della sua vita
# coincide con l'uscita dell'interprete
_live_pools: "weakref.WeakSet[ThreadPool]" = weakref.WeakSet()


def _shutdown_live_pools() -> None:
    """All'uscita dell'interprete chiude i pool ancora aperti, come shutdown()"""
    for pool in list(_live_pools):
        pool.shutdown()


atexit.register(_shutdown_live_pools)


class ThreadPool:
    def __init__(self, thread_count: Optional[int] = None):
        """
        Args:
            thread_count: numero di worker; None = hardware concurrency.
                Valori < 1 vengono portati a 1.
        """
        self._lock = threading.Lock()
        # Due condizioni sullo stesso lock: una per i worker, una per chi attende
        self._task_available = threading.Condition(self._lock)
        self._task_done = threading.Condition(self._lock)

        self._queue: Deque[Callable[[], None]] = deque()
        self._tasks_running = 0
        self._paused = False
        self._draining = False  # reset(): i worker non prelevano nuovi task
        self._running = False
        self._closed = False
        self._workers: List[threading.Thread] = []
        self._worker_idents: set = set()
        self._generation = 0

        # Hook diagnostico per i task senza future che sollevano eccezioni
        self.on_task_error: Optional[Callable[[BaseException], None]] = None

        self._thread_count = self._determine_thread_count(thread_count)
        self._create_threads()
        _live_pools.add(self)
        logger.info(f"Thread pool {THREAD_POOL_VERSION} started with {self._thread_count} workers")

    # ===================== LIFECYCLE =====================

    @staticmethod
    def _determine_thread_count(thread_count: Optional[int]) -> int:
        if thread_count is None:
            return hardware_concurrency()
        if thread_count < 1:
            logger.warning(f"Requested {thread_count} threads, using 1")
            return 1
        return thread_count

    def _create_threads(self) -> None:
        with self._lock:
            self._running = True
            self._generation += 1
            generation = self._generation
        self._workers = [
            threading.Thread(
                target=self._worker,
                name=f"taskwell-worker-{generation}-{i}",
                daemon=True
            )
            for i in range(self._thread_count)
        ]
        for thread in self._workers:
            thread.start()

    def _destroy_threads(self, close: bool = False) -> None:
        """
        Ferma i worker e li attende

        Un worker esce solo con la coda vuota oppure con il pool in pausa (o in
        reset): i task accettati prima dello stop vengono comunque eseguiti.
        Con close=True il pool smette di accettare task nella stessa sezione critica.
        """
        with self._lock:
            self._running = False
            if close:
                self._closed = True
            self._task_available.notify_all()
        for thread in self._workers:
            thread.join()
        self._workers = []

    def _check_not_worker(self, operation: str) -> None:
        if threading.get_ident() in self._worker_idents:
            raise RuntimeError(f"{operation}() non può essere chiamato da un worker del pool")

    def reset(self, thread_count: Optional[int] = None) -> None:
        """
        Attende i task in esecuzione, ricrea i worker e mantiene i task in coda

        Lo stato di pausa non viene toccato: i nuovi worker partono nello stesso stato.
        Chi è fermo in wait_for_tasks() continua ad attendere finché la coda
        preservata non viene svuotata dai nuovi worker.
        """
        self._check_not_worker("reset")
        with self._lock:
            if self._closed:
                raise RuntimeError("Il pool è stato chiuso")
            self._draining = True
            self._task_done.wait_for(lambda: self._tasks_running == 0)
        self._destroy_threads()

        self._thread_count = self._determine_thread_count(thread_count)
        with self._lock:
            self._draining = False
            queued = len(self._queue)
        self._create_threads()
        logger.info(f"Thread pool reset to {self._thread_count} workers ({queued} tasks kept in queue)")

    def shutdown(self) -> None:
        """
        Chiude il pool

        Se non è in pausa attende tutti i task (in coda e in esecuzione); se è in
        pausa attende solo quelli in esecuzione e scarta quelli in coda.
        Dopo la chiusura push_task()/submit() sollevano RuntimeError.
        """
        self._check_not_worker("shutdown")
        if self._closed:
            return
        self.wait_for_tasks()
        self._destroy_threads(close=True)
        with self._lock:
            paused = self._paused
            discarded = len(self._queue)
            self._queue.clear()
            self._task_done.notify_all()
        _live_pools.discard(self)
        if discarded:
            state = "while paused" if paused else "with the pool unpaused"
            logger.info(f"Thread pool shut down {state}, {discarded} queued tasks discarded")
        else:
            logger.debug("Thread pool shut down")

    def __enter__(self) -> "ThreadPool":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.shutdown()

    # ===================== WORKER =====================

    def _worker(self) -> None:
        with self._lock:
            self._worker_idents.add(threading.get_ident())
        try:
            while True:
                with self._lock:
                    while self._running and (self._held() or not self._queue):
                        self._task_available.wait()
                    # fermato: esce, a meno che restino task da eseguire
                    if self._held() or not self._queue:
                        return
                    task = self._queue.popleft()
                    self._tasks_running += 1
                try:
                    task()
                except BaseException as exc:
                    # anche SystemExit/KeyboardInterrupt: il worker non deve morire
                    logger.debug(f"Task without future raised {type(exc).__name__}: {exc}", exc_info=True)
                    hook = self.on_task_error
                    if hook is not None:
                        try:
                            hook(exc)
                        except BaseException:
                            logger.exception("on_task_error hook raised")
                finally:
                    with self._lock:
                        self._tasks_running -= 1
                        self._task_done.notify_all()
        finally:
            with self._lock:
                self._worker_idents.discard(threading.get_ident())

    # ===================== SUBMISSION =====================

    def _enqueue(self, task: Callable[[], None]) -> None:
        with self._lock:
            if self._closed:
                raise RuntimeError("Il pool è stato chiuso")
            self._queue.append(task)
            self._task_available.notify()

    def push_task(self, fn: Callable[..., Any], *args: Any, **kwargs: Any) -> None:
        """Accoda un task senza future; gli argomenti sono legati subito"""
        self._enqueue(lambda: fn(*args, **kwargs))

    def submit(self, fn: Callable[..., T], *args: Any, **kwargs: Any) -> TaskFuture[T]:
        """
        Accoda un task e restituisce il suo future

        Il valore restituito dal task, o l'eccezione sollevata, arriva al future.
        """
        future: TaskFuture[T] = TaskFuture()
        self._enqueue(lambda: future._run(fn, args, kwargs))
        return future

    def parallelize_loop(
        self,
        start: int,
        end: int,
        body: Callable[[int, int], T],
        n: Optional[int] = None
    ) -> MultiFuture[T]:
        """
        Divide [start, end) in blocchi e invia un task per blocco

        Args:
            start: primo indice (se end < start gli estremi vengono scambiati)
            end: indice successivo all'ultimo
            body: funzione (a, b) che esegue il ciclo su [a, b)
            n: numero di blocchi; default = numero di worker

        Returns:
            MultiFuture con un future per blocco, in ordine di blocco
        """
        partition = compute_blocks(start, end, n if n is not None else self._thread_count)
        logger.debug(
            f"parallelize_loop: {len(partition)} blocks of {partition.block_size} "
            f"over [{partition.start}, {partition.end})"
        )
        loop_future: MultiFuture[T] = MultiFuture()
        for block in partition.blocks:
            loop_future.push(self.submit(body, block.start, block.end))
        return loop_future

    # ===================== WAITING & MONITORING =====================

    def _held(self) -> bool:
        """I worker non prelevano task: pausa dell'utente o reset in corso"""
        return self._paused or self._draining

    def _idle(self) -> bool:
        # solo la pausa visibile all'utente: durante un reset la coda va comunque attesa
        if self._paused:
            return self._tasks_running == 0
        return self._tasks_running == 0 and not self._queue

    def wait_for_tasks(self) -> None:
        """
        Attende tutti i task; se il pool è in pausa attende solo quelli in esecuzione
        """
        self._check_not_worker("wait_for_tasks")
        with self._lock:
            self._task_done.wait_for(self._idle)

    def task_counts(self) -> TaskCountSnapshot:
        with self._lock:
            queued = len(self._queue)
            running = self._tasks_running
        return TaskCountSnapshot(queued=queued, running=running, total=queued + running)

    def get_tasks_queued(self) -> int:
        with self._lock:
            return len(self._queue)

    def get_tasks_running(self) -> int:
        with self._lock:
            return self._tasks_running

    def get_tasks_total(self) -> int:
        with self._lock:
            return len(self._queue) + self._tasks_running

    @property
    def thread_count(self) -> int:
        return self._thread_count

    @property
    def paused(self) -> bool:
        with self._lock:
            return self._paused

    @paused.setter
    def paused(self, value: bool) -> None:
        with self._lock:
            self._paused = bool(value)
            self._task_available.notify_all()
            self._task_done.notify_all()
        logger.debug(f"Thread pool {'paused' if value else 'unpaused'}")

    def __repr__(self) -> str:
        return f"<ThreadPool {self._thread_count} workers, {self.task_counts()}>"
