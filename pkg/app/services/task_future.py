"""
Task Future - Handle di completamento per i task inviati al pool

TaskFuture incapsula un concurrent.futures.Future: diventa pronto con il valore
restituito dal task oppure fallito con l'eccezione sollevata, che viene
inoltrata invariata al chiamante di get().
MultiFuture raggruppa più future per attenderli e raccoglierli insieme.
"""
import threading
from concurrent.futures import Future
from typing import Any, Callable, Dict, Generic, Iterable, Iterator, List, Optional, Tuple, TypeVar

T = TypeVar("T")


class TaskFuture(Generic[T]):
    def __init__(self):
        self._future: Future = Future()
        self._consumed = False
        self._consumed_lock = threading.Lock()

    def _run(self, fn: Callable[..., T], args: Tuple, kwargs: Dict[str, Any]) -> None:
        """Eseguito dal worker: registra il risultato o l'eccezione"""
        if not self._future.set_running_or_notify_cancel():
            return
        try:
            result = fn(*args, **kwargs)
        except BaseException as exc:
            self._future.set_exception(exc)
        else:
            self._future.set_result(result)

    def done(self) -> bool:
        return self._future.done()

    def failed(self) -> bool:
        """True se il task è terminato sollevando un'eccezione"""
        return self._future.done() and self._future.exception() is not None

    def wait(self) -> None:
        """Blocca finché il task non è terminato (con valore o con errore)"""
        self._future.exception()

    def get(self) -> T:
        """
        Attende il task e restituisce il suo valore

        Raises:
            l'eccezione originale del task, se è fallito
            RuntimeError: se get() è già stato chiamato su questo future
        """
        with self._consumed_lock:
            if self._consumed:
                raise RuntimeError("get() già chiamato su questo future")
            self._consumed = True
        return self._future.result()

    @property
    def consumed(self) -> bool:
        return self._consumed

    def __repr__(self) -> str:
        if not self._future.done():
            state = "pending"
        elif self._future.exception() is not None:
            state = "failed"
        else:
            state = "ready"
        return f"<TaskFuture {state}>"


class MultiFuture(Generic[T]):
    """Gruppo ordinato di TaskFuture; get() rispetta l'ordine di inserimento"""

    def __init__(self, futures: Optional[Iterable[TaskFuture[T]]] = None):
        self.futures: List[TaskFuture[T]] = list(futures) if futures is not None else []

    def push(self, future: TaskFuture[T]) -> None:
        self.futures.append(future)

    def wait(self) -> None:
        for future in self.futures:
            future.wait()

    def get(self) -> List[T]:
        """
        Attende tutti i future e restituisce i risultati nell'ordine di inserimento

        Tutti i future vengono consumati anche in caso di errore; poi viene
        rilanciata la prima eccezione in ordine di inserimento.
        """
        self.wait()
        results: List[T] = []
        first_error: Optional[BaseException] = None
        for future in self.futures:
            try:
                results.append(future.get())
            except BaseException as exc:
                if first_error is None:
                    first_error = exc
        if first_error is not None:
            raise first_error
        return results

    def done(self) -> bool:
        return all(f.done() for f in self.futures)

    def __len__(self) -> int:
        return len(self.futures)

    def __iter__(self) -> Iterator[TaskFuture[T]]:
        return iter(self.futures)

    def __repr__(self) -> str:
        ready = sum(1 for f in self.futures if f.done())
        return f"<MultiFuture {ready}/{len(self.futures)} done>"
