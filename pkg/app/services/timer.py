"""
Timer - Cronometro monotono per misurare tempi di esecuzione in millisecondi
"""
import time
from typing import Optional


class Stopwatch:
    """
    Uso:
        sw = Stopwatch()
        sw.start()
        ...
        sw.stop()
        sw.ms()

    Oppure come context manager: `with Stopwatch() as sw: ...`
    """

    def __init__(self):
        self._start: Optional[float] = None
        self._stop: Optional[float] = None

    def start(self) -> None:
        self._start = time.perf_counter()
        self._stop = None

    def stop(self) -> None:
        if self._start is None:
            raise RuntimeError("stop() chiamato prima di start()")
        self._stop = time.perf_counter()

    def ms(self) -> float:
        """Millisecondi tra l'ultimo start() e il successivo stop()"""
        if self._start is None or self._stop is None:
            raise RuntimeError("ms() richiede una coppia start()/stop() completa")
        return max(0.0, (self._stop - self._start) * 1000.0)

    def __enter__(self) -> "Stopwatch":
        self.start()
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.stop()
