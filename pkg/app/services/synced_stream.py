"""
Synced Stream - Stampa thread-safe su uno o più stream di output

Ogni chiamata a print()/println() è una sezione critica: le righe prodotte da
thread diversi non si mescolano mai.
Attenzione: lo stream deve vivere più a lungo del pool che lo usa, quindi va
creato prima del pool.
"""
import sys
import threading
from typing import Any, TextIO, Tuple


def render(item: Any) -> str:
    """Interi in decimale, float nella forma più corta che fa round-trip, testo invariato"""
    if isinstance(item, str):
        return item
    if isinstance(item, float):
        return repr(item)
    return str(item)


class SyncedStream:
    def __init__(self, *streams: TextIO):
        self._streams: Tuple[TextIO, ...] = streams if streams else (sys.stdout,)
        self._lock = threading.Lock()

    def print(self, *items: Any) -> None:
        """Scrive gli argomenti, nell'ordine dato, come un'unica scrittura atomica"""
        text = "".join(render(item) for item in items)
        with self._lock:
            for stream in self._streams:
                stream.write(text)
                stream.flush()

    def println(self, *items: Any) -> None:
        self.print(*items, "\n")

    @property
    def streams(self) -> Tuple[TextIO, ...]:
        return self._streams
