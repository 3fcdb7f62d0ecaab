"""
Harness Log - Output dell'harness su console e, in copia identica, su file

Il file si chiama `taskwell_test-YYYY-MM-DD_HH.MM.SS.log` (orario di avvio); se
esiste già si aggiunge un suffisso numerico (-1, -2, ...).
"""
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Optional, TextIO

from config import settings
from services.synced_stream import SyncedStream

logger = logging.getLogger(__name__)


def log_file_name(started_at: datetime, suffix: int = 0) -> str:
    """Nome del file di log basato sull'orario di avvio"""
    timestamp = started_at.strftime("%Y-%m-%d_%H.%M.%S")
    name = f"{settings.LOG_FILE_PREFIX}-{timestamp}"
    if suffix:
        name += f"-{suffix}"
    return f"{name}.log"


def open_log_file(log_dir: Path, started_at: datetime, max_attempts: int = 1000) -> TextIO:
    """
    Crea la cartella se serve e apre un file di log nuovo (mai sovrascritto)

    Raises:
        OSError: se la cartella non è scrivibile
    """
    log_dir.mkdir(parents=True, exist_ok=True)
    for suffix in range(max_attempts):
        path = log_dir / log_file_name(started_at, suffix)
        try:
            return open(path, "x", encoding="utf-8", newline="\n")
        except FileExistsError:
            continue
    raise OSError(f"Nessun nome di file libero in {log_dir}")


class HarnessLog:
    def __init__(
        self,
        log_dir: Optional[Path] = None,
        started_at: Optional[datetime] = None,
        console: Optional[TextIO] = None
    ):
        self.started_at = started_at or datetime.now()
        self.console = console or sys.stdout
        self.log_path: Optional[Path] = None
        self._file: Optional[TextIO] = None

        if log_dir is not None:
            try:
                self._file = open_log_file(Path(log_dir), self.started_at)
                self.log_path = Path(self._file.name)
            except OSError as e:
                logger.warning(f"Cannot create log file in {log_dir}: {e}")
                SyncedStream(self.console).println(
                    f"Warning: cannot create log file in {log_dir} ({e}), logging to console only."
                )

        streams = (self.console, self._file) if self._file else (self.console,)
        self._out = SyncedStream(*streams)

    def print(self, *items: Any) -> None:
        self._out.print(*items)

    def println(self, *items: Any) -> None:
        self._out.println(*items)

    def emit_log(self, lines) -> None:
        """Scrive più righe, ciascuna su console e su file"""
        for line in lines:
            self._out.println(line)

    def banner(self, title: str, symbol: str = "=") -> None:
        rule = symbol * len(title)
        self.emit_log([rule, title, rule])

    def success_banner(self, text: str) -> None:
        self.banner(text, symbol="+")

    def close(self) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None

    def __enter__(self) -> "HarnessLog":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()
