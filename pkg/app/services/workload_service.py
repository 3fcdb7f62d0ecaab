"""
Workload Service - Carico di lavoro del benchmark: riempimento di vettori casuali

Ogni vettore ha il proprio flusso pseudo-casuale derivato da (seed, indice), con
un generatore a 64 bit shift/multiply calcolato con numpy. Il contenuto dei
vettori non dipende quindi né dall'ordine dei thread né dalla suddivisione in
blocchi. Le operazioni numpy sugli array rilasciano il GIL, per cui blocchi
diversi possono essere riempiti davvero in parallelo.
"""
import logging
from typing import Optional

import numpy as np

from config import settings
from services.timer import Stopwatch

logger = logging.getLogger(__name__)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MUL_1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL_2 = np.uint64(0x94D049BB133111EB)
_TO_UNIT = 2.0 ** -53


def _mix64(z: np.ndarray) -> np.ndarray:
    """Finalizzatore shift/multiply a 64 bit (aritmetica modulo 2^64)"""
    z = (z ^ (z >> np.uint64(30))) * _MUL_1
    z = (z ^ (z >> np.uint64(27))) * _MUL_2
    return z ^ (z >> np.uint64(31))


def allocate_vectors(vector_count: int, vector_len: int) -> np.ndarray:
    return np.empty((vector_count, vector_len), dtype=np.float64)


def fill_vectors(
    out: np.ndarray,
    start: int,
    end: int,
    seed: int,
    chunk: Optional[int] = None
) -> None:
    """
    Riempie le righe [start, end) di `out` con valori casuali in [0, 1)

    Args:
        out: matrice (vettori x elementi)
        start, end: intervallo di righe
        seed: seme a 64 bit senza segno
        chunk: righe per passata (limita la memoria dei temporanei)
    """
    if chunk is None:
        chunk = settings.CALIBRATION_CHUNK_VECTORS
    vector_len = out.shape[1]
    element_steps = np.arange(1, vector_len + 1, dtype=np.uint64) * _GOLDEN
    seed64 = np.uint64(seed)

    for a in range(start, end, chunk):
        b = min(a + chunk, end)
        indices = np.arange(a, b, dtype=np.uint64)[:, None]
        streams = _mix64(seed64 + indices * _GOLDEN)
        values = _mix64(streams + element_steps)
        out[a:b] = (values >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def generate_vectors(vector_count: int, vector_len: int, seed: int) -> np.ndarray:
    """Genera i vettori in modo sequenziale (riferimento single-thread)"""
    out = allocate_vectors(vector_count, vector_len)
    fill_vectors(out, 0, vector_count, seed)
    return out


def time_single_threaded_fill(vector_count: int, vector_len: int, seed: int) -> float:
    """Millisecondi per riempire vector_count vettori sul thread corrente"""
    out = allocate_vectors(vector_count, vector_len)
    sw = Stopwatch()
    sw.start()
    fill_vectors(out, 0, vector_count, seed)
    sw.stop()
    return sw.ms()


def calibrate_workload(target_ms: float, vector_len: int, seed: int) -> int:
    """
    Sceglie quanti vettori servono perché il riempimento single-thread duri >= target_ms

    Raddoppia a partire da CALIBRATION_START_VECTORS finché la durata non supera
    il target, poi raffina con una ricerca binaria tra le ultime due potenze
    fino ad arrivare entro la tolleranza (10%) sopra il target.

    Returns:
        numero di vettori (mai meno del punto di partenza)
    """
    if target_ms <= 0:
        raise ValueError(f"target_ms deve essere positivo: {target_ms}")

    count = settings.CALIBRATION_START_VECTORS
    duration = time_single_threaded_fill(count, vector_len, seed)
    logger.debug(f"Calibration: {count} vectors -> {duration:.2f} ms")
    if duration >= target_ms:
        return count

    while duration < target_ms:
        count *= 2
        duration = time_single_threaded_fill(count, vector_len, seed)
        logger.debug(f"Calibration: {count} vectors -> {duration:.2f} ms")

    low, high, high_ms = count // 2, count, duration
    limit_ms = target_ms * (1.0 + settings.CALIBRATION_TOLERANCE)
    while high - low > 1 and high_ms > limit_ms:
        mid = (low + high) // 2
        mid_ms = time_single_threaded_fill(mid, vector_len, seed)
        logger.debug(f"Calibration: {mid} vectors -> {mid_ms:.2f} ms")
        if mid_ms >= target_ms:
            high, high_ms = mid, mid_ms
        else:
            low = mid

    logger.info(f"Calibrated workload: {high} vectors ({high_ms:.1f} ms, target {target_ms} ms)")
    return high
