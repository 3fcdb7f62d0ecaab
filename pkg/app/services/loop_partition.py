"""
Loop Partition - Divide un intervallo di indici in blocchi contigui

Regola: lunghezza blocco = floor(totale / n), l'ultimo blocco assorbe il resto.
Con (0, 9, 3) si ottengono [0, 3), [3, 6), [6, 9).
"""
import logging

from models.block_range import BlockRange, BlockPartition

logger = logging.getLogger(__name__)

# Dominio degli indici: interi con segno a 64 bit
INDEX_MIN = -(2**63)
INDEX_MAX = 2**63 - 1


def compute_blocks(start: int, end: int, n: int) -> BlockPartition:
    """
    Calcola la partizione a blocchi di [start, end)

    Args:
        start: primo indice (incluso)
        end: indice successivo all'ultimo (escluso); se end < start gli estremi
            vengono scambiati e si itera su [end, start)
        n: numero di blocchi richiesto (>= 1)

    Returns:
        BlockPartition con min(n, lunghezza) blocchi; vuota se l'intervallo è vuoto
    """
    if n < 1:
        raise ValueError(f"Numero di blocchi non valido: {n}")
    for value in (start, end):
        if not INDEX_MIN <= value <= INDEX_MAX:
            raise ValueError(f"Indice fuori dal dominio a 64 bit: {value}")

    if end < start:
        start, end = end, start

    total = end - start
    if total == 0:
        return BlockPartition(blocks=[], n_requested=n)

    n_blocks = min(n, total)
    block_size = total // n_blocks

    blocks = []
    for i in range(n_blocks):
        a = start + i * block_size
        b = end if i == n_blocks - 1 else a + block_size
        blocks.append(BlockRange(start=a, end=b))

    return BlockPartition(blocks=blocks, n_requested=n)
