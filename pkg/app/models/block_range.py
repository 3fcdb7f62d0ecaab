"""
BlockRange / BlockPartition - Suddivisione di un intervallo di indici in blocchi
"""
from typing import List, Tuple
from pydantic import BaseModel, Field, model_validator


class BlockRange(BaseModel):
    """Intervallo semiaperto [start, end)"""
    start: int
    end: int

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_order(self) -> "BlockRange":
        if self.end < self.start:
            raise ValueError(f"Blocco non valido: [{self.start}, {self.end})")
        return self

    @property
    def length(self) -> int:
        return self.end - self.start

    def __repr__(self) -> str:
        return f"<BlockRange [{self.start}, {self.end})>"


class BlockPartition(BaseModel):
    """Blocchi contigui, tutti uguali tranne l'ultimo che assorbe il resto"""
    blocks: List[BlockRange] = Field(default_factory=list)
    n_requested: int = Field(ge=1)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_contiguous(self) -> "BlockPartition":
        for left, right in zip(self.blocks, self.blocks[1:]):
            if left.end != right.start:
                raise ValueError(f"Blocchi non contigui: {left!r} {right!r}")
        return self

    @property
    def block_size(self) -> int:
        return self.blocks[0].length if self.blocks else 0

    @property
    def start(self) -> int:
        return self.blocks[0].start if self.blocks else 0

    @property
    def end(self) -> int:
        return self.blocks[-1].end if self.blocks else 0

    def as_tuples(self) -> List[Tuple[int, int]]:
        return [(b.start, b.end) for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)
