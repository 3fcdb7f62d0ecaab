"""
TaskCountSnapshot - Fotografia coerente dei contatori del pool
"""
from pydantic import BaseModel, Field, model_validator


class TaskCountSnapshot(BaseModel):
    """Contatori letti nella stessa sezione critica: total == queued + running"""
    queued: int = Field(ge=0)
    running: int = Field(ge=0)
    total: int = Field(ge=0)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check_identity(self) -> "TaskCountSnapshot":
        if self.total != self.queued + self.running:
            raise ValueError(
                f"Snapshot incoerente: total={self.total}, "
                f"queued={self.queued}, running={self.running}"
            )
        return self

    def as_tuple(self) -> tuple:
        """(total, running, queued), l'ordine usato nei report"""
        return (self.total, self.running, self.queued)

    def __str__(self) -> str:
        return (
            f"{self.total} tasks total, {self.running} tasks running, "
            f"{self.queued} tasks queued"
        )
