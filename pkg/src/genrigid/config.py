from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

MODES = ("modular", "rational")
FORMATS = ("text", "json")

# exact rational elimination becomes impractical beyond this
RATIONAL_VERTEX_LIMIT = 12


@dataclass(frozen=True)
class TestConfig:
    """Run parameters shared by every check.

    ``N`` overrides the sampling bound that is otherwise derived from the
    graph size; ``force`` lets rational mode run on graphs above
    :data:`RATIONAL_VERTEX_LIMIT` vertices.
    """

    __test__ = False  # not a pytest class

    dim: int = 2
    rounds: int = 40
    seed: int = 0
    mode: str = "modular"
    N: Optional[int] = None
    fmt: str = "text"
    force: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.N is not None and self.N < 2:
            raise ValueError("N must be at least 2")
