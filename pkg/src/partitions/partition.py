"""Partitions I_1 ... I_K of the subsystem index set.

Internally every index is 0-based.  Text in and out (CLI flags, JSON
``"partition"`` fields, error messages) is 1-based, e.g. ``"1,2:3"`` means
blocks {1,2} and {3} of a three-subsystem space.

Blocks are always stored sorted by their smallest index, and indices inside a
block ascend, so two equal partitions compare equal regardless of how they
were written.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

from src.errors import DimensionMismatch, InvalidPartition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidPartition(f"Partition needs at least one subsystem, got N={self.n}")
        if not self.blocks:
            raise InvalidPartition("Partition has no blocks")

        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise InvalidPartition("Empty block in partition")
            if any(b <= a for a, b in zip(block, block[1:])):
                raise InvalidPartition(f"Block {_block_text(block)} is not strictly ascending")
            for idx in block:
                if idx < 0 or idx >= self.n:
                    raise InvalidPartition(f"Index {idx + 1} out of range 1..{self.n}")
                if idx in seen:
                    raise InvalidPartition(f"Index {idx + 1} appears in more than one block")
                seen.add(idx)

        if len(seen) != self.n:
            missing = sorted(set(range(self.n)) - seen)
            raise InvalidPartition(
                f"Indices {', '.join(str(i + 1) for i in missing)} are not covered"
            )

        mins = [block[0] for block in self.blocks]
        if mins != sorted(mins):
            raise InvalidPartition("Blocks must be ordered by their smallest index")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int) -> "Partition":
        """Build from 0-based blocks in any order (indices sorted per block)."""
        normalized = [tuple(sorted(int(i) for i in block)) for block in blocks]
        if any(not block for block in normalized):
            raise InvalidPartition("Empty block in partition")
        normalized.sort(key=lambda block: block[0])
        return cls(blocks=tuple(normalized), n=n)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def is_canonical(self) -> bool:
        """True when blocks are contiguous ascending runs covering 0..N-1 in order."""
        flat = [i for block in self.blocks for i in block]
        return flat == list(range(self.n))

    def block_dims(self, dims: Sequence[int]) -> tuple[int, ...]:
        """Dimension of each block's factor space."""
        if len(dims) != self.n:
            raise DimensionMismatch(
                f"Partition covers {self.n} subsystems but the space has {len(dims)}"
            )
        return tuple(prod(dims[i] for i in block) for block in self.blocks)

    def to_text(self) -> str:
        return ":".join(_block_text(block) for block in self.blocks)

    def __str__(self) -> str:
        return self.to_text()


def _block_text(block: Sequence[int]) -> str:
    return ",".join(str(i + 1) for i in block)


def parse_partition(text: str, n: int) -> Partition:
    """Parse the 1-based ``"1,2:3"`` grammar into a validated Partition."""
    if text is None or not str(text).strip():
        raise InvalidPartition("Empty partition string")

    blocks: list[list[int]] = []
    for chunk in str(text).strip().split(":"):
        chunk = chunk.strip()
        if not chunk:
            raise InvalidPartition(f"Empty block in partition {text!r}")
        block: list[int] = []
        for token in chunk.split(","):
            token = token.strip()
            try:
                idx = int(token)
            except ValueError:
                raise InvalidPartition(f"Bad index {token!r} in partition {text!r}") from None
            if idx < 1 or idx > n:
                raise InvalidPartition(f"Index {idx} out of range 1..{n} in {text!r}")
            block.append(idx - 1)
        if len(set(block)) != len(block):
            raise InvalidPartition(f"Repeated index inside block {chunk!r}")
        blocks.append(block)

    return Partition.from_blocks(blocks, n)


def finest(n: int) -> Partition:
    """{1}{2}...{N}: every subsystem on its own."""
    return Partition(blocks=tuple((i,) for i in range(n)), n=n)


def single_block(n: int) -> Partition:
    """{1..N}: no split at all."""
    return Partition(blocks=(tuple(range(n)),), n=n)


def is_refinement(p: Partition, q: Partition) -> bool:
    """True iff every block of ``p`` lies inside some block of ``q``."""
    if p.n != q.n:
        raise DimensionMismatch(f"Partitions over different sizes: {p.n} vs {q.n}")
    owner = {idx: b for b, block in enumerate(q.blocks) for idx in block}
    return all(len({owner[idx] for idx in block}) == 1 for block in p.blocks)
