"""Composite Hilbert space H_1 (x) ... (x) H_N described by its local dimensions."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

from src.errors import InvalidArgument


@dataclass(frozen=True)
class CompositeSpace:
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise InvalidArgument("A composite space needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise InvalidArgument(f"Every subsystem dimension must be >= 2, got {list(dims)}")

    @classmethod
    def of(cls, dims: Sequence[int]) -> "CompositeSpace":
        return cls(tuple(dims))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def permuted(self, order: Sequence[int]) -> "CompositeSpace":
        return CompositeSpace(tuple(self.dims[i] for i in order))

    def concat(self, other: "CompositeSpace") -> "CompositeSpace":
        return CompositeSpace(self.dims + other.dims)
