"""Product vectors |a_1, ..., a_K> aligned with a partition.

Factors are normalized on construction and carry a fixed global phase: the
first component of largest modulus is made real and non-negative.  Per-factor
phases are physically irrelevant, so this convention is what makes two
solutions comparable entry by entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from src.config import PHASE_TIE_TOL
from src.errors import IndexOutOfRange, InvalidArgument, PartitionMismatch
from src.partitions.partition import Partition


def fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate ``vec`` so its first largest-modulus entry is real and >= 0."""
    v = np.asarray(vec, dtype=complex)
    mod = np.abs(v)
    top = float(mod.max()) if mod.size else 0.0
    if top == 0.0:
        return v.copy()
    idx = int(np.flatnonzero(mod >= top - PHASE_TIE_TOL)[0])
    out = v * (np.conj(v[idx]) / mod[idx])
    out[idx] = mod[idx]
    return out


def normalize(vec: np.ndarray) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not np.isfinite(norm):
        raise InvalidArgument("Cannot normalize a zero or non-finite vector")
    return fix_phase(v / norm)


@dataclass(frozen=True, eq=False)
class ProductVector:
    partition: Partition
    factors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.factors) != self.partition.k:
            raise PartitionMismatch(
                f"{len(self.factors)} factors for a partition with {self.partition.k} blocks"
            )
        fixed = []
        for f in self.factors:
            out = normalize(f)
            out.flags.writeable = False
            fixed.append(out)
        object.__setattr__(self, "factors", tuple(fixed))

    @property
    def k(self) -> int:
        return self.partition.k

    def factor_dims(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.factors)

    def replace_factor(self, j: int, factor: np.ndarray) -> "ProductVector":
        if not 0 <= j < self.k:
            raise IndexOutOfRange(f"Block index {j} outside 0..{self.k - 1}")
        factors = list(self.factors)
        factors[j] = factor
        return ProductVector(self.partition, tuple(factors))

    def check_dims(self, dims: Sequence[int]) -> None:
        expected = self.partition.block_dims(dims)
        if self.factor_dims() != expected:
            raise PartitionMismatch(
                f"Factor dimensions {list(self.factor_dims())} do not match blocks {list(expected)}"
            )

    def full_vector(self, dims: Sequence[int]) -> np.ndarray:
        """The state on the full space, in the original subsystem order."""
        self.check_dims(dims)
        psi = reduce(np.kron, self.factors)
        if self.partition.is_canonical:
            return psi
        order = [i for block in self.partition.blocks for i in block]
        tensor = psi.reshape([dims[i] for i in order])
        return np.transpose(tensor, np.argsort(order)).reshape(-1)

    def overlaps(self, other: "ProductVector") -> np.ndarray:
        """|<a_j|a'_j>| for every block."""
        if self.partition != other.partition:
            raise PartitionMismatch("Product vectors live on different partitions")
        return np.array([abs(np.vdot(a, b)) for a, b in zip(self.factors, other.factors)])


def make_product_vector(partition: Partition, factors: Sequence[np.ndarray]) -> ProductVector:
    return ProductVector(partition, tuple(np.asarray(f, dtype=complex) for f in factors))


def basis_factor(dim: int, index: int) -> np.ndarray:
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return vec
