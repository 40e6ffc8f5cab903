"""Reduced operators, product-state expectation values and subsystem reordering.

The reduced operator for block j is L sandwiched between every factor except
a_j, with the identity left on block I_j:

    L_{a_1..a_{j-1},a_{j+1}..a_K} = <a_1..a_{j-1}, ., a_{j+1}..a_K| L |a_1..a_{j-1}, ., a_{j+1}..a_K>

It is computed on the 2K-index tensor view of L (one row and one column axis
per block), which only makes sense when every block is a contiguous run of
subsystems in ascending order.  ``canonicalize`` permutes the subsystems of an
operator into that shape for an arbitrary partition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from src.config import IMAG_TOL
from src.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidPartition,
    NotHermitian,
    PartitionMismatch,
)
from src.hilbert.operators import HermitianOperator, readonly
from src.hilbert.product import ProductVector
from src.partitions.partition import Partition

logger = logging.getLogger(__name__)


def _check_space(op: HermitianOperator, v: ProductVector) -> None:
    if v.partition.n != op.space.n:
        raise PartitionMismatch(
            f"Partition covers {v.partition.n} subsystems, operator has {op.space.n}"
        )
    v.check_dims(op.space.dims)


def reduce_operator(op: HermitianOperator, v: ProductVector, skip: int) -> np.ndarray:
    """Contract ``op`` with every factor of ``v`` except block ``skip`` (0-based)."""
    _check_space(op, v)
    if not v.partition.is_canonical:
        raise PartitionMismatch(
            f"Partition {v.partition} is not canonical; call canonicalize first"
        )
    k = v.k
    if not 0 <= skip < k:
        raise IndexOutOfRange(f"Block index {skip} outside 0..{k - 1}")

    bdims = list(v.factor_dims())
    tensor = op.matrix.reshape(bdims + bdims)
    operands: list = [tensor, list(range(2 * k))]
    for b, a in enumerate(v.factors):
        if b == skip:
            continue
        operands += [a.conj(), [b], a, [k + b]]
    reduced = np.einsum(*operands, [skip, k + skip], optimize="greedy")
    return (reduced + reduced.conj().T) / 2.0


def expectation(op: HermitianOperator, v: ProductVector) -> float:
    """<a_1..a_K| L |a_1..a_K> for any partition of the operator's space."""
    _check_space(op, v)
    psi = v.full_vector(op.space.dims)
    value = np.vdot(psi, op.matrix @ psi)
    scale = max(1.0, float(np.max(np.abs(op.matrix))))
    if abs(value.imag) > IMAG_TOL * scale:
        raise NotHermitian(f"Expectation value has imaginary part {value.imag:.3e}")
    return float(value.real)


def permute_matrix(matrix: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder subsystems so that new position p holds old subsystem order[p]."""
    n = len(dims)
    tensor = np.asarray(matrix).reshape(list(dims) + list(dims))
    axes = list(order) + [n + i for i in order]
    d = int(np.prod(dims))
    return np.transpose(tensor, axes).reshape(d, d)


def permute_state(psi: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    tensor = np.asarray(psi).reshape(list(dims))
    return np.transpose(tensor, list(order)).reshape(-1)


@dataclass(frozen=True)
class SubsystemPermutation:
    """Record of a canonicalization.

    ``order[p]`` is the original (0-based) subsystem placed at canonical
    position p.  Block j of the canonical partition corresponds to block j of
    ``partition`` (both are ordered by smallest index), so product-vector
    factors carry over unchanged.
    """

    order: tuple[int, ...]
    dims: tuple[int, ...]
    partition: Partition
    canonical_partition: Partition

    @property
    def is_identity(self) -> bool:
        return self.order == tuple(range(len(self.order)))

    @property
    def inverse(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.argsort(self.order))

    @property
    def canonical_dims(self) -> tuple[int, ...]:
        return tuple(self.dims[i] for i in self.order)

    def to_canonical_state(self, psi: np.ndarray) -> np.ndarray:
        return permute_state(psi, self.dims, self.order)

    def to_original_state(self, psi: np.ndarray) -> np.ndarray:
        return permute_state(psi, self.canonical_dims, self.inverse)

    def to_original_matrix(self, matrix: np.ndarray) -> np.ndarray:
        return permute_matrix(matrix, self.canonical_dims, self.inverse)

    def restore_vector(self, v: ProductVector) -> ProductVector:
        if v.partition != self.canonical_partition:
            raise PartitionMismatch("Vector does not live on the canonical partition")
        return ProductVector(self.partition, v.factors)

    def canonical_vector(self, v: ProductVector) -> ProductVector:
        if v.partition != self.partition:
            raise PartitionMismatch("Vector does not live on the recorded partition")
        return ProductVector(self.canonical_partition, v.factors)


def canonicalize(
    op: HermitianOperator, partition: Partition
) -> tuple[HermitianOperator, Partition, SubsystemPermutation]:
    """Permute subsystems so every block is a contiguous ascending run."""
    if partition.n != op.space.n:
        raise InvalidPartition(
            f"Partition covers {partition.n} subsystems, operator has {op.space.n}"
        )
    order = tuple(i for block in partition.blocks for i in block)

    blocks, start = [], 0
    for block in partition.blocks:
        blocks.append(tuple(range(start, start + len(block))))
        start += len(block)
    canonical = Partition(blocks=tuple(blocks), n=partition.n)

    record = SubsystemPermutation(
        order=order, dims=op.space.dims, partition=partition, canonical_partition=canonical
    )
    if record.is_identity:
        return op, canonical, record

    logger.debug("Canonicalizing %s with subsystem order %s", partition, order)
    matrix = permute_matrix(op.matrix, op.space.dims, order)
    return HermitianOperator(op.space.permuted(order), readonly(matrix)), canonical, record


def local_unitary_conjugate(
    op: HermitianOperator, partition: Partition, unitaries: Sequence[np.ndarray]
) -> HermitianOperator:
    """(U_1 (x) ... (x) U_K) L (U_1 (x) ... (x) U_K)^dagger on a canonical partition."""
    if not partition.is_canonical:
        raise PartitionMismatch(f"Partition {partition} is not canonical")
    bdims = partition.block_dims(op.space.dims)
    if len(unitaries) != len(bdims):
        raise PartitionMismatch(f"{len(unitaries)} unitaries for {len(bdims)} blocks")
    for u, d in zip(unitaries, bdims):
        if np.shape(u) != (d, d):
            raise DimensionMismatch(f"Unitary of shape {np.shape(u)} on a block of dim {d}")
    u_full = reduce(np.kron, unitaries)
    matrix = u_full @ op.matrix @ u_full.conj().T
    return HermitianOperator(op.space, readonly((matrix + matrix.conj().T) / 2.0))
