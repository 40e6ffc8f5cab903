"""Dense Hermitian operators and density matrices on a CompositeSpace.

Storage is a complex ``total_dim x total_dim`` array, row-major, with the
lexicographic multi-index convention (subsystem 1 varies slowest), which is
exactly what ``np.kron`` produces.  Arrays are copied on construction and
flagged read-only, so operator values can be shared between threads.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np
from scipy import linalg

from src.config import DENSITY_TOL, HERMITIAN_GATE
from src.errors import DimensionMismatch, InvalidArgument, NotHermitian
from src.hilbert.space import CompositeSpace

logger = logging.getLogger(__name__)


def readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    space: CompositeSpace
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.space.total_dim

    def spectrum(self) -> np.ndarray:
        """Ascending eigenvalues."""
        return linalg.eigvalsh(self.matrix)

    def __neg__(self) -> "HermitianOperator":
        return HermitianOperator(self.space, readonly(-self.matrix))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    space: CompositeSpace
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.space.total_dim


def hermitian_deviation(matrix: np.ndarray) -> float:
    """max |M - M^dagger| entrywise."""
    m = np.asarray(matrix)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def _checked_square(space: CompositeSpace, entries) -> np.ndarray:
    m = np.asarray(entries, dtype=complex)
    d = space.total_dim
    if m.shape != (d, d):
        raise DimensionMismatch(
            f"Matrix shape {m.shape} does not match dims {list(space.dims)} (expected {d}x{d})"
        )
    if not np.all(np.isfinite(m)):
        raise InvalidArgument("Matrix contains NaN or infinite entries")
    return m


def _symmetrized(m: np.ndarray) -> np.ndarray:
    dev = hermitian_deviation(m)
    if dev > HERMITIAN_GATE:
        raise NotHermitian(f"Hermiticity deviation {dev:.3e} exceeds {HERMITIAN_GATE:.0e}")
    if dev > 0.0:
        logger.debug("Symmetrizing operator (deviation %.3e)", dev)
    return (m + m.conj().T) / 2.0


def make_operator(space: CompositeSpace, entries) -> HermitianOperator:
    """Validate ``entries`` and store them as a Hermitian operator."""
    m = _checked_square(space, entries)
    return HermitianOperator(space, readonly(_symmetrized(m)))


def identity(space: CompositeSpace) -> HermitianOperator:
    return HermitianOperator(space, readonly(np.eye(space.total_dim)))


def scale_shift(op: HermitianOperator, alpha: float, beta: float = 0.0) -> HermitianOperator:
    """alpha * L + beta * 1."""
    m = float(alpha) * op.matrix + float(beta) * np.eye(op.dim)
    return HermitianOperator(op.space, readonly(m))


def tensor_product(ops: Sequence[HermitianOperator]) -> HermitianOperator:
    """Kronecker product in the given subsystem order; dims are concatenated."""
    if not ops:
        raise InvalidArgument("tensor_product needs at least one operator")
    matrix = reduce(np.kron, (op.matrix for op in ops))
    space = reduce(lambda a, b: a.concat(b), (op.space for op in ops))
    return HermitianOperator(space, readonly(matrix))


def make_density(space: CompositeSpace, entries) -> DensityMatrix:
    """Validate a density matrix: Hermitian (gated), unit trace, PSD."""
    m = _symmetrized(_checked_square(space, entries))
    trace = float(np.real(np.trace(m)))
    if abs(trace - 1.0) > DENSITY_TOL:
        raise InvalidArgument(f"Density matrix trace {trace:.12f} is not 1")
    min_eig = float(linalg.eigvalsh(m)[0])
    if min_eig < -DENSITY_TOL:
        raise InvalidArgument(f"Density matrix has negative eigenvalue {min_eig:.3e}")
    return DensityMatrix(space, readonly(m))


def maximally_mixed(space: CompositeSpace) -> DensityMatrix:
    d = space.total_dim
    return DensityMatrix(space, readonly(np.eye(d) / d))


def expectation_value(op: HermitianOperator, rho: DensityMatrix) -> float:
    """tr(rho L) for matching spaces (real part; imaginary part is roundoff)."""
    if op.space.dims != rho.space.dims:
        raise DimensionMismatch(
            f"Operator dims {list(op.space.dims)} vs state dims {list(rho.space.dims)}"
        )
    return float(np.real(np.einsum("ij,ji->", rho.matrix, op.matrix)))
