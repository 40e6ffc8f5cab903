"""Exhaustive Bloch-angle grid oracle for operators on qubits.

A product of qubit states is a product of Bloch vectors, so with

    T[m_1..m_N] = tr(L sigma_{m_1} (x) ... (x) sigma_{m_N}),   r_j = (1, n_j) / 2,

the expectation value is the real multilinear form sum_m T[m] r_1[m_1]...r_N[m_N].
Every qubit gets the same grid of grid_steps polar angles (0..pi inclusive)
times grid_steps azimuths (0..2pi exclusive).  The form is contracted one
qubit at a time; the last two qubits are done as one matrix product per
combination of the leading ones, so memory stays at grid_points^2.  The best
grid point is then refined by a coordinate search over the 2N angles.
"""

from __future__ import annotations

import logging

import numpy as np

from src.config import ORACLE_CONFIG
from src.errors import DimensionGuard, InvalidArgument, UnsupportedSpace
from src.hilbert.operators import HermitianOperator
from src.partitions.partition import Partition
from src.solver.config import MODES

logger = logging.getLogger(__name__)

MIN_GRID_STEPS = 24

PAULIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def pauli_tensor(L: HermitianOperator) -> np.ndarray:
    """Real coefficients T[m_1..m_N] = tr(L sigma_{m_1} (x) ... (x) sigma_{m_N})."""
    n = L.space.n
    tensor = np.asarray(L.matrix).reshape([2] * (2 * n))
    operands: list = [tensor, list(range(2 * n))]
    for q in range(n):
        # tr(L P) = sum L[i, j] P[j, i]
        operands += [PAULIS, [2 * n + q, n + q, q]]
    coeffs = np.einsum(*operands, list(range(2 * n, 3 * n)), optimize="greedy")
    return np.real(coeffs)


def bloch_rows(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """(..., 4) rows (1, sin t cos p, sin t sin p, cos t) / 2."""
    st = np.sin(theta)
    return 0.5 * np.stack(
        [np.ones_like(theta), st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1
    )


def _grid(steps: int) -> tuple[np.ndarray, np.ndarray]:
    theta = np.linspace(0.0, np.pi, steps)
    phi = np.linspace(0.0, 2.0 * np.pi, steps, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    return tt.reshape(-1), pp.reshape(-1)


def _best_on_grid(coeffs: np.ndarray, rows: np.ndarray) -> tuple[float, tuple[int, ...]]:
    """max of the multilinear form over all grid tuples, first index wins ties."""
    if coeffs.ndim == 1:
        vals = rows @ coeffs
        i = int(np.argmax(vals))
        return float(vals[i]), (i,)
    if coeffs.ndim == 2:
        vals = rows @ coeffs @ rows.T
        i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
        return float(vals[i, j]), (int(i), int(j))

    partial = np.tensordot(rows, coeffs, axes=(1, 0))
    best, where = -np.inf, ()
    for g in range(rows.shape[0]):
        val, rest = _best_on_grid(partial[g], rows)
        if val > best:
            best, where = val, (g,) + rest
    return best, where


def _form(coeffs: np.ndarray, theta: np.ndarray, phi: np.ndarray) -> float:
    out = coeffs
    for r in bloch_rows(theta, phi):
        out = np.tensordot(r, out, axes=(0, 0))
    return float(out)


def _polish_angles(
    coeffs: np.ndarray, theta: np.ndarray, phi: np.ndarray, step: float, min_step: float
) -> float:
    angles = np.concatenate([theta, phi])
    n = theta.size
    current = _form(coeffs, angles[:n], angles[n:])
    moves = 0
    while step >= min_step and moves < ORACLE_CONFIG["polish_max_moves"]:
        best_val, best_angles = current, None
        for i in range(angles.size):
            for delta in (step, -step):
                trial = angles.copy()
                trial[i] += delta
                val = _form(coeffs, trial[:n], trial[n:])
                if val > best_val + 1e-12:
                    best_val, best_angles = val, trial
        if best_angles is None:
            step /= 2.0
        else:
            current, angles = best_val, best_angles
            moves += 1
    return current


def grid_qubit_extremum(
    L: HermitianOperator,
    partition: Partition,
    mode: str = "sup",
    grid_steps: int = ORACLE_CONFIG["grid_steps"],
) -> float:
    """Extremal expectation over product qubit states via the Bloch grid."""
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")
    if any(d != 2 for d in L.space.dims):
        raise UnsupportedSpace(f"Grid oracle needs qubits only, got dims {list(L.space.dims)}")
    if partition.n != L.space.n or any(len(b) != 1 for b in partition.blocks):
        raise UnsupportedSpace(f"Grid oracle needs the singleton partition, got {partition}")
    if grid_steps < MIN_GRID_STEPS:
        raise InvalidArgument(f"grid_steps must be >= {MIN_GRID_STEPS}, got {grid_steps}")

    n = L.space.n
    points = grid_steps * grid_steps
    evaluations = float(points) ** n
    if evaluations > ORACLE_CONFIG["max_grid_evaluations"]:
        raise DimensionGuard(
            f"{n} qubits at {grid_steps} steps needs {evaluations:.2e} grid evaluations"
        )

    sign = 1.0 if mode == "sup" else -1.0
    coeffs = sign * pauli_tensor(L)
    theta, phi = _grid(grid_steps)
    rows = bloch_rows(theta, phi)

    grid_best, where = _best_on_grid(coeffs, rows)
    idx = np.asarray(where)
    polished = _polish_angles(
        coeffs,
        theta[idx],
        phi[idx],
        step=np.pi / (grid_steps - 1),
        min_step=ORACLE_CONFIG["polish_min_step"],
    )
    best = max(grid_best, polished)
    logger.info(
        "grid %s on %d qubits (%d steps): grid %.10f, polished %.12f",
        mode, n, grid_steps, sign * grid_best, sign * best,
    )
    return sign * best
