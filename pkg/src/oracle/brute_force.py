"""Random-sampling + pattern-search oracle for f bounds.

Evaluates <a|L|a> directly on full product vectors and never touches reduced
operators or eigen-updates, so it cannot share a failure mode with the
solver.  Stage one draws Haar product states in bulk; stage two polishes the
best few with a best-improvement pattern search: every real and imaginary
coordinate of every factor is nudged by +/- step (factor renormalized), the
best improving move is taken, and the step halves whenever nothing improves
by more than 1e-12.  Ties between samples are broken by sample index.
"""

from __future__ import annotations

import logging

import numpy as np

from src.config import ORACLE_CONFIG, RANDOM_SEED
from src.errors import DimensionGuard, InvalidArgument
from src.hilbert.contraction import canonicalize
from src.hilbert.operators import HermitianOperator
from src.partitions.partition import Partition
from src.solver.config import MODES
from src.states.sampling import SeedLike, haar_vectors, make_rng, spawn

logger = logging.getLogger(__name__)

IMPROVEMENT_TOL = 1e-12
INITIAL_STEP = 0.1
SAMPLE_CHUNK = 4096


def _kron_rows(factors: list[np.ndarray]) -> np.ndarray:
    """Row-wise Kronecker product of (m, d_b) factor batches -> (m, D)."""
    states = factors[0]
    for f in factors[1:]:
        states = (states[:, :, None] * f[:, None, :]).reshape(states.shape[0], -1)
    return states


def _values(matrix: np.ndarray, states: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("ni,ni->n", states.conj(), states @ matrix.T))


def _polish(
    matrix: np.ndarray,
    factors: list[np.ndarray],
    sign: float,
    min_step: float,
    max_moves: int,
) -> float:
    """Best-improvement pattern search on the factors of one product vector."""
    factors = [f.copy() for f in factors]
    current = sign * float(_values(matrix, _kron_rows([f[None, :] for f in factors]))[0])
    step, moves = INITIAL_STEP, 0

    while step >= min_step and moves < max_moves:
        candidates: list[tuple[int, np.ndarray]] = []
        for b, f in enumerate(factors):
            for i in range(f.size):
                for delta in (step, -step, 1j * step, -1j * step):
                    trial = f.copy()
                    trial[i] += delta
                    candidates.append((b, trial / np.linalg.norm(trial)))

        batch = [np.repeat(f[None, :], len(candidates), axis=0) for f in factors]
        for row, (b, trial) in enumerate(candidates):
            batch[b][row] = trial
        vals = sign * _values(matrix, _kron_rows(batch))

        best = int(np.argmax(vals))
        if vals[best] > current + IMPROVEMENT_TOL:
            b, trial = candidates[best]
            factors[b] = trial
            current = float(vals[best])
            moves += 1
        else:
            step /= 2.0

    if moves >= max_moves:
        logger.warning("Pattern search stopped after %d moves (step %.1e)", moves, step)
    return sign * current


def brute_force_extremum(
    L: HermitianOperator,
    partition: Partition,
    mode: str = "sup",
    n_samples: int = ORACLE_CONFIG["n_samples"],
    n_polish: int = ORACLE_CONFIG["n_polish"],
    seed: SeedLike = RANDOM_SEED,
    max_total_dim: int = ORACLE_CONFIG["max_total_dim"],
) -> float:
    """Extremal <a|L|a> over product vectors by sampling and local search."""
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")
    if L.dim > max_total_dim:
        raise DimensionGuard(f"Total dimension {L.dim} exceeds oracle limit {max_total_dim}")
    if n_samples < 1 or n_polish < 0:
        raise InvalidArgument(f"Need n_samples >= 1 and n_polish >= 0, got {n_samples}, {n_polish}")

    op_c, part_c, _ = canonicalize(L, partition)
    matrix = np.asarray(op_c.matrix)
    bdims = part_c.block_dims(op_c.space.dims)
    sign = 1.0 if mode == "sup" else -1.0

    streams = spawn(seed, len(bdims))
    factors = [haar_vectors(make_rng(s), n_samples, d) for s, d in zip(streams, bdims)]
    values = np.empty(n_samples)
    for lo in range(0, n_samples, SAMPLE_CHUNK):
        hi = min(lo + SAMPLE_CHUNK, n_samples)
        values[lo:hi] = _values(matrix, _kron_rows([f[lo:hi] for f in factors]))

    order = np.argsort(-sign * values, kind="stable")
    best = float(values[order[0]])
    sampled = best
    for idx in order[:n_polish]:
        polished = _polish(
            matrix,
            [f[idx] for f in factors],
            sign,
            ORACLE_CONFIG["polish_min_step"],
            ORACLE_CONFIG["polish_max_moves"],
        )
        if sign * polished > sign * best:
            best = polished

    logger.info(
        "brute-force %s on %s: best sample %.10f, polished %.12f", mode, partition, sampled, best
    )
    return best
