"""Block-coordinate eigen-iteration for the MSEvalue equations.

For a canonical partition the equations read

    L_{a_1..a_{j-1},a_{j+1}..a_K} |a_j> = g |a_j>,   j = 1..K,

so every equation is an ordinary Hermitian eigenproblem once the other
factors are held fixed.  A sweep replaces each factor in turn by an
eigenvector of its reduced operator:

- ``block_update`` takes the extremal eigenvector (largest for sup, smallest
  for inf).  g then moves monotonically, and fixed points are exactly the
  stationary product states.
- ``nearest_update`` takes the eigenvector closest to the current factor,
  whatever its eigenvalue.  It is not monotone but stays on the branch it
  starts near, which is how saddle-type solutions are reached.

A run stops once |g_t - g_{t-1}| <= tol_g and the residual certificate
max_j ||L_j a_j - g a_j|| is below tol_residual.  Hitting max_iter returns
the last iterate with ``converged=False``.
"""

from __future__ import annotations

import logging
from typing import Callable

import numpy as np
from scipy import linalg

from src.config import DEGENERACY_TOL, OVERLAP_FLOOR
from src.errors import EigenDecompositionFailure, InvalidArgument, PartitionMismatch
from src.hilbert.contraction import canonicalize, expectation, reduce_operator
from src.hilbert.operators import HermitianOperator
from src.hilbert.product import ProductVector, fix_phase
from src.partitions.partition import Partition
from src.solver.config import MODES, SolverConfig
from src.solver.results import MSESolution

logger = logging.getLogger(__name__)

BlockUpdate = Callable[[ProductVector, int], tuple[np.ndarray, float]]


def _eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if not np.all(np.isfinite(matrix)):
        raise EigenDecompositionFailure("Reduced operator contains non-finite entries")
    try:
        return linalg.eigh(matrix)
    except (linalg.LinAlgError, ValueError) as exc:
        raise EigenDecompositionFailure(f"Hermitian eigendecomposition failed: {exc}") from exc


def _pick_in_eigenspace(
    w: np.ndarray, vecs: np.ndarray, target: float, current: np.ndarray
) -> np.ndarray:
    """Eigenvector for ``target`` closest to ``current``.

    In a degenerate eigenspace this is the normalized projection of the
    current factor; if the factor is (numerically) orthogonal to the space,
    the lowest-index eigenvector of the sorted decomposition is used.
    """
    tol = DEGENERACY_TOL * max(1.0, float(np.max(np.abs(w))))
    idx = np.flatnonzero(np.abs(w - target) <= tol)
    if idx.size == 1:
        return vecs[:, idx[0]]

    basis = vecs[:, idx]
    projected = basis @ (basis.conj().T @ current)
    norm = float(np.linalg.norm(projected))
    if norm < OVERLAP_FLOOR:
        logger.warning("Degenerate eigenspace (%d-fold) orthogonal to factor; using index order", idx.size)
        return basis[:, 0]
    return projected / norm


def _finish(reduced: np.ndarray, vec: np.ndarray) -> tuple[np.ndarray, float]:
    vec = fix_phase(vec / np.linalg.norm(vec))
    return vec, float(np.real(np.vdot(vec, reduced @ vec)))


def block_update(
    op: HermitianOperator, v: ProductVector, j: int, mode: str
) -> tuple[np.ndarray, float]:
    """Extremal eigenpair of the reduced operator for block ``j``."""
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")
    reduced = reduce_operator(op, v, j)
    w, vecs = _eigh(reduced)
    target = float(w[-1] if mode == "sup" else w[0])
    return _finish(reduced, _pick_in_eigenspace(w, vecs, target, v.factors[j]))


def nearest_update(op: HermitianOperator, v: ProductVector, j: int) -> tuple[np.ndarray, float]:
    """Eigenpair of the reduced operator whose eigenvector best overlaps a_j."""
    reduced = reduce_operator(op, v, j)
    w, vecs = _eigh(reduced)
    overlaps = np.abs(vecs.conj().T @ v.factors[j])
    target = float(w[int(np.argmax(overlaps))])
    return _finish(reduced, _pick_in_eigenspace(w, vecs, target, v.factors[j]))


def block_residual(op: HermitianOperator, v: ProductVector, g: float) -> float:
    """max_j ||L_j a_j - g a_j||_2 on a canonical partition."""
    worst = 0.0
    for j, a in enumerate(v.factors):
        reduced = reduce_operator(op, v, j)
        worst = max(worst, float(np.linalg.norm(reduced @ a - g * a)))
    return worst


def residual(op: HermitianOperator, partition: Partition, sol: MSESolution) -> float:
    """Residual certificate of ``sol``; any partition (canonicalized internally)."""
    if sol.vector.partition != partition:
        raise PartitionMismatch(
            f"Solution lives on {sol.vector.partition}, asked about {partition}"
        )
    op_c, _, record = canonicalize(op, partition)
    return block_residual(op_c, record.canonical_vector(sol.vector), sol.g)


def _sweep(
    op: HermitianOperator, init: ProductVector, cfg: SolverConfig, update: BlockUpdate
) -> MSESolution:
    v = init
    g_prev = expectation(op, v)
    g = g_prev
    history = [g_prev]
    converged = False
    res = float("nan")
    iterations = 0

    for iterations in range(1, cfg.max_iter + 1):
        for j in range(v.k):
            factor, g = update(v, j)
            v = v.replace_factor(j, factor)
        history.append(g)
        delta = abs(g - g_prev)
        logger.debug("sweep %d  g=%.15f  |dg|=%.3e", iterations, g, delta)
        if delta <= cfg.tol_g:
            res = block_residual(op, v, g)
            if res <= cfg.tol_residual:
                converged = True
                break
        g_prev = g

    if not converged:
        res = block_residual(op, v, g)
        logger.debug("No convergence after %d sweeps (g=%.12f, residual=%.3e)", iterations, g, res)

    return MSESolution(
        g=float(g),
        vector=v,
        residual=float(res),
        iterations=iterations,
        converged=converged,
        history=tuple(history),
    )


def _check_start(op: HermitianOperator, partition: Partition, init: ProductVector) -> None:
    if init.partition != partition:
        raise PartitionMismatch(f"Start vector lives on {init.partition}, not {partition}")
    if not partition.is_canonical:
        raise PartitionMismatch(f"Partition {partition} is not canonical; call canonicalize first")
    init.check_dims(op.space.dims)


def iterate(
    op: HermitianOperator, partition: Partition, init: ProductVector, cfg: SolverConfig
) -> MSESolution:
    """Cyclic extremal block updates from ``init`` (canonical partition)."""
    _check_start(op, partition, init)
    return _sweep(op, init, cfg, lambda v, j: block_update(op, v, j, cfg.mode))


def follow_branch(
    op: HermitianOperator, partition: Partition, init: ProductVector, cfg: SolverConfig
) -> MSESolution:
    """Cyclic nearest-eigenvector updates from ``init`` (canonical partition)."""
    _check_start(op, partition, init)
    return _sweep(op, init, cfg, lambda v, j: nearest_update(op, v, j))
