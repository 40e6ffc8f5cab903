"""Multistart search over Haar-random product starts.

Starts are independent: each gets its own child ``SeedSequence`` of the
configured seed, runs on a worker thread, and the merged results are sorted by
(g, factor data) before deduplication, so the output never depends on thread
scheduling.  Two solutions are the same when their g values agree within
``dedup_tol`` and every factor overlap |<a_j|a'_j>| is at least
1 - dedup_tol.

Multistart can miss MSEvalues; ``f_bound`` is only as good as the starts.
"""

from __future__ import annotations

import logging
from typing import Callable, Iterable, Optional

import numpy as np

from src.errors import NoConvergedSolution
from src.hilbert.contraction import SubsystemPermutation, canonicalize
from src.hilbert.operators import HermitianOperator
from src.hilbert.product import ProductVector
from src.partitions.partition import Partition
from src.solver.config import SolverConfig
from src.solver.eigen_iteration import follow_branch, iterate
from src.solver.results import MSESolution, MSESolutionSet, MSESpectrum
from src.states.sampling import SeedLike, random_product, spawn
from src.utils.parallel import parallel_map

logger = logging.getLogger(__name__)

Runner = Callable[[HermitianOperator, Partition, ProductVector, SolverConfig], MSESolution]


def _run_starts(
    op: HermitianOperator,
    partition: Partition,
    cfg: SolverConfig,
    runner: Runner,
    seed: SeedLike,
    workers: Optional[int],
) -> list[MSESolution]:
    starts = [random_product(op.space, partition, s) for s in spawn(seed, cfg.n_starts)]
    solutions = parallel_map(lambda init: runner(op, partition, init, cfg), starts, cap=workers)
    n_bad = sum(1 for s in solutions if not s.converged)
    if n_bad:
        logger.warning("%d of %d starts did not converge", n_bad, len(solutions))
    return solutions


def _same(a: MSESolution, b: MSESolution, tol: float) -> bool:
    if abs(a.g - b.g) > tol:
        return False
    return bool(np.all(a.vector.overlaps(b.vector) >= 1.0 - tol))


def deduplicate(solutions: Iterable[MSESolution], tol: float) -> list[MSESolution]:
    """Drop repeats; a converged copy replaces an unconverged representative."""
    kept: list[MSESolution] = []
    for sol in sorted(solutions, key=MSESolution.sort_key):
        for i, rep in enumerate(kept):
            if _same(sol, rep, tol):
                if sol.converged and not rep.converged:
                    kept[i] = sol
                break
        else:
            kept.append(sol)
    return sorted(kept, key=MSESolution.sort_key)


def _restore(solutions: list[MSESolution], record: SubsystemPermutation) -> tuple[MSESolution, ...]:
    if record.is_identity:
        return tuple(solutions)
    return tuple(
        MSESolution(
            g=s.g,
            vector=record.restore_vector(s.vector),
            residual=s.residual,
            iterations=s.iterations,
            converged=s.converged,
            history=s.history,
        )
        for s in solutions
    )


def _extremum(values: list[float], mode: str) -> float:
    return max(values) if mode == "sup" else min(values)


def multistart(
    op: HermitianOperator,
    partition: Partition,
    cfg: SolverConfig,
    workers: Optional[int] = None,
) -> MSESolutionSet:
    """Run ``cfg.n_starts`` extremal iterations and collect distinct solutions.

    Any partition is accepted; the search runs on the canonical reordering and
    solution vectors are reported on ``partition``.
    """
    op_c, part_c, record = canonicalize(op, partition)
    raw = _run_starts(op_c, part_c, cfg, iterate, cfg.seed, workers)
    solutions = deduplicate(raw, cfg.dedup_tol)

    values = [s.g for s in solutions if s.converged]
    if not values:
        raise NoConvergedSolution(
            f"None of {cfg.n_starts} starts converged (mode={cfg.mode}, partition={partition})"
        )
    f_value = _extremum(values, cfg.mode)
    logger.info(
        "multistart %s on %s: %d starts, %d distinct, f=%.12f",
        cfg.mode, partition, cfg.n_starts, len(solutions), f_value,
    )
    return MSESolutionSet(
        solutions=_restore(solutions, record),
        f_value=f_value,
        mode=cfg.mode,
        n_starts=cfg.n_starts,
    )


def f_bound(
    op: HermitianOperator,
    partition: Partition,
    cfg: SolverConfig,
    workers: Optional[int] = None,
) -> float:
    """max (sup) or min (inf) of the MSEvalues found by ``multistart``."""
    return multistart(op, partition, cfg, workers=workers).f_value


def distinct_values(values: Iterable[float], tol: float) -> tuple[float, ...]:
    """Sorted values with neighbours closer than ``tol`` merged."""
    merged: list[float] = []
    for value in sorted(values):
        if not merged or value - merged[-1] > tol:
            merged.append(value)
    return tuple(merged)


def mse_spectrum(
    op: HermitianOperator,
    partition: Partition,
    cfg: SolverConfig,
    workers: Optional[int] = None,
) -> MSESpectrum:
    """Union of sup, inf and branch-following multistarts.

    Extremal ascent only reaches local optima; branch-following starts also
    land on saddle-type solutions, so together they give the broadest view of
    the MSEvalue set this solver can offer.
    """
    op_c, part_c, record = canonicalize(op, partition)
    seeds = spawn(cfg.seed, 3)
    raw = (
        _run_starts(op_c, part_c, cfg.with_mode("sup"), iterate, seeds[0], workers)
        + _run_starts(op_c, part_c, cfg.with_mode("inf"), iterate, seeds[1], workers)
        + _run_starts(op_c, part_c, cfg, follow_branch, seeds[2], workers)
    )
    solutions = deduplicate(raw, cfg.dedup_tol)
    values = distinct_values((s.g for s in solutions if s.converged), cfg.dedup_tol)
    if not values:
        raise NoConvergedSolution(f"No start converged on {partition}")
    logger.info("spectrum on %s: %d distinct MSEvalues", partition, len(values))
    return MSESpectrum(solutions=_restore(solutions, record), values=values)
