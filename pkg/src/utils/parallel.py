"""Thread-pool helpers capped by ``MSE_THREADS``.

numpy/scipy release the GIL inside BLAS/LAPACK, so threads are enough for the
independent solver starts and state evaluations.  ``joblib.Parallel`` returns
results in submission order, which keeps every merge deterministic.
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional, TypeVar

from joblib import Parallel, delayed

from src.config import MSE_THREADS

T = TypeVar("T")
R = TypeVar("R")


def worker_count(n_tasks: int, cap: Optional[int] = None) -> int:
    limit = MSE_THREADS if cap is None else max(1, int(cap))
    return max(1, min(limit, int(n_tasks)))


def parallel_map(fn: Callable[[T], R], items: Iterable[T], cap: Optional[int] = None) -> list[R]:
    """``[fn(x) for x in items]`` on up to ``cap`` threads, order preserved."""
    items = list(items)
    if not items:
        return []
    n_jobs = worker_count(len(items), cap)
    if n_jobs == 1:
        return [fn(x) for x in items]
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(fn)(x) for x in items)
