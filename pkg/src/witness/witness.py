"""Entanglement witnesses from f bounds, and the two detection criteria.

A witness built from an operator L on a partition is

    W = f_sup(L) * 1 - L,

which is non-negative on every state that is separable with respect to that
partition; tr(rho W) < 0 therefore proves rho entangled.  The equivalent
criterion form compares t = tr(rho L) with both bounds: rho is entangled if
t > f_sup or t < f_inf.  The lower witness is the same construction applied
to -L, i.e. W = L - f_inf(L) * 1.

Verdicts only ever say "detected" beyond the ``DETECTION_TOL`` margin; states
sitting exactly on the boundary (tr(rho W) = 0) are reported as not detected.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from src.config import DETECTION_TOL
from src.errors import DimensionMismatch
from src.hilbert.io import operator_from_dict, operator_to_dict
from src.hilbert.operators import (
    DensityMatrix,
    HermitianOperator,
    expectation_value,
    make_operator,
    scale_shift,
)
from src.partitions.partition import Partition, parse_partition
from src.solver.config import SolverConfig
from src.solver.multistart import multistart
from src.solver.results import MSESolutionSet
from src.states.benchmarks import PureState
from src.utils.parallel import parallel_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Witness:
    """W = f_sup * 1 - source, with the solver run that produced f_sup."""

    operator: HermitianOperator
    partition: Partition
    f_sup: float
    source: HermitianOperator
    solver_report: Optional[MSESolutionSet] = None
    side: str = "sup"

    def to_dict(self) -> dict:
        return {
            "operator": operator_to_dict(self.operator),
            "partition": self.partition.to_text(),
            "f_sup": float(self.f_sup),
            "side": self.side,
            "solver_report": self.solver_report.to_dict() if self.solver_report else None,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Witness":
        operator = operator_from_dict(payload["operator"])
        n = operator.space.n
        report = payload.get("solver_report")
        f_sup = float(payload["f_sup"])
        return cls(
            operator=operator,
            partition=parse_partition(payload["partition"], n),
            f_sup=f_sup,
            source=scale_shift(operator, -1.0, f_sup),
            solver_report=MSESolutionSet.from_dict(report, n) if report else None,
            side=str(payload.get("side", "sup")),
        )


@dataclass(frozen=True)
class Verdict:
    """Outcome of one witness or criterion evaluation.

    ``value`` is tr(rho W) for witness verdicts and the criterion margin
    max(t - f_sup, f_inf - t) for criterion verdicts.
    """

    value: float
    detected: bool
    criterion_side: str
    expectation: Optional[float] = field(default=None)
    f_sup: Optional[float] = field(default=None)
    f_inf: Optional[float] = field(default=None)

    def to_dict(self) -> dict:
        out = {
            "value": float(self.value),
            "detected": bool(self.detected),
            "criterion_side": self.criterion_side,
        }
        for key in ("expectation", "f_sup", "f_inf"):
            val = getattr(self, key)
            if val is not None:
                out[key] = float(val)
        return out


def build_witness(L: HermitianOperator, partition: Partition, cfg: SolverConfig) -> Witness:
    """W = f_sup(L) * 1 - L; NoConvergedSolution propagates from the solver."""
    report = multistart(L, partition, cfg.with_mode("sup"))
    f_sup = report.f_value
    logger.info("Witness on %s: f_sup=%.12f", partition, f_sup)
    return Witness(
        operator=scale_shift(L, -1.0, f_sup),
        partition=partition,
        f_sup=f_sup,
        source=L,
        solver_report=report,
    )


def build_lower_witness(L: HermitianOperator, partition: Partition, cfg: SolverConfig) -> Witness:
    """W = L - f_inf(L) * 1, built as the ordinary witness of -L."""
    w = build_witness(-L, partition, cfg)
    return Witness(
        operator=w.operator,
        partition=w.partition,
        f_sup=w.f_sup,
        source=w.source,
        solver_report=w.solver_report,
        side="inf",
    )


def witness_expectation(W: Witness, rho: DensityMatrix) -> Verdict:
    value = expectation_value(W.operator, rho)
    return Verdict(value=value, detected=value < -DETECTION_TOL, criterion_side=W.side)


def evaluate_many(
    W: Witness, rhos: Iterable[DensityMatrix], workers: Optional[int] = None
) -> list[Verdict]:
    """witness_expectation over many states, in input order."""
    return parallel_map(lambda rho: witness_expectation(W, rho), rhos, cap=workers)


def separable_bounds(
    L: HermitianOperator, partition: Partition, cfg: SolverConfig
) -> tuple[float, float]:
    """(f_inf, f_sup) of ``L`` on ``partition``."""
    f_inf = multistart(L, partition, cfg.with_mode("inf")).f_value
    f_sup = multistart(L, partition, cfg.with_mode("sup")).f_value
    return f_inf, f_sup


def criterion(
    L: HermitianOperator,
    rho: DensityMatrix,
    partition: Partition,
    cfg: SolverConfig,
    bounds: Optional[tuple[float, float]] = None,
) -> Verdict:
    """Both-sided criterion: entangled if tr(rho L) leaves [f_inf, f_sup].

    Pass precomputed ``bounds`` (from ``separable_bounds``) to evaluate many
    states against one operator without re-running the solver.
    """
    if L.space.dims != rho.space.dims:
        raise DimensionMismatch(
            f"Operator dims {list(L.space.dims)} vs state dims {list(rho.space.dims)}"
        )
    f_inf, f_sup = bounds if bounds is not None else separable_bounds(L, partition, cfg)
    t = expectation_value(L, rho)
    upper, lower = t - f_sup, f_inf - t
    side = "sup" if upper >= lower else "inf"
    margin = max(upper, lower)
    return Verdict(
        value=margin,
        detected=margin > DETECTION_TOL,
        criterion_side=side,
        expectation=t,
        f_sup=f_sup,
        f_inf=f_inf,
    )


def geometric_entanglement(psi: PureState, partition: Partition, cfg: SolverConfig) -> float:
    """1 - max |<a_1..a_K|psi>|^2 over product vectors on ``partition``.

    The maximal squared product overlap is f_sup of the projector |psi><psi|.
    """
    amps = psi.amplitudes
    proj = make_operator(psi.space, np.outer(amps, amps.conj()))
    overlap = multistart(proj, partition, cfg.with_mode("sup")).f_value
    return max(0.0, 1.0 - overlap)
