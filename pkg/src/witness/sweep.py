"""Noisy-state sweeps: rho_p = p |psi><psi| + (1 - p) 1/D against a witness."""

from __future__ import annotations

import logging
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from src.config import DETECTION_TOL
from src.errors import DimensionMismatch, InvalidArgument
from src.states.benchmarks import PureState, werner_mix
from src.witness.witness import Witness, evaluate_many

logger = logging.getLogger(__name__)

SCAN_COLUMNS = ["p", "value", "detected"]


def parse_p_grid(text: str) -> np.ndarray:
    """``"a:b:steps"`` -> ``steps`` evenly spaced points from a to b inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidArgument(f"p grid must look like 'a:b:steps', got {text!r}")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InvalidArgument(f"p grid must look like 'a:b:steps', got {text!r}") from None
    if steps < 1:
        raise InvalidArgument(f"p grid needs at least one step, got {steps}")
    if not (0.0 <= start <= 1.0 and 0.0 <= stop <= 1.0):
        raise InvalidArgument(f"p grid bounds must lie in [0, 1], got {start}, {stop}")
    return np.linspace(start, stop, steps)


def _check(W: Witness, psi: PureState) -> None:
    if W.operator.space.dims != psi.space.dims:
        raise DimensionMismatch(
            f"Witness dims {list(W.operator.space.dims)} vs state dims {list(psi.space.dims)}"
        )


def werner_threshold(W: Witness, psi: PureState) -> Optional[float]:
    """Smallest p with tr(rho_p W) < 0.

    None if |psi> itself is not detected or W is negative on the maximally mixed state.

    tr(rho_p W) = p <psi|W|psi> + (1 - p) tr(W)/D is linear in p, so the
    crossing is p* = (tr W / D) / (tr W / D - <psi|W|psi>).
    """
    _check(W, psi)
    amps = psi.amplitudes
    pure = float(np.real(np.vdot(amps, W.operator.matrix @ amps)))
    mixed = float(np.real(np.trace(W.operator.matrix))) / W.operator.dim
    if pure >= -DETECTION_TOL:
        return None
    if mixed < -DETECTION_TOL:
        # W is negative on 1/D, which is separable
        logger.warning("Witness is negative on the maximally mixed state (%.3e)", mixed)
        return None
    return max(0.0, mixed / (mixed - pure))


def werner_scan(
    W: Witness, psi: PureState, p_values: Iterable[float], workers: Optional[int] = None
) -> pd.DataFrame:
    """One row (p, value, detected) per mixing weight, in input order."""
    _check(W, psi)
    ps = [float(p) for p in p_values]
    verdicts = evaluate_many(W, (werner_mix(psi, p) for p in ps), workers=workers)
    df = pd.DataFrame(
        {
            "p": ps,
            "value": [v.value for v in verdicts],
            "detected": [v.detected for v in verdicts],
        },
        columns=SCAN_COLUMNS,
    )
    n_hit = int(df["detected"].sum())
    logger.info("Werner scan: %d/%d points detected", n_hit, len(df))
    return df


def scan_to_json_lines(df: pd.DataFrame) -> str:
    """One JSON object per row, full float precision."""
    if df.empty:
        return ""
    return df.to_json(orient="records", lines=True, double_precision=15).rstrip("\n") + "\n"
