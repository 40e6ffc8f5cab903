"""Solver knobs and their JSON form.

A config file holds a flat JSON object with any subset of the SolverConfig
keys; anything missing falls back to ``SOLVER_CONFIG`` in ``src/config.py``.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from src.config import SOLVER_CONFIG
from src.errors import InvalidArgument

MODES = ("sup", "inf")


@dataclass(frozen=True)
class SolverConfig:
    mode: str = SOLVER_CONFIG["mode"]
    tol_g: float = SOLVER_CONFIG["tol_g"]
    tol_residual: float = SOLVER_CONFIG["tol_residual"]
    max_iter: int = SOLVER_CONFIG["max_iter"]
    n_starts: int = SOLVER_CONFIG["n_starts"]
    seed: int = SOLVER_CONFIG["seed"]
    dedup_tol: float = SOLVER_CONFIG["dedup_tol"]

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise InvalidArgument(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in ("tol_g", "tol_residual", "dedup_tol"):
            if not float(getattr(self, name)) > 0:
                raise InvalidArgument(f"{name} must be > 0, got {getattr(self, name)}")
        if int(self.max_iter) < 1:
            raise InvalidArgument(f"max_iter must be >= 1, got {self.max_iter}")
        if int(self.n_starts) < 1:
            raise InvalidArgument(f"n_starts must be >= 1, got {self.n_starts}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidArgument(f"seed must be a non-negative 64-bit integer, got {self.seed}")

    @classmethod
    def from_dict(cls, payload: dict) -> "SolverConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(payload) - known)
        if unknown:
            raise InvalidArgument(f"Unknown solver config keys: {', '.join(unknown)}")
        return cls(**payload)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def with_mode(self, mode: str) -> "SolverConfig":
        return dataclasses.replace(self, mode=mode)

    def replace(self, **changes) -> "SolverConfig":
        return dataclasses.replace(self, **changes)


def load_solver_config(path: str | Path) -> SolverConfig:
    p = Path(path)
    try:
        payload = json.loads(p.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidArgument(f"Cannot read solver config {p}: {exc}") from None
    if not isinstance(payload, dict):
        raise InvalidArgument(f"Solver config {p} must hold a JSON object")
    return SolverConfig.from_dict(payload)
