"""Result records for MSE solver runs and their JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from src.hilbert.io import product_vector_from_dict, product_vector_to_dict
from src.hilbert.product import ProductVector


@dataclass(frozen=True, eq=False)
class MSESolution:
    """One MSEvalue g with its MSEvector and convergence record.

    ``history`` holds g after every sweep, starting with the value of the
    initial vector.
    """

    g: float
    vector: ProductVector
    residual: float
    iterations: int
    converged: bool
    history: tuple[float, ...] = field(default=())

    def sort_key(self) -> tuple:
        data = np.concatenate([np.stack([f.real, f.imag], axis=1).reshape(-1) for f in self.vector.factors])
        return (self.g, tuple(float(x) for x in data))

    def to_dict(self) -> dict:
        vec = product_vector_to_dict(self.vector)
        return {
            "g": float(self.g),
            "residual": float(self.residual),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "partition": vec["partition"],
            "factors": vec["factors"],
        }

    @classmethod
    def from_dict(cls, payload: dict, n: int) -> "MSESolution":
        vector = product_vector_from_dict(
            {"partition": payload["partition"], "factors": payload["factors"]}, n
        )
        return cls(
            g=float(payload["g"]),
            vector=vector,
            residual=float(payload["residual"]),
            iterations=int(payload["iterations"]),
            converged=bool(payload["converged"]),
        )


@dataclass(frozen=True, eq=False)
class MSESolutionSet:
    """Deduplicated solutions of one search direction, sorted by g."""

    solutions: tuple[MSESolution, ...]
    f_value: float
    mode: str
    n_starts: int = 0

    @property
    def n_converged(self) -> int:
        return sum(1 for s in self.solutions if s.converged)

    def values(self) -> list[float]:
        return [s.g for s in self.solutions if s.converged]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "f_value": float(self.f_value),
            "n_starts": int(self.n_starts),
            "solutions": [s.to_dict() for s in self.solutions],
        }

    @classmethod
    def from_dict(cls, payload: dict, n: int) -> "MSESolutionSet":
        return cls(
            solutions=tuple(MSESolution.from_dict(s, n) for s in payload["solutions"]),
            f_value=float(payload["f_value"]),
            mode=str(payload["mode"]),
            n_starts=int(payload.get("n_starts", 0)),
        )


@dataclass(frozen=True, eq=False)
class MSESpectrum:
    """All MSE solutions found by extremal and branch-following searches.

    ``values`` are the distinct converged MSEvalues (merged within the
    dedup tolerance), ascending.
    """

    solutions: tuple[MSESolution, ...]
    values: tuple[float, ...]

    @property
    def f_sup(self) -> float:
        return self.values[-1]

    @property
    def f_inf(self) -> float:
        return self.values[0]

    def to_dict(self) -> dict:
        return {
            "values": [float(v) for v in self.values],
            "f_sup": float(self.f_sup),
            "f_inf": float(self.f_inf),
            "solutions": [s.to_dict() for s in self.solutions],
        }
