"""Benchmark pure states (GHZ, W) and noisy mixtures built from them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.errors import DimensionMismatch, InvalidArgument
from src.hilbert.operators import DensityMatrix, make_density
from src.hilbert.product import normalize
from src.hilbert.space import CompositeSpace


@dataclass(frozen=True, eq=False)
class PureState:
    space: CompositeSpace
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (self.space.total_dim,):
            raise DimensionMismatch(
                f"{amps.size} amplitudes for dims {list(self.space.dims)}"
            )
        amps = normalize(amps)
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)


def projector(psi: PureState) -> DensityMatrix:
    """|psi><psi| as a density matrix."""
    return make_density(psi.space, np.outer(psi.amplitudes, psi.amplitudes.conj()))


def ghz(n: int, d: int = 2) -> PureState:
    """(1/sqrt(d)) sum_k |k>^{(x)n}."""
    if n < 2 or d < 2:
        raise InvalidArgument(f"ghz needs n >= 2 and d >= 2, got n={n}, d={d}")
    space = CompositeSpace((d,) * n)
    amps = np.zeros(space.total_dim, dtype=complex)
    stride = (d**n - 1) // (d - 1)  # index of |1...1>
    amps[[k * stride for k in range(d)]] = 1.0
    return PureState(space, amps)


def w_state(n: int) -> PureState:
    """(1/sqrt(n)) sum_j |0..1_j..0> on n qubits."""
    if n < 2:
        raise InvalidArgument(f"w_state needs n >= 2, got {n}")
    space = CompositeSpace((2,) * n)
    amps = np.zeros(space.total_dim, dtype=complex)
    amps[[1 << (n - 1 - j) for j in range(n)]] = 1.0
    return PureState(space, amps)


def werner_mix(psi: PureState, p: float) -> DensityMatrix:
    """p |psi><psi| + (1 - p) 1/D."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InvalidArgument(f"Mixing weight p must lie in [0, 1], got {p}")
    d = psi.space.total_dim
    rho = p * np.outer(psi.amplitudes, psi.amplitudes.conj()) + (1.0 - p) * np.eye(d) / d
    return make_density(psi.space, rho)
