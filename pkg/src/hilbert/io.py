"""JSON interchange for operators, states and product vectors.

Every matrix or vector is written as ``{"dims": [...], "re": [...], "im": [...]}``
with row-major nested lists.  Serialization goes through ``dumps`` so that
equal inputs always give byte-identical text (fixed key order, Python float
repr).
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Optional

import numpy as np

from src.errors import InvalidArgument
from src.hilbert.operators import DensityMatrix, HermitianOperator, make_density, make_operator
from src.hilbert.product import ProductVector
from src.hilbert.space import CompositeSpace
from src.partitions.partition import Partition, parse_partition
from src.states.benchmarks import PureState, projector

logger = logging.getLogger(__name__)


def array_to_dict(dims: tuple[int, ...], arr: np.ndarray) -> dict:
    a = np.asarray(arr, dtype=complex)
    return {"dims": [int(d) for d in dims], "re": a.real.tolist(), "im": a.imag.tolist()}


def _array_from_dict(payload: dict) -> tuple[CompositeSpace, np.ndarray]:
    try:
        space = CompositeSpace(tuple(payload["dims"]))
        re = np.asarray(payload["re"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise InvalidArgument(f"Malformed array payload: {exc}") from None
    im = np.asarray(payload.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape:
        raise InvalidArgument(f"'re' shape {re.shape} differs from 'im' shape {im.shape}")
    return space, re + 1j * im


def operator_to_dict(op: HermitianOperator) -> dict:
    return array_to_dict(op.space.dims, op.matrix)


def operator_from_dict(payload: dict) -> HermitianOperator:
    space, m = _array_from_dict(payload)
    return make_operator(space, m)


def state_to_dict(state: PureState | DensityMatrix) -> dict:
    if isinstance(state, PureState):
        return array_to_dict(state.space.dims, state.amplitudes)
    return array_to_dict(state.space.dims, state.matrix)


def pure_state_from_dict(payload: dict) -> PureState:
    space, arr = _array_from_dict(payload)
    if arr.ndim != 1:
        raise InvalidArgument(f"Expected a state vector, got an array of shape {arr.shape}")
    return PureState(space, arr)


def density_from_dict(payload: dict) -> DensityMatrix:
    """Vectors become their projector; matrices are validated as density matrices."""
    space, arr = _array_from_dict(payload)
    if arr.ndim == 1:
        return projector(PureState(space, arr))
    return make_density(space, arr)


def product_vector_to_dict(v: ProductVector) -> dict:
    return {
        "partition": v.partition.to_text(),
        "factors": [{"re": f.real.tolist(), "im": f.imag.tolist()} for f in v.factors],
    }


def product_vector_from_dict(payload: dict, n: int) -> ProductVector:
    partition: Partition = parse_partition(payload["partition"], n)
    factors = tuple(
        np.asarray(f["re"], dtype=float) + 1j * np.asarray(f["im"], dtype=float)
        for f in payload["factors"]
    )
    return ProductVector(partition, factors)


def dumps(obj: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(obj, indent=indent, allow_nan=True)


def read_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{p} is not valid JSON: {exc}") from None
    except OSError as exc:
        raise InvalidArgument(f"Cannot read {p}: {exc}") from None


def write_json(obj: Any, path: str | Path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(dumps(obj) + "\n")
    logger.info("Wrote %s", p)


def load_operator(path: str | Path) -> HermitianOperator:
    return operator_from_dict(read_json(path))


def load_density(path: str | Path) -> DensityMatrix:
    return density_from_dict(read_json(path))


def load_pure_state(path: str | Path) -> PureState:
    return pure_state_from_dict(read_json(path))
