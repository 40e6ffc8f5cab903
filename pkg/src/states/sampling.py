"""Seeded random sampling of product vectors, separable mixtures and unitaries.

Generator
---------
Every sampler draws from numpy's PCG64 bit generator.  Seeds are turned into a
``SeedSequence`` and split with ``SeedSequence.spawn``:

- ``random_product``: one child stream per factor (block j uses child j);
- ``random_product_batch``: one child stream per block, each drawing all n
  samples for that block;
- ``random_separable_density``: child 0 draws the Dirichlet weights, child 1
  the product states;
- multistart solvers spawn one child per start and pass it here.

Equal seeds therefore give bit-identical draws on every platform numpy
supports, independent of how many other draws happen elsewhere.
"""

from __future__ import annotations

from typing import Union

import numpy as np
from scipy import linalg

from src.errors import InvalidArgument
from src.hilbert.operators import DensityMatrix, HermitianOperator, make_density, make_operator
from src.hilbert.product import ProductVector
from src.hilbert.space import CompositeSpace
from src.partitions.partition import Partition

SeedLike = Union[int, np.random.SeedSequence]


def seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    seed = int(seed)
    if seed < 0:
        raise InvalidArgument(f"Seeds must be non-negative, got {seed}")
    return np.random.SeedSequence(seed)


def make_rng(seed: SeedLike) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed_sequence(seed)))


def spawn(seed: SeedLike, n: int) -> list[np.random.SeedSequence]:
    return seed_sequence(seed).spawn(n)


def haar_vectors(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """(n, dim) rows drawn from the unitarily invariant measure on the unit sphere."""
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    return haar_vectors(rng, 1, dim)[0]


def random_product(space: CompositeSpace, partition: Partition, seed: SeedLike) -> ProductVector:
    """Factor-wise Haar-random product vector, deterministic per seed."""
    bdims = partition.block_dims(space.dims)
    streams = spawn(seed, len(bdims))
    factors = tuple(haar_vector(make_rng(s), d) for s, d in zip(streams, bdims))
    return ProductVector(partition, factors)


def random_product_batch(
    space: CompositeSpace, partition: Partition, n: int, seed: SeedLike
) -> np.ndarray:
    """(n, D) full product states in the original subsystem order."""
    if n < 1:
        raise InvalidArgument(f"Need at least one sample, got {n}")
    bdims = partition.block_dims(space.dims)
    streams = spawn(seed, len(bdims))

    states = haar_vectors(make_rng(streams[0]), n, bdims[0])
    for s, d in zip(streams[1:], bdims[1:]):
        factor = haar_vectors(make_rng(s), n, d)
        states = (states[:, :, None] * factor[:, None, :]).reshape(n, -1)

    if partition.is_canonical:
        return states
    order = [i for block in partition.blocks for i in block]
    tensor = states.reshape([n] + [space.dims[i] for i in order])
    axes = [0] + [1 + int(a) for a in np.argsort(order)]
    return np.transpose(tensor, axes).reshape(n, -1)


def random_separable_density(
    space: CompositeSpace, partition: Partition, n_terms: int, seed: SeedLike
) -> DensityMatrix:
    """sum_k p_k |a_k><a_k| with Dirichlet(1, ..., 1) weights."""
    if n_terms < 1:
        raise InvalidArgument(f"n_terms must be >= 1, got {n_terms}")
    weight_stream, state_stream = spawn(seed, 2)
    weights = make_rng(weight_stream).dirichlet(np.ones(n_terms))
    states = random_product_batch(space, partition, n_terms, state_stream)
    rho = np.einsum("k,ki,kj->ij", weights, states, states.conj())
    return make_density(space, rho)


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unitary: QR of a Ginibre matrix with the R-diagonal phases removed."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_local_unitaries(
    space: CompositeSpace, partition: Partition, seed: SeedLike
) -> list[np.ndarray]:
    """One Haar unitary per block of ``partition``."""
    bdims = partition.block_dims(space.dims)
    return [haar_unitary(make_rng(s), d) for s, d in zip(spawn(seed, len(bdims)), bdims)]


def random_hermitian(space: CompositeSpace, seed: SeedLike) -> HermitianOperator:
    """GUE-like test operator (G + G^dagger) / 2 with complex Gaussian G."""
    rng = make_rng(seed)
    d = space.total_dim
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return make_operator(space, (g + g.conj().T) / 2.0)
