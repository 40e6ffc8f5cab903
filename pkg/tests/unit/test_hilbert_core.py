"""Tests for composite spaces, operators, product vectors and reduced operators."""

import numpy as np
import pytest

from src.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidArgument,
    InvalidPartition,
    NotHermitian,
    PartitionMismatch,
)
from src.hilbert.contraction import (
    canonicalize,
    expectation,
    local_unitary_conjugate,
    reduce_operator,
)
from src.hilbert.operators import (
    expectation_value,
    identity,
    make_density,
    make_operator,
    maximally_mixed,
    scale_shift,
    tensor_product,
)
from src.hilbert.product import ProductVector, basis_factor, fix_phase, make_product_vector
from src.hilbert.space import CompositeSpace
from src.partitions.partition import finest, parse_partition
from src.states.sampling import random_hermitian, random_local_unitaries, random_product

QUBIT = CompositeSpace((2,))
SX = make_operator(QUBIT, [[0, 1], [1, 0]])
SY = make_operator(QUBIT, [[0, -1j], [1j, 0]])
SZ = make_operator(QUBIT, [[1, 0], [0, -1]])
KET0 = basis_factor(2, 0)
KET1 = basis_factor(2, 1)


def _projector_op(space: CompositeSpace, amps):
    amps = np.asarray(amps, dtype=complex)
    amps = amps / np.linalg.norm(amps)
    return make_operator(space, np.outer(amps, amps.conj()))


@pytest.fixture
def two_qubits():
    return CompositeSpace((2, 2))


@pytest.fixture
def phi_plus(two_qubits):
    return _projector_op(two_qubits, [1, 0, 0, 1])


class TestCompositeSpace:
    def test_total_dim(self):
        space = CompositeSpace((2, 3, 4))
        assert space.n == 3
        assert space.total_dim == 24

    def test_rejects_small_dims(self):
        with pytest.raises(InvalidArgument):
            CompositeSpace((2, 1))
        with pytest.raises(InvalidArgument):
            CompositeSpace(())


class TestMakeOperator:
    def test_sigma_z_stored_directly(self):
        np.testing.assert_array_equal(SZ.matrix, np.diag([1, -1]))

    def test_identity(self, two_qubits):
        op = make_operator(two_qubits, np.eye(4))
        np.testing.assert_array_equal(op.matrix, np.eye(4))

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            make_operator(QUBIT, [[0, 1], [0, 0]])

    def test_gate_is_absolute_for_large_operators(self):
        """A 1e-6 asymmetry is rejected even next to entries of size 1000."""
        with pytest.raises(NotHermitian):
            make_operator(QUBIT, [[1000, 1e-6], [0, 1]])

    def test_small_deviation_is_symmetrized(self):
        op = make_operator(QUBIT, [[1, 1e-10], [0, -1]])
        assert np.allclose(op.matrix, op.matrix.conj().T, atol=0)
        assert op.matrix[0, 1] == pytest.approx(5e-11)

    def test_wrong_shape(self, two_qubits):
        with pytest.raises(DimensionMismatch):
            make_operator(two_qubits, np.eye(3))

    def test_non_finite(self):
        with pytest.raises(InvalidArgument):
            make_operator(QUBIT, [[np.nan, 0], [0, 1]])

    def test_stored_matrix_is_read_only(self):
        with pytest.raises(ValueError):
            SZ.matrix[0, 0] = 5.0


class TestTensorProduct:
    def test_zz(self):
        op = tensor_product([SZ, SZ])
        np.testing.assert_array_equal(op.matrix, np.diag([1, -1, -1, 1]))
        assert op.space.dims == (2, 2)

    def test_identity(self):
        op = tensor_product([identity(QUBIT), identity(QUBIT)])
        np.testing.assert_array_equal(op.matrix, np.eye(4))

    def test_xx_is_antidiagonal(self):
        op = tensor_product([SX, SX])
        np.testing.assert_array_equal(op.matrix, np.fliplr(np.eye(4)))

    def test_empty(self):
        with pytest.raises(InvalidArgument):
            tensor_product([])


class TestDensity:
    def test_trace_checked(self):
        with pytest.raises(InvalidArgument, match="trace"):
            make_density(QUBIT, np.eye(2))

    def test_psd_checked(self):
        with pytest.raises(InvalidArgument, match="negative eigenvalue"):
            make_density(QUBIT, np.diag([1.5, -0.5]))

    def test_maximally_mixed(self, two_qubits):
        rho = maximally_mixed(two_qubits)
        assert np.trace(rho.matrix).real == pytest.approx(1.0)
        assert expectation_value(identity(two_qubits), rho) == pytest.approx(1.0)

    def test_expectation_value_dims(self, two_qubits):
        with pytest.raises(DimensionMismatch):
            expectation_value(SZ, maximally_mixed(two_qubits))


class TestProductVector:
    def test_factors_normalized_and_phase_fixed(self):
        v = make_product_vector(finest(2), [[0, 2j], [1, 1]])
        np.testing.assert_allclose(v.factors[0], [0, 1])
        np.testing.assert_allclose(v.factors[1], [1 / np.sqrt(2), 1 / np.sqrt(2)])

    def test_fix_phase_first_largest_entry(self):
        out = fix_phase(np.array([-1j, 1.0]) / np.sqrt(2))
        assert out[0] == pytest.approx(1 / np.sqrt(2))
        assert out[1] == pytest.approx(1j / np.sqrt(2))

    def test_wrong_factor_count(self):
        with pytest.raises(PartitionMismatch):
            ProductVector(finest(3), (KET0, KET0))

    def test_zero_factor(self):
        with pytest.raises(InvalidArgument):
            make_product_vector(finest(2), [[0, 0], [1, 0]])

    def test_full_vector_non_canonical_order(self):
        """Block {1,3} holds |01>, block {2} holds |1> → |0 1 1> in original order."""
        p = parse_partition("1,3:2", 3)
        v = make_product_vector(p, [basis_factor(4, 1), KET1])
        psi = v.full_vector((2, 2, 2))
        assert np.argmax(np.abs(psi)) == 0b011

    def test_replace_factor_bounds(self):
        v = make_product_vector(finest(2), [KET0, KET0])
        with pytest.raises(IndexOutOfRange):
            v.replace_factor(2, KET1)


class TestReduceOperator:
    def test_identity_contracts_to_identity(self, two_qubits):
        v = make_product_vector(finest(2), [KET0, KET0])
        np.testing.assert_allclose(reduce_operator(identity(two_qubits), v, 0), np.eye(2))

    def test_product_operator_factorizes(self):
        v = make_product_vector(finest(2), [KET1, KET0])
        reduced = reduce_operator(tensor_product([SZ, SZ]), v, 0)
        np.testing.assert_allclose(reduced, np.diag([1, -1]))

    def test_phi_plus(self, phi_plus):
        """<., 0| Phi+ |., 0> = 1/2 |0><0| (checked against dense slicing)."""
        v = make_product_vector(finest(2), [KET1, KET0])
        reduced = reduce_operator(phi_plus, v, 0)
        np.testing.assert_allclose(reduced, np.diag([0.5, 0.0]), atol=1e-15)
        dense = phi_plus.matrix.reshape(2, 2, 2, 2)[:, 0, :, 0]
        np.testing.assert_allclose(reduced, dense, atol=1e-15)

    def test_product_of_random_factors(self):
        """L = A (x) B: reduced on block 1 is <b|B|b> A."""
        a = random_hermitian(QUBIT, 1)
        b = random_hermitian(CompositeSpace((3,)), 2)
        L = tensor_product([a, b])
        v = random_product(L.space, finest(2), 3)
        weight = np.vdot(v.factors[1], b.matrix @ v.factors[1]).real
        np.testing.assert_allclose(reduce_operator(L, v, 0), weight * a.matrix, atol=1e-12)

    def test_consistency_with_expectation(self):
        space = CompositeSpace((2, 3, 2))
        L = random_hermitian(space, 5)
        v = random_product(space, finest(3), 6)
        g = expectation(L, v)
        for j in range(3):
            reduced = reduce_operator(L, v, j)
            assert np.max(np.abs(reduced - reduced.conj().T)) <= 1e-12
            assert np.vdot(v.factors[j], reduced @ v.factors[j]).real == pytest.approx(g, abs=1e-10)

    def test_block_index_out_of_range(self, two_qubits):
        v = make_product_vector(finest(2), [KET0, KET0])
        with pytest.raises(IndexOutOfRange):
            reduce_operator(identity(two_qubits), v, 2)

    def test_non_canonical_partition(self):
        space = CompositeSpace((2, 2, 2))
        v = make_product_vector(parse_partition("1,3:2", 3), [basis_factor(4, 0), KET0])
        with pytest.raises(PartitionMismatch):
            reduce_operator(identity(space), v, 0)


class TestExpectation:
    def test_identity(self, two_qubits):
        v = random_product(two_qubits, finest(2), 0)
        assert expectation(identity(two_qubits), v) == pytest.approx(1.0)

    def test_zz_diagonal_readout(self):
        v = make_product_vector(finest(2), [KET0, KET1])
        assert expectation(tensor_product([SZ, SZ]), v) == pytest.approx(-1.0)

    def test_phi_plus_on_00(self, phi_plus):
        v = make_product_vector(finest(2), [KET0, KET0])
        assert expectation(phi_plus, v) == pytest.approx(0.5)

    def test_affine(self):
        space = CompositeSpace((2, 2, 2))
        L = random_hermitian(space, 9)
        v = random_product(space, finest(3), 10)
        shifted = scale_shift(L, 2.5, -0.75)
        assert expectation(shifted, v) == pytest.approx(2.5 * expectation(L, v) - 0.75, abs=1e-10)

    def test_partition_mismatch(self, two_qubits):
        v = make_product_vector(finest(3), [KET0, KET0, KET0])
        with pytest.raises(PartitionMismatch):
            expectation(identity(two_qubits), v)


class TestCanonicalize:
    def test_order_and_partition(self):
        space = CompositeSpace((2, 2, 2))
        L = random_hermitian(space, 3)
        _, part, record = canonicalize(L, parse_partition("1,3:2", 3))
        assert record.order == (0, 2, 1)
        assert part.blocks == ((0, 1), (2,))

    def test_identity_permutation(self):
        space = CompositeSpace((2, 2, 2))
        L = random_hermitian(space, 3)
        out, part, record = canonicalize(L, finest(3))
        assert record.is_identity
        assert out is L
        assert part == finest(3)

    def test_pauli_string(self):
        """X (x) Y (x) Z on {1,3}{2} → X (x) Z (x) Y on {1,2}{3}, spectrum kept."""
        L = tensor_product([SX, SY, SZ])
        out, part, _ = canonicalize(L, parse_partition("1,3:2", 3))
        expected = tensor_product([SX, SZ, SY])
        np.testing.assert_allclose(out.matrix, expected.matrix, atol=1e-15)
        np.testing.assert_allclose(out.spectrum(), L.spectrum(), atol=1e-10)
        assert part.to_text() == "1,2:3"

    def test_expectation_preserved(self):
        space = CompositeSpace((2, 3, 2))
        L = random_hermitian(space, 4)
        p = parse_partition("1,3:2", 3)
        v = random_product(space, p, 8)
        out, _, record = canonicalize(L, p)
        assert expectation(out, record.canonical_vector(v)) == pytest.approx(expectation(L, v), abs=1e-10)

    def test_matrix_round_trip(self):
        space = CompositeSpace((2, 3, 2))
        L = random_hermitian(space, 6)
        out, _, record = canonicalize(L, parse_partition("1,3:2", 3))
        assert out.space.dims == record.canonical_dims == (2, 2, 3)
        np.testing.assert_array_equal(record.to_original_matrix(out.matrix), L.matrix)

    def test_state_round_trip(self):
        space = CompositeSpace((2, 3, 2))
        _, _, record = canonicalize(random_hermitian(space, 6), parse_partition("1,3:2", 3))
        rng = np.random.default_rng(11)
        psi = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        np.testing.assert_array_equal(record.to_original_state(record.to_canonical_state(psi)), psi)

    def test_canonical_state_matches_canonical_vector(self):
        """Permuting the full product state equals building it on the canonical partition."""
        space = CompositeSpace((2, 3, 2))
        p = parse_partition("1,3:2", 3)
        v = random_product(space, p, 9)
        _, _, record = canonicalize(random_hermitian(space, 6), p)
        np.testing.assert_allclose(
            record.to_canonical_state(v.full_vector(space.dims)),
            record.canonical_vector(v).full_vector(record.canonical_dims),
            atol=1e-14,
        )

    def test_partition_size_mismatch(self):
        with pytest.raises(InvalidPartition):
            canonicalize(random_hermitian(CompositeSpace((2, 2)), 1), finest(3))


class TestLocalUnitaryConjugate:
    def test_spectrum_preserved(self):
        space = CompositeSpace((2, 2, 2))
        L = random_hermitian(space, 12)
        p = parse_partition("1,2:3", 3)
        us = random_local_unitaries(space, p, 13)
        out = local_unitary_conjugate(L, p, us)
        np.testing.assert_allclose(out.spectrum(), L.spectrum(), atol=1e-10)

    def test_wrong_count(self):
        space = CompositeSpace((2, 2))
        with pytest.raises(PartitionMismatch):
            local_unitary_conjugate(identity(space), finest(2), [np.eye(2)])
