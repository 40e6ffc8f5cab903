"""Tests for witness construction, both criteria and noisy-state sweeps."""

import numpy as np
import pandas as pd
import pytest

from src.errors import DimensionMismatch, InvalidArgument
from src.hilbert.operators import (
    identity,
    make_density,
    make_operator,
    maximally_mixed,
    scale_shift,
    tensor_product,
)
from src.hilbert.space import CompositeSpace
from src.partitions.partition import finest
from src.solver.config import SolverConfig
from src.states.benchmarks import PureState, ghz, projector, w_state, werner_mix
from src.states.sampling import random_hermitian, random_product_batch, random_separable_density
from src.witness.sweep import (
    SCAN_COLUMNS,
    parse_p_grid,
    scan_to_json_lines,
    werner_scan,
    werner_threshold,
)
from src.witness.witness import (
    Witness,
    build_lower_witness,
    build_witness,
    criterion,
    evaluate_many,
    geometric_entanglement,
    separable_bounds,
    witness_expectation,
)

QUBIT = CompositeSpace((2,))
TWO_QUBITS = CompositeSpace((2, 2))
THREE_QUBITS = CompositeSpace((2, 2, 2))
SZ = make_operator(QUBIT, [[1, 0], [0, -1]])


def _projector_op(psi: PureState):
    return make_operator(psi.space, np.outer(psi.amplitudes, psi.amplitudes.conj()))


@pytest.fixture
def cfg():
    return SolverConfig()


@pytest.fixture
def ghz3_witness(cfg):
    return build_witness(_projector_op(ghz(3)), finest(3), cfg)


@pytest.fixture
def singlet():
    return projector(PureState(TWO_QUBITS, np.array([0, 1, -1, 0])))


class TestBuildWitness:
    def test_identity_gives_zero(self, cfg):
        w = build_witness(identity(TWO_QUBITS), finest(2), cfg)
        assert w.f_sup == pytest.approx(1.0)
        np.testing.assert_allclose(w.operator.matrix, np.zeros((4, 4)), atol=1e-12)

    def test_ghz3(self, ghz3_witness):
        expected = 0.5 * np.eye(8) - _projector_op(ghz(3)).matrix
        np.testing.assert_allclose(ghz3_witness.operator.matrix, expected, atol=1e-6)
        assert ghz3_witness.solver_report is not None
        assert ghz3_witness.solver_report.n_converged >= 1

    def test_zz(self, cfg):
        w = build_witness(tensor_product([SZ, SZ]), finest(2), cfg)
        np.testing.assert_allclose(w.operator.matrix, np.diag([0, 2, 2, 0]), atol=1e-12)

    def test_operator_matches_source(self, ghz3_witness):
        rebuilt = ghz3_witness.f_sup * np.eye(8) - ghz3_witness.source.matrix
        np.testing.assert_allclose(ghz3_witness.operator.matrix, rebuilt, atol=1e-12)

    def test_shift_leaves_witness_unchanged(self, cfg):
        L = random_hermitian(THREE_QUBITS, 31)
        w = build_witness(L, finest(3), cfg)
        shifted = build_witness(scale_shift(L, 1.0, 0.75), finest(3), cfg)
        np.testing.assert_allclose(shifted.operator.matrix, w.operator.matrix, atol=1e-10)

    def test_lower_witness(self, cfg):
        """The lower witness of -P_GHZ is the ordinary GHZ witness."""
        lower = build_lower_witness(-_projector_op(ghz(3)), finest(3), cfg)
        expected = 0.5 * np.eye(8) - _projector_op(ghz(3)).matrix
        np.testing.assert_allclose(lower.operator.matrix, expected, atol=1e-6)
        assert lower.side == "inf"

    def test_bundle_roundtrip(self, ghz3_witness):
        payload = ghz3_witness.to_dict()
        assert list(payload) == ["operator", "partition", "f_sup", "side", "solver_report"]
        back = Witness.from_dict(payload)
        np.testing.assert_array_equal(back.operator.matrix, ghz3_witness.operator.matrix)
        np.testing.assert_allclose(back.source.matrix, ghz3_witness.source.matrix, atol=1e-12)
        assert back.partition == finest(3)
        assert back.f_sup == ghz3_witness.f_sup
        assert back.solver_report.f_value == ghz3_witness.solver_report.f_value
        assert len(back.solver_report.solutions) == len(ghz3_witness.solver_report.solutions)


class TestWitnessExpectation:
    def test_ghz_detected(self, ghz3_witness):
        verdict = witness_expectation(ghz3_witness, projector(ghz(3)))
        assert verdict.value == pytest.approx(-0.5, abs=1e-9)
        assert verdict.detected
        assert verdict.criterion_side == "sup"

    def test_maximally_mixed(self, ghz3_witness):
        verdict = witness_expectation(ghz3_witness, maximally_mixed(THREE_QUBITS))
        assert verdict.value == pytest.approx(0.375, abs=1e-9)
        assert not verdict.detected

    def test_boundary_product_state(self, ghz3_witness):
        rho = make_density(THREE_QUBITS, np.diag([1.0] + [0.0] * 7))
        verdict = witness_expectation(ghz3_witness, rho)
        assert verdict.value == pytest.approx(0.0, abs=1e-9)
        assert not verdict.detected

    def test_dimension_mismatch(self, ghz3_witness):
        with pytest.raises(DimensionMismatch):
            witness_expectation(ghz3_witness, maximally_mixed(TWO_QUBITS))

    def test_evaluate_many_keeps_order(self, ghz3_witness):
        rhos = [werner_mix(ghz(3), p) for p in (0.0, 0.5, 1.0)]
        verdicts = evaluate_many(ghz3_witness, rhos, workers=3)
        assert [v.value for v in verdicts] == [witness_expectation(ghz3_witness, r).value for r in rhos]

    def test_verdict_json(self, ghz3_witness):
        payload = witness_expectation(ghz3_witness, projector(ghz(3))).to_dict()
        assert set(payload) == {"value", "detected", "criterion_side"}


class TestSeparableNonNegativity:
    def test_random_witnesses_on_product_states(self, cfg):
        for seed in range(10):
            L = random_hermitian(THREE_QUBITS, 700 + seed)
            w = build_witness(L, finest(3), cfg)
            states = random_product_batch(THREE_QUBITS, finest(3), 10_000, 800 + seed)
            values = np.real(np.einsum("ni,ij,nj->n", states.conj(), w.operator.matrix, states))
            assert values.min() >= -1e-8

    def test_separable_mixture_not_detected(self, cfg):
        L = random_hermitian(THREE_QUBITS, 41)
        bounds = separable_bounds(L, finest(3), cfg)
        for seed in range(5):
            rho = random_separable_density(THREE_QUBITS, finest(3), 50, seed)
            assert not criterion(L, rho, finest(3), cfg, bounds=bounds).detected


class TestCriterion:
    def test_ghz_detected(self, cfg):
        L = _projector_op(ghz(3))
        verdict = criterion(L, projector(ghz(3)), finest(3), cfg)
        assert verdict.expectation == pytest.approx(1.0)
        assert verdict.f_sup == pytest.approx(0.5, abs=1e-6)
        assert verdict.value == pytest.approx(0.5, abs=1e-6)
        assert verdict.detected
        assert verdict.criterion_side == "sup"

    def test_singlet_not_detected_by_zz(self, cfg, singlet):
        verdict = criterion(tensor_product([SZ, SZ]), singlet, finest(2), cfg)
        assert verdict.expectation == pytest.approx(-1.0)
        assert verdict.f_inf == pytest.approx(-1.0)
        assert verdict.value == pytest.approx(0.0, abs=1e-10)
        assert not verdict.detected

    def test_inf_side(self, cfg):
        """-P_GHZ is detected on the lower side by the GHZ state."""
        verdict = criterion(-_projector_op(ghz(3)), projector(ghz(3)), finest(3), cfg)
        assert verdict.detected
        assert verdict.criterion_side == "inf"

    def test_consistent_with_witness(self, cfg, ghz3_witness):
        L = _projector_op(ghz(3))
        bounds = separable_bounds(L, finest(3), cfg)
        for p in np.linspace(0.0, 1.0, 11):
            rho = werner_mix(ghz(3), p)
            w = witness_expectation(ghz3_witness, rho)
            c = criterion(L, rho, finest(3), cfg, bounds=bounds)
            assert w.detected == (c.detected and c.criterion_side == "sup")
            if c.criterion_side == "sup":
                assert c.value == pytest.approx(-w.value, abs=1e-9)

    def test_dimension_mismatch(self, cfg):
        with pytest.raises(DimensionMismatch):
            criterion(identity(TWO_QUBITS), maximally_mixed(THREE_QUBITS), finest(2), cfg)


class TestWernerSweep:
    def test_threshold_closed_form(self, ghz3_witness):
        assert werner_threshold(ghz3_witness, ghz(3)) == pytest.approx(3 / 7, abs=1e-6)

    def test_threshold_none_when_undetected(self, ghz3_witness):
        product = PureState(THREE_QUBITS, np.eye(8)[0])
        assert werner_threshold(ghz3_witness, product) is None

    def test_threshold_none_for_invalid_witness(self):
        """A witness negative on the maximally mixed state has no crossing."""
        bad = Witness(
            operator=scale_shift(identity(THREE_QUBITS), -1.0),
            partition=finest(3),
            f_sup=0.0,
            source=identity(THREE_QUBITS),
        )
        assert werner_threshold(bad, ghz(3)) is None

    def test_value_at_threshold(self, ghz3_witness):
        verdict = witness_expectation(ghz3_witness, werner_mix(ghz(3), 3 / 7))
        assert verdict.value == pytest.approx(0.0, abs=1e-9)
        assert not verdict.detected

    def test_scan_flips_at_three_sevenths(self, ghz3_witness):
        p = np.linspace(0.0, 1.0, 101)
        df = werner_scan(ghz3_witness, ghz(3), p)
        assert list(df.columns) == SCAN_COLUMNS
        np.testing.assert_allclose(df["value"], 3 / 8 - 7 * p / 8, atol=1e-9)
        assert (df["detected"] == (df["p"] > 3 / 7)).all()

    def test_json_lines(self, ghz3_witness):
        df = werner_scan(ghz3_witness, ghz(3), [0.0, 1.0])
        lines = scan_to_json_lines(df).splitlines()
        assert len(lines) == 2
        assert '"detected":true' in lines[1]
        assert scan_to_json_lines(pd.DataFrame(columns=SCAN_COLUMNS)) == ""

    def test_scan_dims_checked(self, ghz3_witness):
        with pytest.raises(DimensionMismatch):
            werner_scan(ghz3_witness, ghz(2), [0.5])

    def test_parse_p_grid(self):
        np.testing.assert_allclose(parse_p_grid("0:1:5"), [0, 0.25, 0.5, 0.75, 1])
        for bad in ("0:1", "0:2:5", "a:b:c", "0:1:0"):
            with pytest.raises(InvalidArgument):
                parse_p_grid(bad)


class TestGeometricEntanglement:
    def test_ghz(self, cfg):
        assert geometric_entanglement(ghz(3), finest(3), cfg) == pytest.approx(0.5, abs=1e-6)

    def test_w(self, cfg):
        assert geometric_entanglement(w_state(3), finest(3), cfg) == pytest.approx(5 / 9, abs=1e-5)

    def test_product_state(self, cfg):
        psi = PureState(THREE_QUBITS, np.eye(8)[5])
        assert geometric_entanglement(psi, finest(3), cfg) == pytest.approx(0.0, abs=1e-10)
