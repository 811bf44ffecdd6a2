"""Statevector simulator against dense matrices and diagonalisation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from dfsft.circuit import Angle, Circuit, Clifford1q, Cnot, ControlledPauli, MeasureZ, ParallelPauliExp, PauliExp
from dfsft.codes import builtin_code
from dfsft.dense import DenseCapError, apply_pauli
from dfsft.pauli import commutes, multiply, pauli_from_string
from dfsft.stabilizer import logical_basis, tensor_codes
from dfsft.statevec import (
    NormDriftError,
    StateVector,
    apply_gate,
    cnot_frame_distance,
    encoded_action,
    fidelity,
    ideal_cnot,
    logical_state,
    operator_distance,
    pauli_expectation,
    random_code_state,
    run_circuit,
    trotter_error,
)
from dfsft.synthesis import synth_css_cnot, synth_general_cnot, synth_logical_rotation

from conftest import cnot_matrix, dense_circuit, dense_gate, dense_op, expm_hermitian

P = pauli_from_string


def random_state(n, rng):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(n, v / np.linalg.norm(v))


def random_label(n, rng):
    return "".join(rng.choice(list("IXYZ"), n))


class TestGates:
    def test_quarter_x_on_zero(self):
        out = apply_gate(StateVector.zero(1), PauliExp(P("X"), Angle.quarter(1)))
        assert np.allclose(out.amplitudes, np.array([1, 1j]) / math.sqrt(2))

    @pytest.mark.parametrize("seed", range(25))
    def test_random_pauli_exp(self, seed):
        rng = np.random.default_rng(seed)
        label = random_label(3, rng)
        if set(label) == {"I"}:
            label = "XYZ"
        theta = float(rng.uniform(-math.pi, math.pi))
        state = random_state(3, rng)
        out = apply_gate(state, PauliExp(P(label), theta))
        expect = expm_hermitian(dense_op(P(label)), theta) @ state.amplitudes
        assert np.allclose(out.amplitudes, expect, atol=1e-12)

    @pytest.mark.parametrize(
        "gate",
        [
            ParallelPauliExp((P("XZII"), P("XIZI"), P("IIZY")), 0.3),
            Cnot(3, 1),
            Cnot(0, 2),
            Clifford1q("R", 2),
            Clifford1q("Q", 0),
            Clifford1q("Qdg", 3),
            ControlledPauli(1, P("XIYZ")),
        ],
    )
    def test_gate_matches_dense(self, gate):
        rng = np.random.default_rng(11)
        state = random_state(4, rng)
        out = apply_gate(state, gate)
        assert np.allclose(out.amplitudes, dense_gate(gate, 4) @ state.amplitudes, atol=1e-12)

    def test_apply_pauli_matches_dense(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(1, 7))
            p = P(random_label(n, rng), int(rng.integers(4)))
            v = random_state(n, rng).amplitudes
            assert np.allclose(apply_pauli(p, v), dense_op(p) @ v)

    def test_cnot_permutation(self):
        rng = np.random.default_rng(2)
        state = random_state(3, rng)
        out = apply_gate(state, Cnot(1, 2))
        assert np.allclose(out.amplitudes, cnot_matrix(1, 2, 3) @ state.amplitudes)

    def test_norm_drift_detected(self):
        bad = StateVector(1, np.array([2.0, 0.0], dtype=complex))
        with pytest.raises(NormDriftError):
            apply_gate(bad, Clifford1q("R", 0))

    def test_run_circuit_width_checked(self):
        with pytest.raises(ValueError):
            run_circuit(StateVector.zero(2), Circuit(3))

    def test_dense_cap(self):
        with pytest.raises(DenseCapError):
            StateVector.zero(6, cap=5)


class TestMeasurement:
    def test_needs_rng(self):
        with pytest.raises(ValueError):
            apply_gate(StateVector.zero(1), MeasureZ((0,)))

    def test_parity_and_collapse(self):
        # (|00> + |11>)/sqrt2 always has even parity
        bell = StateVector(2, np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2))
        rng = np.random.default_rng(0)
        outcomes = set()
        for _ in range(50):
            out = apply_gate(bell, MeasureZ((0, 1)), rng)
            assert out.measurements == (0,)
            outcomes.add(int(np.argmax(np.abs(out.amplitudes))))
        assert outcomes == {0, 3}

    def test_statistics(self):
        state = apply_gate(StateVector.zero(1), PauliExp(P("X"), 0.4))
        rng = np.random.default_rng(1)
        ones = sum(apply_gate(state, MeasureZ((0,)), rng).measurements[0] for _ in range(4000))
        assert abs(ones / 4000 - math.sin(0.4) ** 2) < 0.03


class TestEncodedAction:
    @pytest.mark.parametrize("mode", ["series", "parallel"])
    def test_q2x_z_rotation(self, q2x, mode):
        theta = 0.7
        act = encoded_action(synth_logical_rotation(q2x, "Z", 0, theta, mode), q2x)
        assert act.leakage < 1e-10
        assert act.is_unitary()
        assert np.allclose(act.matrix, np.diag([np.exp(1j * theta), np.exp(-1j * theta)]), atol=1e-12)

    def test_matches_dense_projection(self, steane):
        circuit = synth_logical_rotation(steane, "X", 0, 0.2)
        v = logical_basis(steane).matrix()
        expect = v.conj().T @ dense_circuit(circuit) @ v
        assert np.allclose(encoded_action(circuit, steane).matrix, expect, atol=1e-12)

    def test_leakage_of_wrong_gate(self, q2x):
        act = encoded_action(Circuit(4, (PauliExp(P("ZIII"), 0.3),)), q2x)
        assert act.leakage > 0.1

    @pytest.mark.parametrize("name", ["q4", "q2x", "footnote", "steane", "fivequbit", "fig4"])
    def test_series_equals_parallel(self, name):
        code = builtin_code(name)
        for axis in "ZX":
            a = encoded_action(synth_logical_rotation(code, axis, 0, 1.1, "series"), code)
            b = encoded_action(synth_logical_rotation(code, axis, 0, 1.1, "parallel"), code)
            assert np.allclose(a.matrix, b.matrix, atol=1e-10)

    def test_q4_bitwise_cnot(self, q4):
        pair = tensor_codes(q4, q4)
        act = encoded_action(synth_css_cnot(q4, q4), pair)
        # encoded bits (a0, a1, b0, b1), a0 most significant
        expect = np.zeros((16, 16))
        for j in range(16):
            a0, a1, b0, b1 = (j >> 3) & 1, (j >> 2) & 1, (j >> 1) & 1, j & 1
            i = (a0 << 3) | (a1 << 2) | ((b0 ^ a0) << 1) | (b1 ^ a1)
            expect[i, j] = 1
        assert act.leakage < 1e-12
        assert operator_distance(act.matrix, expect) < 1e-9

    def test_q2x_bitwise_cnot(self, q2x):
        act = encoded_action(synth_css_cnot(q2x, q2x), tensor_codes(q2x, q2x))
        assert operator_distance(act.matrix, ideal_cnot()) < 1e-9


class TestTrotterCnot:
    def test_factors_commute(self, fivequbit):
        pair = tensor_codes(fivequbit, fivequbit)
        ix = pair.standard_x[1]
        zx = multiply(pair.standard_z[0], pair.standard_x[1])
        assert commutes(ix, zx)

    @pytest.mark.parametrize("n", [1, 2, 8, 16])
    def test_fivequbit_exact_for_every_step_count(self, fivequbit, n):
        # the two factors commute, so splitting them costs nothing
        assert trotter_error(fivequbit, fivequbit, n) < 1e-12

    def test_two_half_steps_no_worse_than_one(self, q2x):
        assert trotter_error(q2x, q2x, 2) <= trotter_error(q2x, q2x, 1) + 1e-12

    def test_frame_phase(self, q2x):
        act = encoded_action(synth_general_cnot(q2x, q2x, trotter_steps=1), tensor_codes(q2x, q2x))
        dist, phi = cnot_frame_distance(act.matrix)
        assert dist < 1e-12
        assert math.isclose(abs(phi), math.pi / 2, abs_tol=1e-9)

    def test_frame_distance_oracle(self):
        frame = np.diag([1, 1, np.exp(0.3j), np.exp(0.3j)])
        dist, phi = cnot_frame_distance(np.exp(0.9j) * frame @ ideal_cnot())
        assert dist < 1e-12 and math.isclose(phi, 0.3)
        assert cnot_frame_distance(np.eye(4))[0] > 0.5


class TestHelpers:
    def test_operator_distance_ignores_global_phase(self):
        u = expm_hermitian(dense_op(P("XZ")), 0.3)
        assert operator_distance(1j * u, u) < 1e-12
        assert operator_distance(u, np.eye(4)) > 0.1

    def test_fidelity_and_tensor(self):
        a = StateVector.from_amplitudes([1, 1])
        b = StateVector.from_amplitudes([1, -1])
        assert math.isclose(fidelity(a, b), 0, abs_tol=1e-15)
        assert a.tensor(b).n_qubits == 2

    def test_random_code_state_in_codespace(self, steane):
        state = random_code_state(logical_basis(steane), np.random.default_rng(0))
        for g in steane.generators:
            assert math.isclose(pauli_expectation(state, g).real, 1, abs_tol=1e-10)

    def test_logical_state(self, q4):
        s = logical_state(q4, [1, 0, 0, 0])
        expect = np.zeros(16, dtype=complex)
        expect[0] = expect[15] = 1 / math.sqrt(2)
        assert math.isclose(abs(np.vdot(expect, s.amplitudes)), 1, abs_tol=1e-12)
