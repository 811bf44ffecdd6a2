"""Dense statevector simulation for checking synthesized circuits numerically.

Basis index bit ``n - 1 - k`` is qubit ``k``, matching the Pauli masks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit, Clifford1q, Cnot, ControlledPauli, Gate, MeasureZ, ParallelPauliExp, PauliExp
from .dense import DEFAULT_DENSE_CAP, DenseCapError, apply_pauli, check_dense_cap
from .pauli import PauliOperator
from .stabilizer import CodeSpace, StabilizerCode, logical_basis

__all__ = [
    "NORM_TOL",
    "StateVector",
    "EncodedAction",
    "NormDriftError",
    "DenseCapError",
    "apply_gate",
    "run_circuit",
    "encoded_action",
    "operator_distance",
    "cnot_frame_distance",
    "ideal_cnot",
    "trotter_error",
    "fidelity",
]

NORM_TOL = 1e-10

_R = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_Q = np.array([[1, -1j], [1, 1j]], dtype=complex) / math.sqrt(2)
_ONE_QUBIT = {"R": _R, "Q": _Q, "Qdg": _Q.conj().T}


class NormDriftError(RuntimeError):
    """A gate changed the norm of the state: a bug, never a physics result."""


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray
    measurements: tuple[int, ...] = ()

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError("amplitude vector has the wrong length")

    @classmethod
    def zero(cls, n_qubits: int, cap: int = DEFAULT_DENSE_CAP) -> StateVector:
        check_dense_cap(n_qubits, cap)
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def from_amplitudes(cls, amps, cap: int = DEFAULT_DENSE_CAP) -> StateVector:
        amps = np.asarray(amps, dtype=complex)
        n = int(round(math.log2(amps.shape[0])))
        check_dense_cap(n, cap)
        return cls(n, amps / np.linalg.norm(amps))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self, other: StateVector) -> StateVector:
        return StateVector(self.n_qubits + other.n_qubits, np.kron(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class EncodedAction:
    """``matrix[a, b] = <a_L| U |b_L>``; ``leakage`` is the worst norm left outside the codespace."""

    matrix: np.ndarray
    leakage: float

    def is_unitary(self, tol: float = 1e-9) -> bool:
        m = self.matrix
        return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=tol))


def _one_qubit(vec: np.ndarray, n: int, qubit: int, mat: np.ndarray) -> np.ndarray:
    psi = vec.reshape(1 << qubit, 2, 1 << (n - 1 - qubit))
    return np.einsum("ab,ibj->iaj", mat, psi).reshape(-1)


def _measure_qubit(vec: np.ndarray, n: int, qubit: int, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    psi = vec.reshape(1 << qubit, 2, 1 << (n - 1 - qubit))
    p1 = float(np.sum(np.abs(psi[:, 1, :]) ** 2))
    outcome = int(rng.random() < p1)
    out = psi.copy()
    out[:, 1 - outcome, :] = 0
    norm = math.sqrt(p1 if outcome else 1 - p1)
    return outcome, (out / norm).reshape(-1)


def apply_gate(state: StateVector, gate: Gate, rng: Optional[np.random.Generator] = None) -> StateVector:
    """Exact action of one gate; a measurement appends its parity bit to ``measurements``.

    Raises:
        ValueError: a measurement without an RNG stream.
        NormDriftError: the norm moved by more than ``NORM_TOL``.
    """
    n = state.n_qubits
    v = state.amplitudes
    record = state.measurements
    if isinstance(gate, PauliExp):
        th = gate.angle.value
        out = math.cos(th) * v + 1j * math.sin(th) * apply_pauli(gate.generator, v)
    elif isinstance(gate, ParallelPauliExp):
        out = v
        th = gate.angle.value
        for g in gate.generators:
            out = math.cos(th) * out + 1j * math.sin(th) * apply_pauli(g, out)
    elif isinstance(gate, Cnot):
        idx = np.arange(1 << n, dtype=np.int64)
        cbit = 1 << (n - 1 - gate.control)
        tbit = 1 << (n - 1 - gate.target)
        out = v[np.where(idx & cbit, idx ^ tbit, idx)]
    elif isinstance(gate, Clifford1q):
        out = _one_qubit(v, n, gate.qubit, _ONE_QUBIT[gate.tag])
    elif isinstance(gate, ControlledPauli):
        idx = np.arange(1 << n, dtype=np.int64)
        on = (idx >> (n - 1 - gate.control)) & 1
        out = np.where(on.astype(bool), apply_pauli(gate.target, v), v)
    elif isinstance(gate, MeasureZ):
        if rng is None:
            raise ValueError("a measurement needs an RNG stream")
        out = v
        parity = 0
        for q in gate.qubits:
            bit, out = _measure_qubit(out, n, q, rng)
            parity ^= bit
        record = record + (parity,)
    else:
        raise TypeError(f"not a gate: {gate!r}")
    norm = np.linalg.norm(out)
    if abs(norm - 1) > NORM_TOL:
        raise NormDriftError(f"norm {norm!r} after {gate!r}")
    return StateVector(n, out, record)


def run_circuit(state: StateVector, circuit: Circuit, rng: Optional[np.random.Generator] = None) -> StateVector:
    if circuit.n_qubits != state.n_qubits:
        raise ValueError(f"circuit has {circuit.n_qubits} qubits, state has {state.n_qubits}")
    for gate in circuit.gates:
        state = apply_gate(state, gate, rng)
    return state


def fidelity(a: StateVector, b: StateVector) -> float:
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def encoded_action(
    circuit: Circuit, code: StabilizerCode, basis: Optional[CodeSpace] = None, cap: int = DEFAULT_DENSE_CAP
) -> EncodedAction:
    """Matrix of the circuit on the codespace, in the logical frame of ``logical_basis``."""
    check_dense_cap(code.n_qubits, cap)
    basis = basis or logical_basis(code, cap)
    vecs = basis.matrix()
    dim = vecs.shape[1]
    images = np.empty_like(vecs)
    for b in range(dim):
        out = run_circuit(StateVector(code.n_qubits, vecs[:, b].copy()), circuit)
        images[:, b] = out.amplitudes
    matrix = vecs.conj().T @ images
    residual = images - vecs @ matrix
    leakage = float(np.max(np.linalg.norm(residual, axis=0))) if dim else 0.0
    return EncodedAction(matrix, leakage)


def operator_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Spectral norm of ``a - e^{i phi} b`` with ``phi`` maximizing ``|tr(b^dagger a)|``."""
    overlap = np.trace(b.conj().T @ a)
    phase = overlap / abs(overlap) if abs(overlap) > 1e-15 else 1.0
    return float(np.linalg.norm(a - phase * b, ord=2))


def ideal_cnot() -> np.ndarray:
    return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def cnot_frame_distance(matrix: np.ndarray) -> tuple[float, float]:
    """Distance to CNOT allowing a global phase and ``diag(1, e^{i phi})`` on the control.

    Returns ``(distance, phi)``.  ``phi`` is read off from ``M CNOT^dagger``
    as the relative phase of its two control blocks.
    """
    w = matrix @ ideal_cnot().conj().T
    top = np.trace(w[:2, :2])
    bottom = np.trace(w[2:, 2:])
    phi = float(np.angle(bottom / top)) if abs(top) > 1e-15 and abs(bottom) > 1e-15 else 0.0
    frame = np.diag([1, 1, np.exp(1j * phi), np.exp(1j * phi)])
    return operator_distance(matrix, frame @ ideal_cnot()), phi


def trotter_error(code_a: StabilizerCode, code_b: StabilizerCode, n: int) -> float:
    """Distance between the ``n``-step Trotter CNOT and the ideal encoded CNOT (up to frame)."""
    from .stabilizer import tensor_codes
    from .synthesis import synth_general_cnot

    pair = tensor_codes(code_a, code_b)
    act = encoded_action(synth_general_cnot(code_a, code_b, 0, 0, n), pair)
    return cnot_frame_distance(act.matrix)[0]


def pauli_expectation(state: StateVector, p: PauliOperator) -> complex:
    return complex(np.vdot(state.amplitudes, apply_pauli(p, state.amplitudes)))


def random_code_state(basis: CodeSpace, rng: np.random.Generator) -> StateVector:
    """Haar-like random superposition of the codewords."""
    coeffs = rng.normal(size=basis.dimension) + 1j * rng.normal(size=basis.dimension)
    vec = basis.matrix() @ coeffs
    return StateVector(basis.n_qubits, vec / np.linalg.norm(vec))


def logical_state(code: StabilizerCode, amplitudes: Sequence[complex], cap: int = DEFAULT_DENSE_CAP) -> StateVector:
    basis = logical_basis(code, cap)
    vec = basis.matrix() @ np.asarray(amplitudes, dtype=complex)
    return StateVector(code.n_qubits, vec / np.linalg.norm(vec))
