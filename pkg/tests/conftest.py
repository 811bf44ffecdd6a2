"""Independent dense oracles shared by the test modules.

Nothing here calls into the package's own dense helpers, so the tests
compare the bit-packed code against plain Kronecker products.
"""

from __future__ import annotations

import sys
from functools import reduce

import numpy as np
import pytest

from dfsft.codes import builtin_code

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
LETTER = {"I": I2, "X": X, "Y": Y, "Z": Z}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
QGATE = np.array([[1, -1j], [1, 1j]], dtype=complex) / np.sqrt(2)

CORPUS = ("q4", "q2x", "footnote", "steane", "fivequbit", "fig4")


def dense(label: str, phase: int = 0) -> np.ndarray:
    """Matrix of ``i**phase`` times the letter string, qubit 0 leftmost."""
    return (1j**phase) * reduce(np.kron, (LETTER[c] for c in label))


def dense_op(p) -> np.ndarray:
    return dense(p.letters, p.phase)


def dense_sum(s) -> np.ndarray:
    return sum(c * dense_op(op) for c, op in s.terms)


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """``exp(i t h)`` by diagonalisation."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * t * w)) @ v.conj().T


def one_qubit_on(mat: np.ndarray, qubit: int, n: int) -> np.ndarray:
    return reduce(np.kron, [mat if k == qubit else I2 for k in range(n)])


def cnot_matrix(control: int, target: int, n: int) -> np.ndarray:
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        bits = [(j >> (n - 1 - k)) & 1 for k in range(n)]
        if bits[control]:
            bits[target] ^= 1
        i = sum(b << (n - 1 - k) for k, b in enumerate(bits))
        out[i, j] = 1
    return out


def projector_oracle(labels) -> np.ndarray:
    """Product of ``(I + g)/2`` over the generator labels."""
    dim = 1 << len(labels[0])
    proj = np.eye(dim, dtype=complex)
    for g in labels:
        proj = proj @ (np.eye(dim) + dense(g)) / 2
    return proj


def subspace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Spectral distance between orthogonal projectors onto two column spans."""
    qa, _ = np.linalg.qr(a)
    qb, _ = np.linalg.qr(b)
    return float(np.linalg.norm(qa @ qa.conj().T - qb @ qb.conj().T, ord=2))


@pytest.fixture(params=CORPUS)
def corpus_code(request):
    return builtin_code(request.param)


@pytest.fixture
def q2x():
    return builtin_code("q2x")


@pytest.fixture
def q4():
    return builtin_code("q4")


@pytest.fixture
def steane():
    return builtin_code("steane")


@pytest.fixture
def fivequbit():
    return builtin_code("fivequbit")


def dense_gate(gate, n: int) -> np.ndarray:
    """Unitary of one gate built from Kronecker products and eigendecompositions."""
    from dfsft.circuit import Clifford1q, Cnot, ControlledPauli, ParallelPauliExp, PauliExp

    if isinstance(gate, PauliExp):
        return expm_hermitian(dense_op(gate.generator), gate.angle.value)
    if isinstance(gate, ParallelPauliExp):
        total = sum(dense_op(g) for g in gate.generators)
        return expm_hermitian(total, gate.angle.value)
    if isinstance(gate, Cnot):
        return cnot_matrix(gate.control, gate.target, n)
    if isinstance(gate, Clifford1q):
        mat = {"R": HADAMARD, "Q": QGATE, "Qdg": QGATE.conj().T}[gate.tag]
        return one_qubit_on(mat, gate.qubit, n)
    if isinstance(gate, ControlledPauli):
        p0 = np.diag([1, 0]).astype(complex)
        p1 = np.diag([0, 1]).astype(complex)
        return one_qubit_on(p0, gate.control, n) + one_qubit_on(p1, gate.control, n) @ dense_op(gate.target)
    raise TypeError(gate)


def dense_circuit(circuit) -> np.ndarray:
    u = np.eye(1 << circuit.n_qubits, dtype=complex)
    for g in circuit.gates:
        u = dense_gate(g, circuit.n_qubits) @ u
    return u


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number].splitlines()[0])
