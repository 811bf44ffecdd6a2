"""Dense-vector action of Pauli operators, shared by the codespace and simulator code."""

from __future__ import annotations

from functools import reduce

import numpy as np

from .pauli import PauliOperator, PauliSum

__all__ = ["DEFAULT_DENSE_CAP", "DenseCapError", "check_dense_cap", "pauli_matrix", "pauli_sum_matrix", "apply_pauli"]

DEFAULT_DENSE_CAP = 14

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DenseCapError(ValueError):
    """A dense representation was requested above the qubit cap."""


def check_dense_cap(n_qubits: int, cap: int = DEFAULT_DENSE_CAP) -> None:
    if n_qubits > cap:
        raise DenseCapError(f"{n_qubits} qubits exceeds the dense cap of {cap}")


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    """Kronecker product of the letters times ``i**phase``; qubit 0 is the leftmost factor."""
    check_dense_cap(p.n_qubits, 12)
    mat = reduce(np.kron, (_SINGLE[ch] for ch in p.letters))
    return (1j**p.phase) * mat


def pauli_sum_matrix(s: PauliSum) -> np.ndarray:
    dim = 1 << s.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, op in s.terms:
        out += coeff * pauli_matrix(op)
    return out


def _popcount_parity(values: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(values) & 1).astype(np.int64)


def apply_pauli(p: PauliOperator, vec: np.ndarray) -> np.ndarray:
    """Return ``P @ vec`` without forming a matrix.

    ``P|j> = i**(phase + |x & z|) (-1)**|z & j| |j ^ x>``.
    """
    n = p.n_qubits
    if vec.shape[0] != 1 << n:
        raise ValueError("vector length does not match the operator")
    idx = np.arange(1 << n, dtype=np.int64)
    src = idx ^ p.x
    sign = 1 - 2 * _popcount_parity(src & p.z)
    unit = 1j ** ((p.phase + (p.x & p.z).bit_count()) % 4)
    if vec.ndim == 1:
        return unit * sign * vec[src]
    return unit * sign[:, None] * vec[src]
