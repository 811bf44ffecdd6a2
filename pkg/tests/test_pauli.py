"""Pauli algebra against dense Kronecker-product oracles."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfsft.pauli import (
    PauliOperator,
    PauliParseError,
    PauliSum,
    commutes,
    conjugate_by_clifford1q,
    conjugate_by_cnot,
    conjugate_by_quarter,
    conjugate_by_rotation,
    multiply,
    pauli_from_string,
)

from conftest import HADAMARD, LETTER, QGATE, cnot_matrix, dense, dense_op, dense_sum, expm_hermitian, one_qubit_on


def all_labels(n):
    return ["".join(t) for t in itertools.product("IXYZ", repeat=n)]


def _letter_product(a: str, b: str) -> tuple[str, complex]:
    prod = LETTER[a] @ LETTER[b]
    for c in "IXYZ":
        s = np.trace(LETTER[c].conj().T @ prod) / 2
        if abs(abs(s) - 1) < 1e-12:
            return c, complex(s)
    raise AssertionError("not a Pauli")


_TABLE = {(a, b): _letter_product(a, b) for a in "IXYZ" for b in "IXYZ"}


def letterwise_product(a: str, pa: int, b: str, pb: int) -> tuple[str, complex]:
    """Tensor-factor oracle: multiply letter by letter with 2x2 matrices."""
    coeff = (1j**pa) * (1j**pb)
    out = []
    for ca, cb in zip(a, b):
        c, s = _TABLE[ca, cb]
        out.append(c)
        coeff *= s
    return "".join(out), coeff


labels_strategy = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.text("IXYZ", min_size=n, max_size=n), st.text("IXYZ", min_size=n, max_size=n))
)


class TestParsing:
    def test_round_trip(self):
        for label in ["XXII", "-IZYX", "+iXZ", "-iYYY", "I"]:
            assert pauli_from_string(str(pauli_from_string(label))) == pauli_from_string(label)

    def test_masks_follow_label(self):
        p = pauli_from_string("XYZI")
        assert p.x == 0b1100 and p.z == 0b0110
        assert p.letters == "XYZI"
        assert p.support == (0, 1, 2)

    def test_bad_character_position(self):
        with pytest.raises(PauliParseError) as exc:
            pauli_from_string("XXQI")
        assert exc.value.position == 2

    def test_empty_label(self):
        with pytest.raises(PauliParseError):
            pauli_from_string("")

    def test_mask_too_wide(self):
        with pytest.raises(ValueError):
            PauliOperator(2, 0b100, 0)

    def test_phase_reduced_mod_4(self):
        assert PauliOperator(1, 1, 0, 7).phase == 3


class TestWeight:
    @pytest.mark.parametrize("label,w", [("IIII", 0), ("XXII", 2), ("XXXX", 4), ("IYIZ", 2)])
    def test_weight(self, label, w):
        assert pauli_from_string(label).weight == w


class TestMultiplicationExhaustive:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_products_match_dense(self, n):
        labels = all_labels(n)
        mats = {lab: dense(lab) for lab in labels}
        for a, b in itertools.product(labels, repeat=2):
            for pa in (0, 1):
                pb = (pa * 3 + len(a)) % 4
                got = multiply(pauli_from_string(a, pa), pauli_from_string(b, pb))
                expect = (1j**pa) * (1j**pb) * mats[a] @ mats[b]
                assert np.allclose(dense_op(got), expect, atol=1e-12), (a, b)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_commutation_matches_dense(self, n):
        labels = all_labels(n)
        mats = {lab: dense(lab) for lab in labels}
        for a, b in itertools.product(labels, repeat=2):
            comm = mats[a] @ mats[b] - mats[b] @ mats[a]
            assert commutes(pauli_from_string(a), pauli_from_string(b)) == np.allclose(comm, 0), (a, b)


class TestMultiplicationRandom:
    def test_ten_thousand_products_letterwise(self):
        rng = np.random.default_rng(12345)
        for _ in range(10_000):
            n = int(rng.integers(1, 9))
            a = "".join(rng.choice(list("IXYZ"), n))
            b = "".join(rng.choice(list("IXYZ"), n))
            pa, pb = (int(v) for v in rng.integers(0, 4, 2))
            got = multiply(pauli_from_string(a, pa), pauli_from_string(b, pb))
            label, coeff = letterwise_product(a, pa, b, pb)
            assert got.letters == label
            assert np.isclose(1j**got.phase, coeff)
            ab = letterwise_product(a, 0, b, 0)[1]
            ba = letterwise_product(b, 0, a, 0)[1]
            assert commutes(pauli_from_string(a), pauli_from_string(b)) == np.isclose(ab, ba)

    def test_full_dense_at_eight_qubits(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            a = "".join(rng.choice(list("IXYZ"), 8))
            b = "".join(rng.choice(list("IXYZ"), 8))
            got = multiply(pauli_from_string(a), pauli_from_string(b))
            assert np.allclose(dense_op(got), dense(a) @ dense(b))

    @settings(max_examples=300, deadline=None)
    @given(labels_strategy, st.integers(0, 3), st.integers(0, 3))
    def test_group_laws(self, pair, pa, pb):
        a, b = pauli_from_string(pair[0], pa), pauli_from_string(pair[1], pb)
        ab, ba = multiply(a, b), multiply(b, a)
        assert ab.masks == ba.masks
        # anticommuting products differ by exactly -1
        assert (ab.phase - ba.phase) % 4 == (0 if commutes(a, b) else 2)
        assert multiply(a, a.adjoint()).is_identity and multiply(a, a.adjoint()).phase == 0
        assert multiply(multiply(a, b), b.adjoint()) == a


class TestWorkedProducts:
    def test_q2x_closure(self):
        p = multiply(pauli_from_string("XXII"), pauli_from_string("IXXI"))
        assert p == pauli_from_string("XIXI")
        assert p.phase == 0

    def test_steane_logicals_commute(self):
        # X1 Z3 against X1 X5 X6 in 1-based labels
        a = pauli_from_string("XIZIIII")
        b = pauli_from_string("XIIIXXI")
        comm = dense_op(a) @ dense_op(b) - dense_op(b) @ dense_op(a)
        assert np.allclose(comm, 0)
        assert commutes(a, b)

    def test_y_tensor_four_is_xz_product(self):
        p = multiply(pauli_from_string("XXXX"), pauli_from_string("ZZZZ"))
        assert p.letters == "YYYY"
        assert np.allclose(dense_op(p), dense("XXXX") @ dense("ZZZZ"))


def _conj_dense(axis, angle, target):
    u = expm_hermitian(dense_op(axis), angle)
    return u.conj().T @ dense_op(target) @ u


class TestConjugation:
    def test_quarter_turn_on_single_qubit(self):
        out = conjugate_by_quarter(pauli_from_string("XIII"), 1, pauli_from_string("ZIII"))
        assert out.letters == "YIII"
        assert np.allclose(dense_op(out), _conj_dense(pauli_from_string("XIII"), math.pi / 4, pauli_from_string("ZIII")))

    def test_chain_builds_zzzz(self):
        op = pauli_from_string("ZIII")
        for a in ["XIII", "XIIZ", "XIZI", "XZII"]:
            op = conjugate_by_quarter(pauli_from_string(a), 1, op)
        assert op.letters == "ZZZZ"
        assert op.phase in (0, 2)

    def test_commuting_target_untouched(self):
        t = pauli_from_string("ZZII")
        assert conjugate_by_quarter(pauli_from_string("XXII"), 1, t) == t

    def test_central_gate_formula(self):
        theta = 0.37
        xbar = pauli_from_string("XIII")
        out = conjugate_by_rotation(pauli_from_string("ZIII"), theta, xbar)
        expect = PauliSum(4, [(math.cos(2 * theta), xbar), (1j * math.sin(2 * theta), multiply(xbar, pauli_from_string("ZIII")))])
        assert out.allclose(expect)

    @pytest.mark.parametrize("seed", range(40))
    def test_random_three_qubit_rotation(self, seed):
        rng = np.random.default_rng(seed)
        axis = pauli_from_string("".join(rng.choice(list("IXYZ"), 3)))
        target = pauli_from_string("".join(rng.choice(list("IXYZ"), 3)), int(rng.integers(4)))
        angle = float(rng.uniform(-math.pi, math.pi))
        out = conjugate_by_rotation(axis, angle, target)
        assert np.allclose(dense_sum(out), _conj_dense(axis, angle, target), atol=1e-12)

    @pytest.mark.parametrize("k", [-2, -1, 1, 2, 3])
    def test_quarter_turns_match_rotation(self, k):
        for a, b in itertools.product(all_labels(2), repeat=2):
            pa, pb = pauli_from_string(a), pauli_from_string(b)
            out = conjugate_by_quarter(pa, k, pb)
            assert np.allclose(dense_op(out), _conj_dense(pa, k * math.pi / 4, pb), atol=1e-12)

    def test_rotation_of_pauli_sum(self):
        s = PauliSum(2, [(0.5, pauli_from_string("XI")), (0.5j, pauli_from_string("ZZ"))])
        axis = pauli_from_string("YI")
        u = expm_hermitian(dense_op(axis), 0.2)
        assert np.allclose(dense_sum(conjugate_by_rotation(axis, 0.2, s)), u.conj().T @ dense_sum(s) @ u)


class TestClifford1q:
    @pytest.mark.parametrize("tag,mat", [("R", HADAMARD), ("Q", QGATE), ("Qdg", QGATE.conj().T)])
    def test_exhaustive_three_qubits(self, tag, mat):
        for lab in all_labels(3):
            for qubit in range(3):
                p = pauli_from_string(lab)
                g = one_qubit_on(mat, qubit, 3)
                out = conjugate_by_clifford1q(tag, qubit, p)
                assert np.allclose(dense_op(out), g @ dense_op(p) @ g.conj().T), (tag, lab, qubit)

    def test_q_takes_y_to_z(self):
        out = conjugate_by_clifford1q("Q", 0, pauli_from_string("Y"))
        assert out == pauli_from_string("Z")
        assert np.allclose(QGATE @ LETTER["Y"] @ QGATE.conj().T, LETTER["Z"])

    def test_unknown_tag(self):
        with pytest.raises(ValueError):
            conjugate_by_clifford1q("S", 0, pauli_from_string("X"))


class TestCnot:
    @pytest.mark.parametrize("control,target", [(0, 1), (1, 0), (0, 2), (2, 1)])
    def test_exhaustive_three_qubits(self, control, target):
        u = cnot_matrix(control, target, 3)
        for lab in all_labels(3):
            p = pauli_from_string(lab)
            out = conjugate_by_cnot(control, target, p)
            assert np.allclose(dense_op(out), u @ dense_op(p) @ u.conj().T), lab

    @pytest.mark.parametrize("before,after", [("XI", "XX"), ("IZ", "ZZ"), ("XZ", "-YY"), ("ZI", "ZI"), ("IX", "IX")])
    def test_transformation_table(self, before, after):
        assert conjugate_by_cnot(0, 1, pauli_from_string(before)) == pauli_from_string(after)

    def test_same_qubit_rejected(self):
        with pytest.raises(ValueError):
            conjugate_by_cnot(1, 1, pauli_from_string("XX"))


class TestPauliSum:
    def test_like_terms_merge_and_cancel(self):
        x = pauli_from_string("XI")
        s = PauliSum(2, [(1.0, x), (-1.0, x), (2.0, pauli_from_string("ZZ"))])
        assert len(s) == 1
        assert s.is_single

    def test_phases_absorbed(self):
        s = PauliSum.from_operator(pauli_from_string("-iXY"))
        (c, op), = s.terms
        assert op.phase == 0 and np.isclose(c, -1j)

    def test_product_matches_dense(self):
        a = PauliSum(2, [(0.3, pauli_from_string("XI")), (0.7j, pauli_from_string("YZ"))])
        b = PauliSum(2, [(1.1, pauli_from_string("ZX")), (-0.2, pauli_from_string("II"))])
        assert np.allclose(dense_sum(a * b), dense_sum(a) @ dense_sum(b))
