"""Stabilizer validation, standard forms, groups and codespaces."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from dfsft.codes import BUILTIN_CODES, StabFileError, builtin_code, format_stab, load_code, parse_stab, save_code
from dfsft.pauli import commutes, multiply, pauli_from_string
from dfsft.stabilizer import (
    DependentGeneratorsError,
    ErrorClass,
    MinusIdentityError,
    NonAbelianError,
    check_correctability,
    classify_error,
    codespace_projector,
    enumerate_group,
    extract_codewords,
    in_group,
    is_equivalent_normalizer,
    logical_basis,
    tensor_codes,
    validate,
)

from conftest import CORPUS, dense, dense_op, projector_oracle, subspace_distance

P = pauli_from_string


def basis_state(bits: str) -> np.ndarray:
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


class TestValidate:
    @pytest.mark.parametrize(
        "gens,k,l",
        [
            (["XXII", "IXXI", "IIXX"], 4, 1),
            (["XXXX", "ZZZZ"], 4, 2),
            (["XX", "ZZ"], 2, 0),
        ],
    )
    def test_encoded_count(self, gens, k, l):
        code = validate(gens)
        assert code.K == k and code.l == l
        # symplectic rank oracle: number of independent generators
        vecs = np.array([[int(c) for c in format(P(g).symplectic(), f"0{2 * k}b")] for g in gens])
        assert k - np.linalg.matrix_rank(vecs) == l

    def test_zero_encoded_qubits_one_codeword(self):
        code = validate(["XX", "ZZ"])
        assert logical_basis(code).dimension == 1

    def test_non_abelian(self):
        with pytest.raises(NonAbelianError):
            validate(["XI", "ZI"])

    def test_minus_identity(self):
        with pytest.raises(MinusIdentityError):
            validate(["XX", "-XX"])

    def test_odd_phase_generator(self):
        with pytest.raises(MinusIdentityError):
            validate(["iXX"])

    def test_dependent(self):
        with pytest.raises(DependentGeneratorsError):
            validate(["XXII", "IXXI", "XIXI"])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            validate(["XX", "ZZZ"])


class TestGroup:
    def test_q2x_elements(self, q2x):
        listed = {"IIII", "XXII", "XIIX", "IIXX", "XIXI", "IXXI", "IXIX", "XXXX"}
        group = enumerate_group(q2x)
        assert {g.letters for g in group} == listed
        assert all(g.phase == 0 for g in group)

    def test_q4_elements_with_phase(self, q4):
        group = enumerate_group(q4)
        assert {g.letters for g in group} == {"IIII", "XXXX", "ZZZZ", "YYYY"}
        yyyy = next(g for g in group if g.letters == "YYYY")
        assert np.allclose(dense_op(yyyy), dense("XXXX") @ dense("ZZZZ"))

    def test_group_is_closed(self, corpus_code):
        group = enumerate_group(corpus_code)
        assert len(group) == 1 << len(corpus_code.generators)
        masks = {g.masks for g in group}
        assert len(masks) == len(group)
        for a, b in itertools.combinations(group[:16], 2):
            assert multiply(a, b).masks in masks

    def test_in_group(self, q2x):
        assert in_group(P("XIXI"), q2x)
        assert not in_group(P("XIII"), q2x)


class TestStandardForm:
    def test_q2x(self, q2x):
        assert q2x.standard_x[0] == P("XIII")
        assert q2x.standard_z[0] == P("ZZZZ")
        assert q2x.css

    def test_steane(self, steane):
        assert steane.standard_x[0] == P("XIIIXXI")
        assert steane.standard_z[0] == P("ZIZZIII")

    def test_footnote(self):
        code = builtin_code("footnote")
        assert code.standard_z[0] == P("ZZZZII")
        assert code.standard_x[0] == P("XIIIXX")

    def test_fivequbit_has_z_part(self, fivequbit):
        assert not fivequbit.css
        assert fivequbit.standard_x[0].z != 0

    def test_q4_alternate_frame_x1_equivalent(self, q4):
        assert is_equivalent_normalizer("IXXI", q4.standard_x[0], q4)

    def test_q4_alternate_frame_in_logical_span(self, q4):
        # an alternate logical frame is a relabelling of ours: same logicals modulo Q4
        gens = list(q4.generators) + list(q4.standard_z) + list(q4.standard_x)
        for label in ["IXXI", "XXII", "ZZII", "IZZI"]:
            assert in_group(P(label), gens)
            assert not q4.contains(P(label))

    def test_q2x_x_and_z_not_equivalent(self, q2x):
        assert not is_equivalent_normalizer("XIII", "ZZZZ", q2x)
        # oracle: their product is not any of the eight listed elements
        prod = multiply(P("XIII"), P("ZZZZ"))
        assert prod.masks not in {g.masks for g in enumerate_group(q2x)}

    def test_commutation_pattern(self, corpus_code):
        code = corpus_code
        zs, xs = code.standard_z, code.standard_x
        for op in list(zs) + list(xs):
            assert op.is_hermitian
            assert all(commutes(op, g) for g in code.generators)
            assert not code.contains(op)
        for i, j in itertools.product(range(code.l), repeat=2):
            assert commutes(zs[i], zs[j]) and commutes(xs[i], xs[j])
            assert commutes(zs[i], xs[j]) == (i != j)

    def test_commutation_pattern_dense(self):
        for name in ("q4", "q2x", "fig4", "fivequbit"):
            code = builtin_code(name)
            for z, x in itertools.product(code.standard_z, code.standard_x):
                a, b = dense_op(z), dense_op(x)
                anti = np.allclose(a @ b, -b @ a)
                assert anti == (not commutes(z, x))

    def test_base_qubits_carry_the_central_letters(self, corpus_code):
        for j, b in enumerate(corpus_code.base_qubits):
            assert corpus_code.standard_z[j].letter(b) == "Z"
            assert corpus_code.standard_x[j].letter(b) in "XY"


class TestCodespace:
    def test_projector(self, corpus_code):
        code = corpus_code
        proj = codespace_projector(code)
        assert np.allclose(proj @ proj, proj)
        assert np.allclose(proj, proj.conj().T)
        assert np.linalg.matrix_rank(proj, tol=1e-8) == 1 << code.l
        labels = [g.letters if g.phase == 0 else None for g in code.generators]
        assert None not in labels
        assert np.allclose(proj, projector_oracle(labels))

    def test_projector_equals_group_average(self, q2x):
        group = enumerate_group(q2x)
        avg = sum(dense_op(g) for g in group) / len(group)
        assert np.allclose(codespace_projector(q2x), avg)

    def test_q2x_codewords_span(self, q2x):
        even = [format(i, "04b") for i in range(16) if bin(i).count("1") % 2 == 0]
        odd = [format(i, "04b") for i in range(16) if bin(i).count("1") % 2 == 1]
        zero = sum(basis_state(b) for b in even) / np.sqrt(8)
        one = sum(basis_state(b) for b in odd) / np.sqrt(8)
        words = extract_codewords(codespace_projector(q2x), q2x).matrix()
        assert subspace_distance(words, np.column_stack([zero, one])) < 1e-10
        basis = logical_basis(q2x)
        assert abs(abs(np.vdot(zero, basis.basis[0])) - 1) < 1e-10
        assert abs(abs(np.vdot(one, basis.basis[1])) - 1) < 1e-10

    def test_q4_codewords_span(self, q4):
        expected = [("0000", "1111"), ("1001", "0110"), ("1100", "0011"), ("0101", "1010")]
        states = np.column_stack([(basis_state(a) + basis_state(b)) / np.sqrt(2) for a, b in expected])
        words = extract_codewords(None, q4).matrix()
        assert subspace_distance(words, states) < 1e-10
        assert abs(abs(np.vdot(states[:, 0], logical_basis(q4).basis[0])) - 1) < 1e-10

    def test_logical_basis_frame(self, corpus_code):
        code = corpus_code
        basis = logical_basis(code).matrix()
        l = code.l
        for j in range(l):
            z, x = dense_op(code.standard_z[j]), dense_op(code.standard_x[j])
            for a in range(1 << l):
                bit = a >> (l - 1 - j) & 1
                assert np.allclose(z @ basis[:, a], (-1) ** bit * basis[:, a])
                assert np.allclose(x @ basis[:, a], basis[:, a ^ (1 << (l - 1 - j))])


class TestClassification:
    def test_three_classes(self, q2x):
        assert classify_error("XXII", q2x.generators).tag == ErrorClass.IN_STABILIZER
        assert classify_error("ZIII", q2x.generators).tag == ErrorClass.DETECTABLE
        cls = classify_error("XIII", q2x.generators, [q2x.standard_z[0]])
        assert cls.tag == ErrorClass.UNDETECTABLE
        assert cls.witness == q2x.standard_z[0]

    def test_classes_match_brute_force(self, corpus_code):
        code = corpus_code
        group = {g.masks for g in enumerate_group(code)}
        rng = np.random.default_rng(3)
        for _ in range(200):
            e = P("".join(rng.choice(list("IXYZ"), code.K)))
            tag = classify_error(e, code.generators).tag
            if e.masks in group:
                assert tag == ErrorClass.IN_STABILIZER
            elif all(commutes(e, g) for g in code.generators):
                assert tag == ErrorClass.UNDETECTABLE
            else:
                assert tag == ErrorClass.DETECTABLE

    def test_correctability(self, q2x):
        ok, _ = check_correctability(enumerate_group(q2x), q2x.generators)
        assert ok
        ok, pair = check_correctability(["IIII", "XIII"], q2x.generators)
        assert not ok


class TestTensorCodes:
    def test_block_layout(self, q2x, q4):
        pair = tensor_codes(q2x, q4)
        assert pair.K == 8 and pair.l == 3
        assert pair.standard_z[0] == P("ZZZZIIII")
        assert pair.standard_x[1] == q4.standard_x[0].embed(8, 4)
        assert pair.base_qubits[0] == q2x.base_qubits[0]


class TestCodeFiles:
    def test_round_trip(self, tmp_path, corpus_code):
        path = tmp_path / "code.stab"
        save_code(corpus_code, path, comment="test")
        again = load_code(path)
        assert again.generators == corpus_code.generators

    def test_builtin_names(self):
        for name in BUILTIN_CODES:
            assert load_code(name).name == name
            assert load_code(f"{name}.stab").name == name

    def test_parse_errors_carry_line(self):
        with pytest.raises(StabFileError) as exc:
            parse_stab("K=4\nXXII\nXQII\n")
        assert exc.value.line == 3
        with pytest.raises(StabFileError):
            parse_stab("XXII\n")
        with pytest.raises(StabFileError):
            parse_stab("K=4\nXXI\n")

    def test_format(self, q2x):
        assert format_stab(q2x) == "K=4\nXXII\nIXXI\nIIXX\n"

    def test_missing_file(self):
        with pytest.raises(FileNotFoundError):
            load_code("no_such_code.stab")

    def test_corpus_listed(self):
        assert set(CORPUS) == set(BUILTIN_CODES)
