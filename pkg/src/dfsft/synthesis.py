"""Encoded gates built from one- and two-body Pauli exponentials.

A many-body logical generator ``G`` is produced from a one-body (or two-body)
central generator ``C`` on a base qubit by commuting pi/4 conjugations:
``V exp(i theta C) V^dagger = exp(i theta V C V^dagger)`` with
``V = prod_k exp(i pi/4 A_k)``.  Each ``A_k`` anticommutes with the running
image, so one step maps ``B`` to ``-i B A_k`` and grows it by one qubit.

The conjugator list, read from the central gate outward, is called the
ledger order; ``A_1`` sits next to the central gate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .circuit import Angle, Circuit, Cnot, Gate, ParallelPauliExp, PauliExp
from .pauli import PauliOperator, conjugate_by_quarter, multiply
from .stabilizer import StabilizerCode

__all__ = [
    "SynthesisError",
    "NonCssError",
    "RotationPlan",
    "rotation_plan",
    "synth_logical_rotation",
    "synth_euler",
    "synth_css_cnot",
    "bitwise_cnot",
    "synth_joint_zx",
    "synth_general_cnot",
    "synth_logical_zz",
    "check_hamiltonian_locality",
]


class SynthesisError(ValueError):
    pass


class NonCssError(SynthesisError):
    pass


@dataclass(frozen=True)
class RotationPlan:
    """Central generator, its conjugators in ledger order, and the running images.

    ``ledger[0]`` is the central generator and ``ledger[k]`` its image after
    the first ``k`` conjugators; ``ledger[-1]`` equals ``target`` exactly.
    """

    target: PauliOperator
    central: PauliOperator
    conjugators: tuple[PauliOperator, ...]
    ledger: tuple[PauliOperator, ...]


def _forward(conjugator: PauliOperator, op: PauliOperator) -> PauliOperator:
    # image of op under the gate exp(i pi/4 A)
    return conjugate_by_quarter(conjugator, -1, op)


def _run_ledger(central: PauliOperator, conjugators: Sequence[PauliOperator]) -> list[PauliOperator]:
    ledger = [central]
    for a in conjugators:
        ledger.append(_forward(a, ledger[-1]))
    return ledger


def _letter_op(n: int, letters: dict[int, str]) -> PauliOperator:
    return PauliOperator.from_letters(n, letters)


def _base_conjugators(target: PauliOperator, base: int, axis: str) -> tuple[PauliOperator, list[PauliOperator], PauliOperator]:
    """Central one-body generator, growing conjugators, and the parity fix-up."""
    n = target.n_qubits
    if axis == "Z":
        central = _letter_op(n, {base: "Z"})
        fixup = _letter_op(n, {base: "X"})
        conj = [_letter_op(n, {base: "X", q: target.letter(q)}) for q in target.support if q != base]
    else:
        central = _letter_op(n, {base: "X"})
        fixup = _letter_op(n, {base: "Z"})
        extra = [q for q in target.support if q != base]
        # X-type growth first, then the Z-type (non-CSS) part
        xs = [q for q in extra if target.letter(q) == "X"]
        zs = [q for q in extra if target.letter(q) == "Z"]
        if any(target.letter(q) == "Y" for q in extra):
            raise SynthesisError(f"target {target} carries Y off the base qubit")
        conj = [_letter_op(n, {base: "Z", q: "X"}) for q in xs] + [_letter_op(n, {base: "Z", q: "Z"}) for q in zs]
    return central, conj, fixup


def rotation_plan(code: StabilizerCode, axis: str, j: int, central: str = "one_body") -> RotationPlan:
    """Plan the conjugation ledger for ``exp(i theta Z_j)`` or ``exp(i theta X_j)``.

    One extra qubit of the target is absorbed per conjugator.  When the target
    has even weight the running image ends with ``Y`` on the base qubit, and a
    final bare ``X_b`` (``Z_b`` for the X axis) rotates it back.  If the result
    comes out as ``-target``, the conjugator next to the central gate is
    negated, which is the same as flipping its pi/4 to -pi/4.

    With ``central="two_body"`` the last growing conjugator is folded into the
    central generator, which then has weight two.
    """
    axis = axis.upper().replace("BAR", "")
    if axis not in ("Z", "X"):
        raise SynthesisError(f"axis must be Z or X, got {axis!r}")
    if central not in ("one_body", "two_body"):
        raise SynthesisError(f"central must be one_body or two_body, got {central!r}")
    if not 0 <= j < code.encoded_count:
        raise SynthesisError(f"encoded index {j} out of range for l={code.encoded_count}")
    target = (code.standard_z if axis == "Z" else code.standard_x)[j].unsigned()
    base = code.base_qubits[j]
    return _plan_for_target(target, base, axis, central)


def _plan_for_target(target: PauliOperator, base: int, axis: str, central_mode: str) -> RotationPlan:
    if target.weight <= 1 or (central_mode == "two_body" and target.weight <= 2):
        return RotationPlan(target, target, (), (target,))
    central, conj, fixup = _base_conjugators(target, base, axis)
    if target.weight % 2 == 0:
        conj.append(fixup)
    if central_mode == "two_body":
        folded = conj.pop(len(conj) - 2 if target.weight % 2 == 0 else len(conj) - 1)
        central = _forward(folded, central)
        central = central.with_phase(0)
    ledger = _run_ledger(central, conj)
    if ledger[-1].masks != target.masks:
        raise SynthesisError(f"ledger ends at {ledger[-1]}, expected {target}")
    if ledger[-1].phase == 2:
        conj[0] = -conj[0]
        ledger = _run_ledger(central, conj)
    assert ledger[-1] == target, (ledger[-1], target)
    return RotationPlan(target, central, tuple(conj), tuple(ledger))


def _conjugated_circuit(
    n: int, central: PauliOperator, conj: Sequence[PauliOperator], angle: Angle, mode: str
) -> list[Gate]:
    if not conj:
        return [PauliExp(central, angle)]
    if mode == "series":
        before = [PauliExp(a, Angle.quarter(-1)) for a in reversed(conj)]
        after = [PauliExp(a, Angle.quarter(1)) for a in conj]
        return before + [PauliExp(central, angle)] + after
    if mode == "parallel":
        factors = tuple(conj)
        return [ParallelPauliExp(factors, Angle.quarter(-1)), PauliExp(central, angle), ParallelPauliExp(factors, Angle.quarter(1))]
    raise SynthesisError(f"mode must be series or parallel, got {mode!r}")


def synth_logical_rotation(
    code: StabilizerCode,
    axis: str,
    j: int,
    angle: Union[float, Angle],
    mode: str = "series",
    central: str = "one_body",
) -> Circuit:
    """Circuit for ``exp(i angle Z_j)`` or ``exp(i angle X_j)`` on the code.

    Series mode emits ``2m+1`` gates; parallel mode wraps the ``m`` commuting
    conjugators into one ``ParallelPauliExp`` on each side of the central gate.
    """
    plan = rotation_plan(code, axis, j, central)
    gates = _conjugated_circuit(code.n_qubits, plan.central, plan.conjugators, Angle.of(angle), mode)
    return Circuit(code.n_qubits, tuple(gates), label=f"exp(i a {axis.upper()[0]}bar_{j}) {mode}")


def synth_euler(
    code: StabilizerCode,
    j: int,
    angles: tuple[float, float, float],
    mode: str = "series",
    central: str = "one_body",
) -> Circuit:
    """``exp(-i beta Z/2) exp(-i theta Y/2) exp(-i alpha Z/2)`` on encoded qubit ``j``.

    The Y rotation is ``exp(i phi Y) = exp(i pi/4 X) exp(i phi Z) exp(-i pi/4 X)``
    with ``Y = i X Z``.
    """
    alpha, theta, beta = angles
    parts = [
        synth_logical_rotation(code, "Z", j, -alpha / 2, mode, central),
        synth_logical_rotation(code, "X", j, Angle.quarter(-1), mode, central),
        synth_logical_rotation(code, "Z", j, -theta / 2, mode, central),
        synth_logical_rotation(code, "X", j, Angle.quarter(1), mode, central),
        synth_logical_rotation(code, "Z", j, -beta / 2, mode, central),
    ]
    gates: list[Gate] = []
    for p in parts:
        gates.extend(p.gates)
    return Circuit(code.n_qubits, tuple(gates), label=f"euler({alpha:g}, {theta:g}, {beta:g}) on {j}")


def synth_css_cnot(code_a: StabilizerCode, code_b: StabilizerCode) -> Circuit:
    """Bitwise CNOT from block A (leading qubits) to block B."""
    for name, code in (("control", code_a), ("target", code_b)):
        if not code.css:
            raise NonCssError(f"{name} block is not CSS; use synth_general_cnot")
    if code_a.n_qubits != code_b.n_qubits:
        raise SynthesisError("bitwise CNOT needs blocks of equal size")
    k = code_a.n_qubits
    return Circuit(2 * k, tuple(Cnot(i, k + i) for i in range(k)), label="bitwise cnot")


def bitwise_cnot(k: int) -> Circuit:
    """Bitwise CNOT between two ``k``-qubit blocks, with no code checks."""
    return Circuit(2 * k, tuple(Cnot(i, k + i) for i in range(k)), label="bitwise cnot")


def _embed_ops(ops: Sequence[PauliOperator], n: int, offset: int) -> list[PauliOperator]:
    return [op.embed(n, offset) for op in ops]


def _joint_zx_parts(code_a: StabilizerCode, code_b: StabilizerCode, j_a: int, j_b: int):
    n = code_a.n_qubits + code_b.n_qubits
    off = code_a.n_qubits
    plan_a = rotation_plan(code_a, "Z", j_a)
    plan_b = rotation_plan(code_b, "X", j_b)
    central_b = plan_b.central.embed(n, off)
    conj_b = _embed_ops(plan_b.conjugators, n, off)
    central_ab = multiply(plan_a.central.embed(n, 0), central_b)
    conj_ab = _embed_ops(plan_a.conjugators, n, 0) + conj_b
    return n, central_b, conj_b, central_ab, conj_ab


def synth_joint_zx(
    code_a: StabilizerCode,
    code_b: StabilizerCode,
    angle: Union[float, Angle],
    j_a: int = 0,
    j_b: int = 0,
    mode: str = "parallel",
) -> Circuit:
    """``exp(i angle Z_A (x) X_B)`` on two blocks, block ``a`` first.

    Each block's own conjugators turn the two-body central gate
    ``Z_bA X_bB`` into the product of the two logicals.
    """
    n, _, _, central_ab, conj_ab = _joint_zx_parts(code_a, code_b, j_a, j_b)
    gates = _conjugated_circuit(n, central_ab, conj_ab, Angle.of(angle), mode)
    return Circuit(n, tuple(gates), label=f"exp(i {Angle.of(angle)} Z{j_a}_A X{j_b}_B)")


def synth_general_cnot(
    code_a: StabilizerCode,
    code_b: StabilizerCode,
    j_a: int = 0,
    j_b: int = 0,
    trotter_steps: int = 1,
) -> Circuit:
    """First-order Trotter circuit for ``exp(i pi/4 (X_B - Z_A X_B))``.

    The target is ``diag(I, exp(i pi/2 X_B))`` in the control's encoded Z
    basis, which is the encoded CNOT up to a phase ``i`` on the control's
    ``|1>``.  Each step applies the ``I (x) X_B`` factor first, then the
    ``Z_A (x) X_B`` factor, both with angle ``pi/(4n)``.  The second factor
    uses the two-body central gate ``Z_bA X_bB`` inside the joint parallel
    conjugators of both blocks.
    """
    if trotter_steps < 1:
        raise SynthesisError("trotter_steps must be at least 1")
    n, central_b, conj_b, central_ab, conj_ab = _joint_zx_parts(code_a, code_b, j_a, j_b)
    step = Angle.quarter(1).scaled(1 / trotter_steps)
    gates: list[Gate] = []
    for _ in range(trotter_steps):
        gates += _conjugated_circuit(n, central_b, conj_b, step, "parallel")
        gates += _conjugated_circuit(n, central_ab, conj_ab, -step, "parallel")
    return Circuit(n, tuple(gates), label=f"trotter cnot n={trotter_steps}")


def synth_logical_zz(
    code: StabilizerCode, j1: int, j2: int, angle: Union[float, Angle], mode: str = "parallel"
) -> Circuit:
    """``exp(i angle Z_j1 Z_j2)`` inside one block.

    A two-body product is applied directly.  Otherwise the central
    ``Z_b1 Z_b2`` is conjugated by the union of both qubits' conjugators,
    which commute with each other.
    """
    if j1 == j2:
        raise SynthesisError("encoded indices must differ")
    for j in (j1, j2):
        if not 0 <= j < code.encoded_count:
            raise SynthesisError(f"encoded index {j} out of range for l={code.encoded_count}")
    target = multiply(code.standard_z[j1], code.standard_z[j2])
    angle = Angle.of(angle)
    if target.weight <= 2:
        return Circuit(code.n_qubits, (PauliExp(target.with_phase(0), angle),), label="zz direct")
    p1 = rotation_plan(code, "Z", j1)
    p2 = rotation_plan(code, "Z", j2)
    central = multiply(p1.central, p2.central)
    conj = list(p1.conjugators) + list(p2.conjugators)
    gates = _conjugated_circuit(code.n_qubits, central, conj, angle, mode)
    return Circuit(code.n_qubits, tuple(gates), label=f"zz {j1},{j2}")


def check_hamiltonian_locality(circuit: Circuit, max_weight: int = 2):
    """Every rotation factor must act on at most ``max_weight`` qubits.

    Returns ``(True, None)`` or ``(False, (gate_index, offending_generator))``.
    """
    for k, gate in enumerate(circuit.gates):
        if isinstance(gate, PauliExp):
            if gate.generator.weight > max_weight:
                return False, (k, gate.generator)
        elif isinstance(gate, ParallelPauliExp):
            for g in gate.generators:
                if g.weight > max_weight:
                    return False, (k, g)
    return True, None
