"""Syndrome tables and ancilla-based stabilizer measurement.

A stabilizer element ``q`` is measured by rotating each data qubit in its
support to the Z basis, copying the Z parity onto an ancilla block prepared
in ``|0_L>`` with controlled logical ``X`` gates, reading the ancilla's
logical ``Z`` by single-qubit Z measurements, and rotating back.

Two equivalent layouts are offered.  ``layered`` applies every basis change,
then every controlled gate, then every inverse basis change.
``interleaved`` rotates one qubit, uses it as a control and rotates it back
before moving on, so at most one data position is ever rotated.  Only the
interleaved layout keeps every intermediate code safe against stabilizer
errors in general (measuring XXXX on q2x in layered form sends Z_bar to the
stabilizer element XXXX).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit, Clifford1q, ControlledPauli, MeasureZ
from .dense import DEFAULT_DENSE_CAP, check_dense_cap
from .pauli import PauliOperator, commutes, conjugate_by_clifford1q, multiply
from .stabilizer import StabilizerCode, enumerate_group, in_group, logical_basis
from .statevec import StateVector, run_circuit
from .verifier import Theorem2Report, trace_heisenberg, verify_theorem2

__all__ = [
    "LAYOUTS",
    "MeasurementError",
    "SyndromeTable",
    "MeasurementRecord",
    "MeasurementAudit",
    "syndrome_of",
    "build_syndrome_table",
    "basis_change_gates",
    "synth_measurement_circuit",
    "prepare_logical_ancilla",
    "measure_element",
    "measure_syndrome",
    "data_purity",
    "audit_measurement_ft",
    "ancilla_stabilizer_errors",
]

# Clifford1q mapping each letter to Z under U P U^dagger.
_TO_Z = {"X": "R", "Y": "Q"}
_FROM_Z = {"R": "R", "Q": "Qdg"}
LAYOUTS = ("interleaved", "layered")


class MeasurementError(ValueError):
    pass


def syndrome_of(e: PauliOperator, generators: Sequence[PauliOperator]) -> str:
    """Bit ``i`` (left to right) is ``1`` iff ``e`` anticommutes with generator ``i``."""
    return "".join("0" if commutes(e, g) else "1" for g in generators)


@dataclass
class SyndromeTable:
    generators: tuple[PauliOperator, ...]
    rows: dict[str, PauliOperator]
    members: dict[str, list[PauliOperator]] = field(default_factory=dict)
    ambiguities: dict[str, list[PauliOperator]] = field(default_factory=dict)

    def correction(self, syndrome: str) -> Optional[PauliOperator]:
        return self.rows.get(syndrome)

    @property
    def ambiguous(self) -> bool:
        return bool(self.ambiguities)

    def format(self) -> str:
        lines = [f"generators: {', '.join(str(g) for g in self.generators)}"]
        for s in sorted(self.rows):
            flag = "  AMBIGUOUS" if s in self.ambiguities else ""
            members = ", ".join(str(e) for e in self.members.get(s, ()))
            lines.append(f"{s}  correct {self.rows[s]}  <- {members}{flag}")
        return "\n".join(lines)


def build_syndrome_table(generators: Sequence[PauliOperator], errors: Sequence[PauliOperator]) -> SyndromeTable:
    """Group ``errors`` by syndrome; the first error of each class is its correction.

    Two errors sharing a syndrome are interchangeable only when their product
    lies in the group generated by ``generators``.  Classes where that fails
    are recorded in ``ambiguities``.
    """
    gens = tuple(generators)
    n = gens[0].n_qubits if gens else errors[0].n_qubits
    rows: dict[str, PauliOperator] = {"0" * len(gens): PauliOperator.identity(n)}
    members: dict[str, list[PauliOperator]] = {}
    ambiguities: dict[str, list[PauliOperator]] = {}
    for e in errors:
        s = syndrome_of(e, gens)
        members.setdefault(s, []).append(e)
        if s not in rows:
            rows[s] = e
    for s, group in members.items():
        rep = rows[s]
        if any(not in_group(multiply(rep, e), gens) for e in group):
            ambiguities[s] = list(group)
    return SyndromeTable(gens, rows, members, ambiguities)


def basis_change_gates(q: PauliOperator) -> list[Clifford1q]:
    """Single-qubit gates taking every X or Y of ``q`` to Z."""
    return [Clifford1q(_TO_Z[q.letter(k)], k) for k in range(q.n_qubits) if q.letter(k) in _TO_Z]


def _undo(g: Clifford1q) -> Clifford1q:
    return Clifford1q(_FROM_Z[g.tag], g.qubit)


def _check_layout(layout: str) -> None:
    if layout not in LAYOUTS:
        raise ValueError(f"layout must be one of {LAYOUTS}, got {layout!r}")


def _ancilla_frame(ancilla: StabilizerCode) -> tuple[PauliOperator, tuple[int, ...]]:
    if ancilla.encoded_count < 1:
        raise MeasurementError("the ancilla code must encode at least one qubit")
    z = ancilla.standard_z[0]
    if z.x or z.phase:
        raise MeasurementError(f"ancilla logical Z {z} is not a plain Z string")
    return ancilla.standard_x[0], z.support


def synth_measurement_circuit(
    code: StabilizerCode,
    q: PauliOperator,
    ancilla: Optional[StabilizerCode] = None,
    generators: Optional[Sequence[PauliOperator]] = None,
    layout: str = "interleaved",
) -> Circuit:
    """Circuit on data qubits ``0..K-1`` followed by the ancilla block.

    ``generators`` overrides the group ``q`` must belong to, for measuring a
    transformed stabilizer mid-circuit.  A ``-1`` sign on ``q`` is not
    represented in the circuit; ``measure_element`` flips the bit for it.

    Raises:
        MeasurementError: ``q`` is not in the group.
    """
    _check_layout(layout)
    gens = tuple(generators) if generators is not None else code.generators
    if q.n_qubits != code.n_qubits:
        raise MeasurementError(f"element has {q.n_qubits} qubits, code has {code.n_qubits}")
    if not q.is_hermitian or not in_group(q, gens):
        raise MeasurementError(f"{q} is not an element of the stabilizer group")
    ancilla = ancilla or code
    x_anc, z_support = _ancilla_frame(ancilla)
    k, total = code.n_qubits, code.n_qubits + ancilla.n_qubits
    target = x_anc.embed(total, k)
    rotations = {g.qubit: g for g in basis_change_gates(q)}
    if layout == "layered":
        before = list(rotations.values())
        copies = [ControlledPauli(c, target) for c in q.support]
        gates = [*before, *copies, *(_undo(g) for g in before)]
    else:
        gates = []
        for c in q.support:
            g = rotations.get(c)
            gates += [g, ControlledPauli(c, target), _undo(g)] if g else [ControlledPauli(c, target)]
    gates.append(MeasureZ(tuple(k + a for a in z_support)))
    return Circuit(total, tuple(gates), label=f"measure {q}")


def prepare_logical_ancilla(code: StabilizerCode, index: int = 0, cap: int = DEFAULT_DENSE_CAP) -> StateVector:
    """Encoded basis state ``|index_L>``, built directly from the codewords."""
    if not 0 <= index < (1 << code.encoded_count):
        raise ValueError(f"logical index {index} out of range for {code.encoded_count} encoded qubits")
    basis = logical_basis(code, cap)
    return StateVector(code.n_qubits, basis.basis[index].copy())


def data_purity(joint: StateVector, n_data: int) -> float:
    """``tr(rho^2)`` of the reduced state of the leading ``n_data`` qubits."""
    m = joint.amplitudes.reshape(1 << n_data, -1)
    s = np.linalg.svd(m, compute_uv=False)
    return float(np.sum(s**4))


def _split_data(joint: StateVector, n_data: int) -> StateVector:
    m = joint.amplitudes.reshape(1 << n_data, -1)
    col = int(np.argmax(np.sum(np.abs(m) ** 2, axis=0)))
    vec = m[:, col]
    return StateVector(n_data, vec / np.linalg.norm(vec))


@dataclass(frozen=True)
class MeasurementRecord:
    bit: int
    purity: float
    state: StateVector


def measure_element(
    state: StateVector,
    code: StabilizerCode,
    q: PauliOperator,
    rng: np.random.Generator,
    ancilla: Optional[StabilizerCode] = None,
    generators: Optional[Sequence[PauliOperator]] = None,
    ancilla_state: Optional[StateVector] = None,
    layout: str = "interleaved",
    cap: int = DEFAULT_DENSE_CAP,
) -> MeasurementRecord:
    """Run one ancilla measurement of ``q``; ``bit`` is 0 for the +1 outcome.

    ``ancilla_state`` replaces the fresh ``|0_L>`` (used to inject ancilla
    errors).  The data state returned is the data factor of the joint state.
    """
    ancilla = ancilla or code
    check_dense_cap(code.n_qubits + ancilla.n_qubits, cap)
    circuit = synth_measurement_circuit(code, q, ancilla, generators, layout)
    anc = ancilla_state if ancilla_state is not None else prepare_logical_ancilla(ancilla, 0, cap)
    joint = run_circuit(state.tensor(anc), circuit, rng)
    bit = joint.measurements[-1] ^ (1 if q.phase == 2 else 0)
    purity = data_purity(joint, code.n_qubits)
    return MeasurementRecord(bit, purity, _split_data(joint, code.n_qubits))


def measure_syndrome(
    state: StateVector,
    code: StabilizerCode,
    generators: Sequence[PauliOperator],
    rng: np.random.Generator,
    ancilla: Optional[StabilizerCode] = None,
    repeat: int = 1,
    layout: str = "interleaved",
    cap: int = DEFAULT_DENSE_CAP,
) -> tuple[str, StateVector, float]:
    """Measure each generator in order with a fresh ancilla.

    With ``repeat > 1`` each generator is measured that many times and the
    majority bit is kept.  Returns the syndrome string, the collapsed data
    state and the smallest data purity seen.
    """
    if repeat < 1 or repeat % 2 == 0:
        raise ValueError("repeat must be a positive odd number")
    bits = []
    worst = 1.0
    for g in generators:
        votes = 0
        for _ in range(repeat):
            rec = measure_element(state, code, g, rng, ancilla, generators, layout=layout, cap=cap)
            state = rec.state
            votes += rec.bit
            worst = min(worst, rec.purity)
        bits.append("1" if 2 * votes > repeat else "0")
    return "".join(bits), state, worst


@dataclass
class MeasurementAudit:
    """Theorem-2 audit of the data-side basis changes of a measurement circuit.

    ``cases`` describes, for each rotated configuration the data passes
    through, where each standard logical lands relative to the original code.
    """

    element: PauliOperator
    layout: str
    circuit: Circuit
    report: Theorem2Report
    cases: list[str]
    restored: bool

    @property
    def passed(self) -> bool:
        return self.report.passed and self.restored

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        head = (
            f"measurement of {self.element} ({self.layout}): {status}; "
            f"{self.report.summary()}; original normalizer restored: {self.restored}"
        )
        return "\n".join([head] + [f"  {c}" for c in self.cases])


def _rotate(op: PauliOperator, gates: Sequence[Clifford1q]) -> PauliOperator:
    for g in gates:
        op = conjugate_by_clifford1q(g.tag, g.qubit, op)
    return op


def _case(code: StabilizerCode, name: str, original: PauliOperator, rotated: PauliOperator) -> str:
    if rotated == original:
        return f"{name}: unchanged"
    for g in code.normalizer_generators():
        if not commutes(rotated, g):
            return f"{name} -> {rotated}: anticommutes with original {g}"
    if code.contains(rotated):
        return f"{name} -> {rotated}: lands in the stabilizer"
    return f"{name} -> {rotated}: commutes with the whole original normalizer"


def audit_measurement_ft(code: StabilizerCode, q: PauliOperator, layout: str = "interleaved") -> MeasurementAudit:
    """Run the Theorem-2 check on the data block through the basis changes.

    The controlled gates only act on the ancilla for a data Z-basis control,
    so the data-side circuit is the basis changes alone, in the order the
    chosen layout applies them.  After the last one the original normalizer
    must be back exactly.
    """
    _check_layout(layout)
    if not in_group(q, code.generators):
        raise MeasurementError(f"{q} is not an element of the stabilizer group")
    rotations = basis_change_gates(q)
    if layout == "layered":
        stages = [tuple(rotations)]
        gates = tuple(rotations) + tuple(_undo(g) for g in rotations)
    else:
        stages = [(g,) for g in rotations]
        gates = tuple(x for g in rotations for x in (g, _undo(g)))
    circuit = Circuit(code.n_qubits, gates, label=f"basis change for {q}")
    trace = trace_heisenberg(circuit, code)
    report = verify_theorem2(trace, code)
    cases = []
    for stage in stages:
        where = " ".join(f"{g.tag}@{g.qubit}" for g in stage)
        for j in range(code.encoded_count):
            cases.append(f"[{where}] " + _case(code, f"Z{j}", code.standard_z[j], _rotate(code.standard_z[j], stage)))
            cases.append(f"[{where}] " + _case(code, f"X{j}", code.standard_x[j], _rotate(code.standard_x[j], stage)))
    final = trace.locations[-1]
    restored = all(s == g for s, g in zip(final.stabilizer, code.generators)) and all(
        n.is_single and n.single() == src for n, src in zip(final.normalizer, trace.sources)
    )
    return MeasurementAudit(q, layout, circuit, report, cases, restored)


def ancilla_stabilizer_errors(ancilla: StabilizerCode, cap: int = 1 << 12) -> list[PauliOperator]:
    """Nontrivial elements of the ancilla's own stabilizer group."""
    return [g for g in enumerate_group(ancilla, cap) if not g.is_identity]
