"""Gate and circuit types plus the line-oriented circuit file format.

Every rotation is ``exp(i * angle * P)`` for a Hermitian Pauli ``P``.  Fault
location ``i`` sits just before gate ``i``; location ``len(gates)`` is after
the last gate.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

from .pauli import PauliOperator, PauliParseError, commutes, pauli_from_string

__all__ = [
    "Angle",
    "PauliExp",
    "ParallelPauliExp",
    "Cnot",
    "Clifford1q",
    "ControlledPauli",
    "MeasureZ",
    "Gate",
    "Circuit",
    "CircuitFileError",
    "parse_angle",
    "parse_circuit",
    "format_circuit",
    "load_circuit",
    "save_circuit",
]

_QUARTER = math.pi / 4


@dataclass(frozen=True)
class Angle:
    """Real angle in radians with optional exact and symbolic tags.

    ``quarters`` is set when the angle is exactly ``quarters * pi/4``;
    ``theta_coeff`` is set when the angle was written as ``c*theta``.
    """

    value: float
    quarters: Optional[int] = None
    theta_coeff: Optional[float] = None

    @classmethod
    def quarter(cls, k: int) -> Angle:
        return cls(k * _QUARTER, k)

    @classmethod
    def of(cls, value: Union[float, Angle]) -> Angle:
        return value if isinstance(value, Angle) else cls(float(value))

    @classmethod
    def theta(cls, coeff: float, theta: float) -> Angle:
        return cls(coeff * theta, None, coeff)

    @property
    def is_quarter(self) -> bool:
        return self.quarters is not None

    def scaled(self, factor: float) -> Angle:
        coeff = None if self.theta_coeff is None else self.theta_coeff * factor
        quarters = None
        if self.quarters is not None and float(self.quarters * factor).is_integer():
            quarters = int(self.quarters * factor)
        return Angle(self.value * factor, quarters, coeff)

    def __neg__(self) -> Angle:
        return self.scaled(-1)

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        if self.quarters is not None:
            return f"{self.quarters}*pi/4"
        if self.theta_coeff is not None:
            return f"{self.theta_coeff:.17g}*theta"
        return f"{self.value:.17g}"


_ANGLE_QUARTER = re.compile(r"^([+-]?\d*)\s*\*?\s*pi\s*(?:/\s*(1|2|4))?$")
_ANGLE_THETA = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*theta$")


def parse_angle(text: str, theta: Optional[float] = None) -> Angle:
    """Parse ``k*pi/4`` (also ``pi/2``, ``-pi``), ``c*theta`` or a decimal."""
    s = text.strip().replace(" ", "")
    m = _ANGLE_QUARTER.match(s)
    if m:
        k = m.group(1)
        k = 1 if k in ("", "+") else -1 if k == "-" else int(k)
        per = {None: 4, "1": 4, "2": 2, "4": 1}[m.group(2)]
        return Angle.quarter(k * per)
    m = _ANGLE_THETA.match(s)
    if m:
        coeff = m.group(1)
        coeff = 1.0 if coeff in (None, "", "+") else -1.0 if coeff == "-" else float(coeff)
        if theta is None:
            raise ValueError(f"angle {text!r} needs a value for theta")
        return Angle.theta(coeff, theta)
    try:
        return Angle(float(s))
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}") from None


def _check_hermitian(p: PauliOperator) -> None:
    if not p.is_hermitian:
        raise ValueError(f"rotation generator {p} is not Hermitian")


@dataclass(frozen=True)
class PauliExp:
    generator: PauliOperator
    angle: Angle

    def __post_init__(self):
        _check_hermitian(self.generator)
        object.__setattr__(self, "angle", Angle.of(self.angle))

    @property
    def n_qubits(self) -> int:
        return self.generator.n_qubits

    def inverse(self) -> PauliExp:
        return PauliExp(self.generator, -self.angle)


@dataclass(frozen=True)
class ParallelPauliExp:
    """``exp(i angle sum_k P_k)`` for pairwise commuting ``P_k``."""

    generators: tuple[PauliOperator, ...]
    angle: Angle

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("ParallelPauliExp needs at least one generator")
        for g in gens:
            _check_hermitian(g)
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if not commutes(gens[i], gens[j]):
                    raise ValueError(f"parallel factors {gens[i]} and {gens[j]} anticommute")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "angle", Angle.of(self.angle))

    @property
    def n_qubits(self) -> int:
        return self.generators[0].n_qubits

    def inverse(self) -> ParallelPauliExp:
        return ParallelPauliExp(self.generators, -self.angle)


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("CNOT control and target coincide")

    def inverse(self) -> Cnot:
        return self


@dataclass(frozen=True)
class Clifford1q:
    """``R`` (Hadamard), ``Q`` (maps Z to X to Y to Z under conjugation) or ``Qdg``."""

    tag: str
    qubit: int

    def __post_init__(self):
        if self.tag not in ("R", "Q", "Qdg"):
            raise ValueError(f"unknown single-qubit Clifford tag {self.tag!r}")

    def inverse(self) -> Clifford1q:
        return Clifford1q({"R": "R", "Q": "Qdg", "Qdg": "Q"}[self.tag], self.qubit)


@dataclass(frozen=True)
class ControlledPauli:
    """Apply ``target`` when ``control`` is ``|1>``."""

    control: int
    target: PauliOperator

    def __post_init__(self):
        _check_hermitian(self.target)
        if self.control in self.target.support:
            raise ValueError("controlled Pauli acts on its own control qubit")

    def inverse(self) -> ControlledPauli:
        return self


@dataclass(frozen=True)
class MeasureZ:
    """Measure each listed qubit in Z; the recorded bit is the parity of outcomes."""

    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))

    def inverse(self) -> MeasureZ:
        raise ValueError("measurement has no inverse")


Gate = Union[PauliExp, ParallelPauliExp, Cnot, Clifford1q, ControlledPauli, MeasureZ]


def gate_qubits(gate: Gate) -> tuple[int, ...]:
    if isinstance(gate, PauliExp):
        return gate.generator.support
    if isinstance(gate, ParallelPauliExp):
        return tuple(sorted({q for g in gate.generators for q in g.support}))
    if isinstance(gate, Cnot):
        return (gate.control, gate.target)
    if isinstance(gate, Clifford1q):
        return (gate.qubit,)
    if isinstance(gate, ControlledPauli):
        return (gate.control,) + gate.target.support
    if isinstance(gate, MeasureZ):
        return gate.qubits
    raise TypeError(f"not a gate: {gate!r}")


def _embed_gate(gate: Gate, n_qubits: int, offset: int) -> Gate:
    if isinstance(gate, PauliExp):
        return PauliExp(gate.generator.embed(n_qubits, offset), gate.angle)
    if isinstance(gate, ParallelPauliExp):
        return ParallelPauliExp(tuple(g.embed(n_qubits, offset) for g in gate.generators), gate.angle)
    if isinstance(gate, Cnot):
        return Cnot(gate.control + offset, gate.target + offset)
    if isinstance(gate, Clifford1q):
        return Clifford1q(gate.tag, gate.qubit + offset)
    if isinstance(gate, ControlledPauli):
        return ControlledPauli(gate.control + offset, gate.target.embed(n_qubits, offset))
    if isinstance(gate, MeasureZ):
        return MeasureZ(tuple(q + offset for q in gate.qubits))
    raise TypeError(f"not a gate: {gate!r}")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        gates = tuple(self.gates)
        for k, g in enumerate(gates):
            width = getattr(g, "n_qubits", None)
            if width is not None and width != self.n_qubits:
                raise ValueError(f"gate {k} acts on {width} qubits, circuit has {self.n_qubits}")
            for q in gate_qubits(g):
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"gate {k} touches qubit {q} outside 0..{self.n_qubits - 1}")
        object.__setattr__(self, "gates", gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    @property
    def n_locations(self) -> int:
        return len(self.gates) + 1

    def then(self, other: Circuit) -> Circuit:
        if other.n_qubits != self.n_qubits:
            raise ValueError("circuit widths differ")
        return Circuit(self.n_qubits, self.gates + other.gates, self.label)

    def inverse(self) -> Circuit:
        return Circuit(self.n_qubits, tuple(g.inverse() for g in reversed(self.gates)), self.label)

    def embed(self, n_qubits: int, offset: int) -> Circuit:
        """Place the circuit on qubits ``offset ..`` of a wider register."""
        return Circuit(n_qubits, tuple(_embed_gate(g, n_qubits, offset) for g in self.gates), self.label)

    def prefix(self, location: int) -> Circuit:
        return Circuit(self.n_qubits, self.gates[:location], self.label)

    def suffix(self, location: int) -> Circuit:
        return Circuit(self.n_qubits, self.gates[location:], self.label)


# -- file format ---------------------------------------------------------------


class CircuitFileError(ValueError):
    def __init__(self, source: str, line: int, message: str):
        self.source = source
        self.line = line
        super().__init__(f"{source}:{line}: {message}")


def _format_gate(gate: Gate) -> str:
    if isinstance(gate, PauliExp):
        return f"pauli_exp generator={gate.generator} angle={gate.angle}"
    if isinstance(gate, ParallelPauliExp):
        gens = ",".join(str(g) for g in gate.generators)
        return f"parallel_pauli_exp generators={gens} angle={gate.angle}"
    if isinstance(gate, Cnot):
        return f"cnot control={gate.control} target={gate.target}"
    if isinstance(gate, Clifford1q):
        return f"clifford1q tag={gate.tag} qubit={gate.qubit}"
    if isinstance(gate, ControlledPauli):
        return f"controlled_pauli control={gate.control} target={gate.target}"
    if isinstance(gate, MeasureZ):
        return "measure_z qubits=" + ",".join(str(q) for q in gate.qubits)
    raise TypeError(f"not a gate: {gate!r}")


def format_circuit(circuit: Circuit, comment: str = "") -> str:
    lines = [f"# {line}" for line in comment.splitlines()]
    lines.append(f"qubits={circuit.n_qubits}")
    lines.extend(_format_gate(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


_REQUIRED = {
    "pauli_exp": ("generator", "angle"),
    "parallel_pauli_exp": ("generators", "angle"),
    "cnot": ("control", "target"),
    "clifford1q": ("tag", "qubit"),
    "controlled_pauli": ("control", "target"),
    "measure_z": ("qubits",),
}


def _build_gate(kind: str, fields: dict[str, str], theta: Optional[float]) -> Gate:
    if kind == "pauli_exp":
        return PauliExp(pauli_from_string(fields["generator"]), parse_angle(fields["angle"], theta))
    if kind == "parallel_pauli_exp":
        gens = tuple(pauli_from_string(g) for g in fields["generators"].split(","))
        return ParallelPauliExp(gens, parse_angle(fields["angle"], theta))
    if kind == "cnot":
        return Cnot(int(fields["control"]), int(fields["target"]))
    if kind == "clifford1q":
        return Clifford1q(fields["tag"], int(fields["qubit"]))
    if kind == "controlled_pauli":
        return ControlledPauli(int(fields["control"]), pauli_from_string(fields["target"]))
    return MeasureZ(tuple(int(q) for q in fields["qubits"].split(",") if q))


def parse_circuit(text: str, theta: Optional[float] = None, source: str = "<string>") -> Circuit:
    """Read the one-gate-per-line format; ``theta`` binds symbolic ``c*theta`` angles."""
    n = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            key, sep, value = line.partition("=")
            if not sep or key.strip() != "qubits":
                raise CircuitFileError(source, lineno, "first entry must be qubits=<int>")
            try:
                n = int(value)
            except ValueError:
                raise CircuitFileError(source, lineno, f"bad qubit count {value.strip()!r}") from None
            continue
        kind, *tokens = line.split()
        if kind not in _REQUIRED:
            raise CircuitFileError(source, lineno, f"unknown gate kind {kind!r}")
        fields = {}
        for tok in tokens:
            key, sep, value = tok.partition("=")
            if not sep:
                raise CircuitFileError(source, lineno, f"expected key=value, got {tok!r}")
            fields[key] = value
        missing = [k for k in _REQUIRED[kind] if k not in fields]
        if missing:
            raise CircuitFileError(source, lineno, f"{kind} is missing {', '.join(missing)}")
        try:
            gate = _build_gate(kind, fields, theta)
        except (ValueError, PauliParseError) as exc:
            raise CircuitFileError(source, lineno, str(exc)) from None
        gates.append(gate)
    if n is None:
        raise CircuitFileError(source, 0, "missing qubits=<int> header")
    try:
        return Circuit(n, tuple(gates))
    except ValueError as exc:
        raise CircuitFileError(source, 0, str(exc)) from None


def load_circuit(path: Union[str, os.PathLike], theta: Optional[float] = None) -> Circuit:
    p = Path(path)
    return parse_circuit(p.read_text(encoding="utf-8"), theta=theta, source=str(p))


def save_circuit(circuit: Circuit, path: Union[str, os.PathLike], comment: str = "") -> None:
    Path(path).write_text(format_circuit(circuit, comment), encoding="utf-8")


def concatenate(circuits: Sequence[Circuit], label: str = "") -> Circuit:
    if not circuits:
        raise ValueError("nothing to concatenate")
    n = circuits[0].n_qubits
    gates: list[Gate] = []
    for c in circuits:
        if c.n_qubits != n:
            raise ValueError("circuit widths differ")
        gates.extend(c.gates)
    return Circuit(n, tuple(gates), label)
