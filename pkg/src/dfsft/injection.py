"""Exhaustive single-fault injection with syndrome measurement and correction.

For every fault location ``i`` (before gate ``i``; location ``len(circuit)``
is after the last gate) and every error ``e`` in the stabilizer group, the
sweep runs the first ``i`` gates, applies ``e``, measures the stabilizer
generators transformed to location ``i``, applies the table correction and
finishes the circuit.  The result is compared with the fault-free run.

Parallel gates are atomic: faults only occur between gates.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit
from .dense import DEFAULT_DENSE_CAP, apply_pauli, check_dense_cap
from .pauli import PauliOperator
from .stabilizer import StabilizerCode, enumerate_group, logical_basis
from .statevec import StateVector, apply_gate, fidelity, random_code_state, run_circuit
from .syndrome import SyndromeTable, build_syndrome_table, measure_syndrome
from .verifier import trace_heisenberg

__all__ = [
    "MEASUREMENT_MODES",
    "InjectionResult",
    "InjectionReport",
    "task_rng",
    "exhaustive_fault_injection",
    "inject_single",
]

MEASUREMENT_MODES = ("ancilla", "projective")


def task_rng(seed: int, *key: int) -> np.random.Generator:
    """Counter-based stream for one task, independent of scheduling."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=tuple(key))))


@dataclass(frozen=True)
class InjectionResult:
    location: int
    error: PauliOperator
    syndrome: str
    correction: PauliOperator
    fidelity: float
    purity: float = 1.0

    def to_dict(self) -> dict:
        return {
            "location": self.location,
            "error": str(self.error),
            "syndrome": self.syndrome,
            "correction": str(self.correction),
            "fidelity": self.fidelity,
            "purity": self.purity,
        }


@dataclass
class InjectionReport:
    code_name: str
    circuit_label: str
    n_locations: int
    n_errors: int
    measurement: str
    seed: int
    results: list[InjectionResult] = field(default_factory=list)
    ambiguous_locations: list[int] = field(default_factory=list)

    @property
    def worst(self) -> Optional[InjectionResult]:
        return min(self.results, key=lambda r: r.fidelity) if self.results else None

    @property
    def worst_fidelity(self) -> float:
        return self.worst.fidelity if self.results else 1.0

    @property
    def worst_purity(self) -> float:
        return min((r.purity for r in self.results), default=1.0)

    def failures(self, tol: float = 1e-9) -> list[InjectionResult]:
        return [r for r in self.results if r.fidelity < 1 - tol]

    def passed(self, tol: float = 1e-9) -> bool:
        return not self.failures(tol)

    def summary(self, tol: float = 1e-9) -> str:
        status = "PASS" if self.passed(tol) else f"FAIL ({len(self.failures(tol))} runs below 1 - {tol:g})"
        line = (
            f"{self.code_name} / {self.circuit_label}: {len(self.results)} runs "
            f"({self.n_errors} errors x {self.n_locations} locations, {self.measurement} measurement); "
            f"worst fidelity {self.worst_fidelity:.12f}; {status}"
        )
        if self.worst is not None and not self.passed(tol):
            w = self.worst
            line += f"\n  worst: {w.error} at location {w.location}, syndrome {w.syndrome}, correction {w.correction}"
        return line

    def to_dict(self) -> dict:
        return {
            "code": self.code_name,
            "circuit": self.circuit_label,
            "locations": self.n_locations,
            "errors": self.n_errors,
            "measurement": self.measurement,
            "seed": self.seed,
            "worst_fidelity": self.worst_fidelity,
            "worst_purity": self.worst_purity,
            "passed": self.passed(),
            "ambiguous_locations": self.ambiguous_locations,
            "results": [r.to_dict() for r in self.results],
        }


def _projective_syndrome(
    state: StateVector, generators: Sequence[PauliOperator], rng: np.random.Generator
) -> tuple[str, StateVector]:
    bits = []
    v = state.amplitudes
    for g in generators:
        gv = apply_pauli(g, v)
        p_plus = float(np.clip((1 + np.vdot(v, gv).real) / 2, 0.0, 1.0))
        bit = int(rng.random() >= p_plus)
        sign = -1 if bit else 1
        v = 0.5 * (v + sign * gv)
        v = v / np.linalg.norm(v)
        bits.append(str(bit))
    return "".join(bits), StateVector(state.n_qubits, v)


@dataclass(frozen=True)
class _Job:
    circuit: Circuit
    code: StabilizerCode
    location: int
    state: np.ndarray
    generators: tuple[PauliOperator, ...]
    table: SyndromeTable
    errors: tuple[tuple[int, PauliOperator], ...]
    clean: np.ndarray
    measurement: str
    ancilla: Optional[StabilizerCode]
    seed: int
    repeat: int
    cap: int


def _run_job(job: _Job) -> list[tuple[int, InjectionResult]]:
    out = []
    n = job.code.n_qubits
    suffix = job.circuit.suffix(job.location)
    clean = StateVector(n, job.clean)
    for idx, e in job.errors:
        rng = task_rng(job.seed, 1, job.location, idx)
        faulty = StateVector(n, apply_pauli(e, job.state))
        if job.measurement == "ancilla":
            syndrome, measured, purity = measure_syndrome(
                faulty, job.code, job.generators, rng, job.ancilla, repeat=job.repeat, cap=job.cap
            )
        else:
            syndrome, measured = _projective_syndrome(faulty, job.generators, rng)
            purity = 1.0
        correction = job.table.correction(syndrome)
        if correction is None:
            # A syndrome outside the table cannot come from a single group error.
            correction = PauliOperator.identity(n)
        fixed = StateVector(n, apply_pauli(correction, measured.amplitudes))
        final = run_circuit(fixed, suffix)
        out.append((idx, InjectionResult(job.location, e, syndrome, correction, fidelity(clean, final), purity)))
    return out


def _initial_state(code: StabilizerCode, seed: int, cap: int) -> StateVector:
    rng = task_rng(seed, 0)
    return random_code_state(logical_basis(code, cap), rng)


def exhaustive_fault_injection(
    circuit: Circuit,
    code: StabilizerCode,
    errors: Optional[Sequence[PauliOperator]] = None,
    *,
    locations: Optional[Sequence[int]] = None,
    initial: Optional[StateVector] = None,
    measurement: str = "ancilla",
    ancilla: Optional[StabilizerCode] = None,
    seed: int = 0,
    repeat: int = 1,
    jobs: int = 1,
    cap: int = DEFAULT_DENSE_CAP,
) -> InjectionReport:
    """Sweep every error over every fault location and record the fidelity.

    Args:
        errors: errors to inject; defaults to every nontrivial element of
            the stabilizer group.  The correction table is always built
            from the whole group.
        locations: defaults to ``0 .. len(circuit)``.
        initial: defaults to a seeded random superposition of codewords.
        measurement: ``"ancilla"`` runs the measurement circuits on a joint
            data plus ancilla register; ``"projective"`` applies the ideal
            projectors directly.
        jobs: worker processes; results are merged in (location, error)
            order so the report does not depend on scheduling.

    Raises:
        DenseCapError: the data register, or data plus ancilla, exceeds ``cap``.
    """
    if measurement not in MEASUREMENT_MODES:
        raise ValueError(f"measurement must be one of {MEASUREMENT_MODES}")
    check_dense_cap(code.n_qubits, cap)
    if measurement == "ancilla":
        check_dense_cap(code.n_qubits + (ancilla or code).n_qubits, cap)
    group = tuple(g for g in enumerate_group(code) if not g.is_identity)
    errors = group if errors is None else tuple(errors)
    trace = trace_heisenberg(circuit, code)
    locs = list(range(circuit.n_locations)) if locations is None else sorted(set(locations))
    for loc in locs:
        if not 0 <= loc < circuit.n_locations:
            raise ValueError(f"fault location {loc} outside 0..{circuit.n_locations - 1}")
    state = initial if initial is not None else _initial_state(code, seed, cap)
    prefix_states = [state.amplitudes]
    for gate in circuit.gates:
        state = apply_gate(state, gate)
        prefix_states.append(state.amplitudes)
    clean = prefix_states[-1]

    report = InjectionReport(
        code.name or str(code), circuit.label or "circuit", len(locs), len(errors), measurement, seed
    )
    batch = []
    for loc in locs:
        gens = trace.locations[loc].stabilizer
        table = build_syndrome_table(gens, group)
        if table.ambiguous:
            report.ambiguous_locations.append(loc)
        batch.append(
            _Job(
                circuit, code, loc, prefix_states[loc], gens, table, tuple(enumerate(errors)), clean,
                measurement, ancilla, seed, repeat, cap,
            )
        )
    if jobs > 1 and len(batch) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_job, batch))
    else:
        chunks = [_run_job(job) for job in batch]
    for chunk in chunks:
        report.results.extend(r for _, r in sorted(chunk, key=lambda item: item[0]))
    return report


def inject_single(
    circuit: Circuit,
    code: StabilizerCode,
    error: PauliOperator,
    location: int,
    **kwargs,
) -> InjectionResult:
    """One fault at one location, with the same protocol and table as the sweep."""
    report = exhaustive_fault_injection(circuit, code, [error], locations=[location], **kwargs)
    return report.results[0]
