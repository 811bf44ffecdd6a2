"""Heisenberg-picture tracking of a code through a circuit and the checks built on it.

At fault location ``i`` (before gate ``i``) the code is described by the
images ``U q U^dagger`` of the stabilizer generators and ``U n U^dagger`` of
the tracked logical operators, where ``U`` is the product of the first ``i``
gates.  Stabilizer images stay single Paulis; a logical image becomes a
Pauli sum once it passes an arbitrary-angle gate it anticommutes with.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .circuit import Circuit, Clifford1q, Cnot, ControlledPauli, Gate, MeasureZ, ParallelPauliExp, PauliExp
from .gf2 import XorBasis, solve
from .pauli import (
    PauliOperator,
    PauliSum,
    commutes,
    conjugate_by_clifford1q,
    conjugate_by_cnot,
    conjugate_by_quarter,
    conjugate_by_rotation,
    multiply,
)
from .stabilizer import (
    ErrorClass,
    StabilizerCode,
    check_correctability,
    classify_error,
    enumerate_group,
)

__all__ = [
    "StabilizerWouldBranch",
    "UnsupportedGate",
    "CssCodeGiven",
    "Verdict",
    "LocationSnapshot",
    "VerificationTrace",
    "Theorem2Report",
    "CorrectabilityReport",
    "DetectionReport",
    "AppendixAReport",
    "heisenberg_image",
    "trace_heisenberg",
    "verify_theorem2",
    "verify_errors_correctable",
    "verify_detection_only_weight1",
    "reproduce_appendix_a",
    "stabilizer_restored",
    "verify_per_block",
    "PerBlockReport",
    "format_ledger",
]

EQUALS_SOURCE = "EqualsSource"
ANTICOMMUTES = "AnticommutesWith"
VIOLATION = "VIOLATION"

DEFAULT_COSET_CAP = 1 << 16
DEFAULT_TRACKED_CAP = 255


class StabilizerWouldBranch(ValueError):
    """An arbitrary-angle gate anticommutes with a transformed stabilizer generator."""

    def __init__(self, location: int, generator: PauliOperator, gate_generator: PauliOperator):
        self.location = location
        super().__init__(
            f"gate {location} (generator {gate_generator}) anticommutes with transformed stabilizer generator {generator}"
        )


class UnsupportedGate(ValueError):
    pass


class CssCodeGiven(ValueError):
    pass


# -- conjugation through gates ------------------------------------------------------


Operand = Union[PauliOperator, PauliSum]


def _quarter_image(axis: PauliOperator, quarters: int, op: Operand) -> Operand:
    # exp(i k pi/4 A) op exp(-i k pi/4 A)
    return conjugate_by_quarter(axis, -quarters, op)


def heisenberg_image(gate: Gate, op: Operand) -> Operand:
    """``G op G^dagger``; single Paulis stay single unless the gate has a generic angle."""
    if isinstance(gate, PauliExp):
        if gate.angle.is_quarter:
            return _quarter_image(gate.generator, gate.angle.quarters, op)
        if isinstance(op, PauliOperator) and commutes(gate.generator, op):
            return op
        return conjugate_by_rotation(gate.generator, -gate.angle.value, op)
    if isinstance(gate, ParallelPauliExp):
        for g in gate.generators:
            op = heisenberg_image(PauliExp(g, gate.angle), op)
        return op
    if isinstance(gate, Cnot):
        return conjugate_by_cnot(gate.control, gate.target, op)
    if isinstance(gate, Clifford1q):
        return conjugate_by_clifford1q(gate.tag, gate.qubit, op)
    if isinstance(gate, ControlledPauli):
        # C-P = e^{i pi/4} exp(-i pi/4 Z_c) exp(-i pi/4 P) exp(i pi/4 Z_c P)
        zc = PauliOperator.single(op.n_qubits, gate.control, "Z")
        op = _quarter_image(zc, -1, op)
        op = _quarter_image(gate.target, -1, op)
        return _quarter_image(multiply(zc, gate.target), 1, op)
    if isinstance(gate, MeasureZ):
        raise UnsupportedGate("measurements have no Heisenberg image")
    raise UnsupportedGate(f"cannot conjugate through {gate!r}")


def _branches(gate: Gate) -> tuple[PauliOperator, ...]:
    """Generators of arbitrary-angle rotations inside the gate."""
    if isinstance(gate, PauliExp) and not gate.angle.is_quarter:
        return (gate.generator,)
    if isinstance(gate, ParallelPauliExp) and not gate.angle.is_quarter:
        return gate.generators
    return ()


# -- trace ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    tag: str
    witness: Optional[PauliOperator] = None
    via_solve: bool = False

    def __str__(self) -> str:
        if self.tag == ANTICOMMUTES:
            return f"anticommutes with {self.witness}"
        return self.tag


@dataclass
class LocationSnapshot:
    location: int
    stabilizer: tuple[PauliOperator, ...]
    normalizer: tuple[PauliSum, ...]
    verdicts: list[Verdict] = field(default_factory=list)


@dataclass
class VerificationTrace:
    """Per-location images of the stabilizer generators and tracked logicals.

    ``sources[k]`` is the original operator whose image is
    ``locations[i].normalizer[k]``; the first ``2l`` sources are
    ``Z_0.., X_0..``.
    """

    code: StabilizerCode
    circuit: Circuit
    sources: tuple[PauliOperator, ...]
    source_names: tuple[str, ...]
    locations: list[LocationSnapshot]


def _tracked_logicals(code: StabilizerCode, cap: int):
    l = code.encoded_count
    names = [f"Z{j}" for j in range(l)] + [f"X{j}" for j in range(l)]
    ops = list(code.standard_z) + list(code.standard_x)
    if (4**l) - 1 <= cap:
        seen = {op.masks for op in ops}
        letters = ("", "X", "Z", "Y")
        for word in itertools.product(range(4), repeat=l):
            if not any(word):
                continue
            p = PauliOperator.identity(code.n_qubits)
            for j, w in enumerate(word):
                if w:
                    p = multiply(p, (None, code.standard_x[j], code.standard_z[j], code.standard_y(j))[w])
            if p.masks in seen:
                continue
            seen.add(p.masks)
            ops.append(p)
            names.append("".join(f"{letters[w]}{j}" for j, w in enumerate(word) if w))
    return tuple(ops), tuple(names)


def trace_heisenberg(circuit: Circuit, code: StabilizerCode, tracked_cap: int = DEFAULT_TRACKED_CAP) -> VerificationTrace:
    """Conjugate stabilizer generators and logical operators through every gate.

    All ``4**l - 1`` logical products are tracked when that is at most
    ``tracked_cap``; otherwise only the ``2l`` standard ones.

    Raises:
        StabilizerWouldBranch: an arbitrary-angle rotation does not commute
            with the transformed stabilizer at its location.
        UnsupportedGate: the circuit contains a measurement.
    """
    if circuit.n_qubits != code.n_qubits:
        raise ValueError(f"circuit has {circuit.n_qubits} qubits, code has {code.n_qubits}")
    sources, names = _tracked_logicals(code, tracked_cap)
    stab = tuple(code.generators)
    norm = tuple(PauliSum.from_operator(op) for op in sources)
    locations = [LocationSnapshot(0, stab, norm)]
    for k, gate in enumerate(circuit.gates):
        for g in _branches(gate):
            for s in stab:
                if not commutes(g, s):
                    raise StabilizerWouldBranch(k, s, g)
        stab = tuple(heisenberg_image(gate, s) for s in stab)
        norm = tuple(heisenberg_image(gate, n) for n in norm)
        locations.append(LocationSnapshot(k + 1, stab, norm))
    return VerificationTrace(code, circuit, sources, names, locations)


# -- Theorem 2 --------------------------------------------------------------------------


class _WitnessFinder:
    """Search for ``m`` in the original normalizer anticommuting with every term."""

    def __init__(self, code: StabilizerCode):
        l = code.encoded_count
        canon = []
        for j in range(l):
            canon += [code.standard_z[j], code.standard_x[j], code.standard_y(j)]
        pairs = [multiply(a, b) for a, b in itertools.combinations(canon, 2)]
        self.candidates = canon + [p.with_phase(0) if p.phase % 2 == 0 else p.with_phase(p.phase + 1) for p in pairs]
        self.generators = list(code.generators) + list(code.standard_z) + list(code.standard_x)
        self.cache: dict[tuple, tuple[Optional[PauliOperator], bool]] = {}

    def find(self, terms: Sequence[PauliOperator]) -> tuple[Optional[PauliOperator], bool]:
        key = tuple(t.masks for t in terms)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        result: tuple[Optional[PauliOperator], bool] = (None, False)
        for m in self.candidates:
            if all(not commutes(m, t) for t in terms):
                result = (m, False)
                break
        else:
            columns = []
            for g in self.generators:
                col = 0
                for k, t in enumerate(terms):
                    if not commutes(g, t):
                        col |= 1 << k
                columns.append(col)
            combo = solve(columns, (1 << len(terms)) - 1)
            if combo is not None:
                m = PauliOperator.identity(terms[0].n_qubits)
                for i, g in enumerate(self.generators):
                    if combo >> i & 1:
                        m = multiply(m, g)
                if m.phase % 2:
                    m = m.with_phase(m.phase + 1)
                result = (m, True)
        self.cache[key] = result
        return result


def _verdict_terms(terms: Sequence[PauliOperator], source: PauliOperator, finder: _WitnessFinder, coeff=None) -> Verdict:
    if coeff is not None and terms[0].masks == source.masks and abs(abs(coeff) - 1) < 1e-9 and abs(coeff.imag) < 1e-9:
        return Verdict(EQUALS_SOURCE)
    witness, via_solve = finder.find(terms)
    if witness is None:
        return Verdict(VIOLATION)
    return Verdict(ANTICOMMUTES, witness, via_solve)


def _verdict(image: PauliSum, source: PauliOperator, finder: _WitnessFinder) -> Verdict:
    coeff = image.terms[0][0] if image.is_single else None
    return _verdict_terms(image.operators(), source, finder, coeff)


@dataclass
class Theorem2Report:
    passed: bool
    violations: list[tuple[int, str, PauliSum]]
    checked: int
    exhaustive: bool
    solved_witnesses: int

    def summary(self) -> str:
        scope = "all normalizer cosets" if self.exhaustive else "tracked logicals only"
        status = "PASS" if self.passed else f"FAIL ({len(self.violations)} violations)"
        return f"Theorem-2 condition: {status}; {self.checked} elements checked over {scope}"


def verify_theorem2(trace: VerificationTrace, code: Optional[StabilizerCode] = None, coset_cap: int = DEFAULT_COSET_CAP) -> Theorem2Report:
    """Check that every transformed normalizer element equals its source or has a witness.

    The witness search tries ``Z_j, X_j, Y_j`` and their pairwise products
    first, then solves for any anticommuting element of the original
    normalizer over GF(2).  Verdicts for the tracked logicals are stored on
    the trace.  When ``|tracked| * |Q|`` is within ``coset_cap`` every product
    of a tracked logical with a transformed stabilizer element is checked too,
    since the condition is about the whole transformed normalizer.
    """
    code = code or trace.code
    finder = _WitnessFinder(code)
    group_size = 1 << len(code.generators)
    exhaustive = len(trace.sources) * group_size <= coset_cap and 4**code.encoded_count - 1 == len(trace.sources)
    source_group = enumerate_group(code.generators) if exhaustive else None
    violations = []
    checked = 0
    solved = 0
    for snap in trace.locations:
        snap.verdicts = []
        for k, (image, source) in enumerate(zip(snap.normalizer, trace.sources)):
            v = _verdict(image, source, finder)
            snap.verdicts.append(v)
            checked += 1
            solved += v.via_solve
            if v.tag == VIOLATION:
                violations.append((snap.location, trace.source_names[k], image))
        if not exhaustive:
            continue
        images = enumerate_group(snap.stabilizer)
        for k, (image, source) in enumerate(zip(snap.normalizer, trace.sources)):
            single = image.terms[0] if image.is_single else None
            for q_img, q_src in zip(images[1:], source_group[1:]):
                if single is not None:
                    # Clifford images stay single Paulis; skip building a PauliSum
                    prod = multiply(single[1], q_img)
                    coeff = single[0] * 1j ** prod.phase
                    v = _verdict_terms([prod.with_phase(0)], multiply(source, q_src), finder, coeff)
                else:
                    v = _verdict(image * q_img, multiply(source, q_src), finder)
                checked += 1
                solved += v.via_solve
                if v.tag == VIOLATION:
                    violations.append((snap.location, f"{trace.source_names[k]}*{q_src}", image * q_img))
    return Theorem2Report(not violations, violations, checked, exhaustive, solved)


# -- error classification ---------------------------------------------------------


@dataclass
class CorrectabilityReport:
    passed: bool
    undetectable: list[tuple[int, PauliOperator]]
    in_normalizer_terms: list[tuple[int, PauliOperator]]
    correctability_failures: list[tuple[int, tuple[PauliOperator, PauliOperator]]]
    table: list[dict[str, int]]

    def summary(self) -> str:
        status = "PASS" if self.passed else f"FAIL ({len(self.undetectable)} undetectable placements)"
        return f"errors in Q stay detectable or trivial: {status}"


def verify_errors_correctable(trace: VerificationTrace, code: Optional[StabilizerCode] = None, group_cap: int = 1 << 16) -> CorrectabilityReport:
    """Classify every ``e`` in ``Q`` against the transformed code at every location.

    Failing placements are those where ``e`` commutes with the transformed
    stabilizer without belonging to it, i.e. acts as a logical operation.
    """
    code = code or trace.code
    errors = enumerate_group(code.generators, cap=group_cap)
    undetectable, in_terms, corr = [], [], []
    table = []
    for snap in trace.locations:
        counts = {ErrorClass.IN_STABILIZER: 0, ErrorClass.DETECTABLE: 0, ErrorClass.UNDETECTABLE: 0}
        term_masks = {op.masks for n in snap.normalizer for op in n.operators()}
        for e in errors:
            cls = classify_error(e, snap.stabilizer)
            counts[cls.tag] += 1
            if cls.tag == ErrorClass.UNDETECTABLE:
                undetectable.append((snap.location, e))
            if e.masks in term_masks and not e.is_identity:
                in_terms.append((snap.location, e))
        ok, pair = check_correctability(errors, snap.stabilizer)
        if not ok:
            corr.append((snap.location, pair))
        table.append(counts)
    passed = not undetectable and not corr
    return CorrectabilityReport(passed, undetectable, in_terms, corr, table)


# -- weight-1 detection audit ----------------------------------------------------------


@dataclass
class DetectionReport:
    passed: bool
    undetected: list[tuple[int, PauliOperator, str]]
    indistinguishable: list[tuple[int, PauliOperator, PauliOperator]]

    def pairs_at(self, location: int) -> list[tuple[PauliOperator, PauliOperator]]:
        return [(a, b) for loc, a, b in self.indistinguishable if loc == location]

    def summary(self) -> str:
        status = "PASS" if self.passed else f"FAIL ({len(self.undetected)} undetected placements)"
        return f"weight-1 detection: {status}; {len(self.indistinguishable)} indistinguishable pairs"


def _syndrome(p: PauliOperator, gens: Sequence[PauliOperator]) -> int:
    s = 0
    for i, g in enumerate(gens):
        if not commutes(p, g):
            s |= 1 << i
    return s


def verify_detection_only_weight1(trace: VerificationTrace) -> DetectionReport:
    """Audit single-qubit errors against the transformed code at every location.

    A weight-1 Pauli fails detection when it has zero syndrome, either as a
    logical operator (``"normalizer"``) or as a weight-1 stabilizer element
    (``"stabilizer"``).  Pairs of distinct weight-1 Paulis with the same
    nonzero syndrome whose product is not in the stabilizer are reported as
    indistinguishable: they are detected but cannot be told apart.
    """
    n = trace.code.n_qubits
    singles = [PauliOperator.single(n, q, ch) for q in range(n) for ch in "XYZ"]
    undetected, pairs = [], []
    for snap in trace.locations:
        basis = XorBasis()
        for g in snap.stabilizer:
            basis.insert(g.symplectic())
        by_syndrome: dict[int, list[PauliOperator]] = {}
        for w in singles:
            s = _syndrome(w, snap.stabilizer)
            if s == 0:
                kind = "stabilizer" if basis.contains(w.symplectic()) else "normalizer"
                undetected.append((snap.location, w, kind))
            else:
                by_syndrome.setdefault(s, []).append(w)
        for group in by_syndrome.values():
            for a, b in itertools.combinations(group, 2):
                if not basis.contains(multiply(a, b).symplectic()):
                    pairs.append((snap.location, a, b))
    return DetectionReport(not undetected, undetected, pairs)


@dataclass
class PerBlockReport:
    passed: bool
    violations: list[tuple[int, str, int, PauliOperator]]
    checked: int

    def summary(self) -> str:
        status = "PASS" if self.passed else f"FAIL ({len(self.violations)} violations)"
        return f"per-block check of the standard logicals: {status}; {self.checked} block images checked"


def verify_per_block(trace: VerificationTrace, blocks: Sequence[StabilizerCode]) -> PerBlockReport:
    """Block-local check of the standard logical generators, one block at a time.

    For each standard ``Z_j`` and ``X_j`` of the joint code and each block
    whose part of the image differs from the original, some generator of
    that block's own original normalizer must anticommute with the block
    part.  This only looks at the ``2l`` generators, not at their products
    with each other or with the transformed stabilizer; ``verify_theorem2``
    is the exhaustive version.
    """
    offsets = []
    start = 0
    for b in blocks:
        offsets.append(start)
        start += b.n_qubits
    if start != trace.code.n_qubits:
        raise ValueError("block sizes do not add up to the code size")
    count = 2 * trace.code.encoded_count
    block_norms = [b.normalizer_generators() for b in blocks]
    violations = []
    checked = 0
    for snap in trace.locations:
        for k in range(count):
            source = trace.sources[k]
            for term in snap.normalizer[k].operators():
                for bi, (off, block) in enumerate(zip(offsets, blocks)):
                    part = term.restrict(off, block.n_qubits)
                    orig = source.restrict(off, block.n_qubits)
                    checked += 1
                    if part.masks == orig.masks:
                        continue
                    if not any(not commutes(part, m) for m in block_norms[bi]):
                        violations.append((snap.location, trace.source_names[k], bi, part))
    return PerBlockReport(not violations, violations, checked)


def stabilizer_restored(trace: VerificationTrace) -> tuple[bool, list[tuple[int, PauliOperator]]]:
    """Whether every final stabilizer image is an element of the original group, sign included.

    Returns the verdict and the ``(index, image)`` pairs that fail.
    """
    code = trace.code
    gens = code.generators
    columns = [g.symplectic() for g in gens]
    bad = []
    for i, img in enumerate(trace.locations[-1].stabilizer):
        combo = solve(columns, img.symplectic())
        if combo is None:
            bad.append((i, img))
            continue
        prod = PauliOperator.identity(code.n_qubits)
        for k, g in enumerate(gens):
            if combo >> k & 1:
                prod = multiply(prod, g)
        if prod != img:
            bad.append((i, img))
    return not bad, bad


# -- bitwise CNOT on non-CSS blocks ----------------------------------------------------


@dataclass
class AppendixAReport:
    encoded_index: int
    x_bar: PauliOperator
    image: PauliOperator
    copied: PauliOperator
    copied_in_stabilizer: bool
    copied_commutes_with_stabilizer: bool
    undetectable: list[tuple[int, PauliOperator]]
    theorem2: Theorem2Report

    @property
    def violation(self) -> bool:
        return bool(self.undetectable) or not self.theorem2.passed

    def summary(self) -> str:
        lines = [
            f"I (x) X{self.encoded_index} = I (x) {self.x_bar}  ->  {self.image}",
            f"copied back into block A: {self.copied}",
            f"  in stabilizer: {self.copied_in_stabilizer}; commutes with stabilizer: {self.copied_commutes_with_stabilizer}",
            f"errors from Q that become undetectable logicals: {len(self.undetectable)}",
        ]
        for loc, e in self.undetectable[:5]:
            lines.append(f"  location {loc}: {e}")
        lines.append(self.theorem2.summary())
        return "\n".join(lines)


def reproduce_appendix_a(
    code: StabilizerCode,
    theorem2: Optional[Theorem2Report] = None,
    correctable: Optional[CorrectabilityReport] = None,
) -> AppendixAReport:
    """Bitwise CNOT between two blocks of a non-CSS code.

    Tracks ``I (x) X_j`` through the CNOTs to show the Z part of ``X_j`` being
    copied back into the control block, then runs the full verification on
    the two-block code to expose errors that turn into logical operations.
    Reports already computed for that same circuit can be passed in.
    """
    from .stabilizer import tensor_codes
    from .synthesis import bitwise_cnot

    if code.css:
        raise CssCodeGiven("bitwise CNOT preserves CSS codes; nothing to demonstrate")
    j = next((j for j, x in enumerate(code.standard_x) if x.z), None)
    if j is None:
        raise CssCodeGiven("no X logical carries a Z part")
    k = code.n_qubits
    pair = tensor_codes(code, code)
    circuit = bitwise_cnot(k)
    x_bar = code.standard_x[j]
    image = x_bar.embed(2 * k, k)
    for gate in circuit.gates:
        image = heisenberg_image(gate, image)
    copied = image.restrict(0, k)
    if theorem2 is None or correctable is None:
        trace = trace_heisenberg(circuit, pair)
        theorem2 = theorem2 or verify_theorem2(trace, pair)
        correctable = correctable or verify_errors_correctable(trace, pair)
    t2, errs = theorem2, correctable
    return AppendixAReport(
        encoded_index=j,
        x_bar=x_bar,
        image=image,
        copied=copied,
        copied_in_stabilizer=code.contains(copied),
        copied_commutes_with_stabilizer=all(commutes(copied, g) for g in code.generators),
        undetectable=errs.undetectable,
        theorem2=t2,
    )


# -- text ledger -------------------------------------------------------------------------


def _fmt_sum(s: PauliSum) -> str:
    if s.is_single:
        try:
            return str(s.single())
        except ValueError:
            pass
    return str(s)


def format_ledger(trace: VerificationTrace, index: int = 0) -> str:
    """Two-row ledger for one tracked logical: its image, then the verdict, per location."""
    name = trace.source_names[index]
    lines = [f"ledger for {name} = {trace.sources[index]}"]
    for snap in trace.locations:
        gate = "start" if snap.location == 0 else f"after gate {snap.location - 1}"
        verdict = snap.verdicts[index] if snap.verdicts else None
        lines.append(f"  [{snap.location:>2}] {gate:<14} {_fmt_sum(snap.normalizer[index]):<40} {verdict or ''}")
    return "\n".join(lines)
