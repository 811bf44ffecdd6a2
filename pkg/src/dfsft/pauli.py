"""Bit-packed n-qubit Pauli operators, small Pauli sums, and conjugation rules.

Masks are Python ints.  Qubit ``k`` (the ``k``-th letter of the string form,
counting from the left) lives in bit ``n - 1 - k``, so the masks read like the
label and line up with computational-basis indices of the statevector.

Phase convention: the letters are the Hermitian Pauli matrices and products
follow the cyclic rule ``XY = iZ``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

__all__ = [
    "PauliOperator",
    "PauliSum",
    "PauliParseError",
    "pauli_from_string",
    "multiply",
    "commutes",
    "weight",
    "conjugate_by_quarter",
    "conjugate_by_rotation",
    "conjugate_by_clifford1q",
    "conjugate_by_cnot",
    "COEFF_TOL",
]

# Terms with smaller magnitude are dropped from a PauliSum.
COEFF_TOL = 1e-12

_LETTERS = "IXZY"  # index = x + 2 z
_PREFIXES = {"": 0, "+": 0, "-": 2, "+i": 1, "i": 1, "-i": 3}
_PHASE_STR = {0: "", 1: "+i", 2: "-", 3: "-i"}
_I_POW = (1, 1j, -1, -1j)


class PauliParseError(ValueError):
    """Raised for malformed Pauli labels; ``position`` indexes the bad char."""

    def __init__(self, label: str, position: int, reason: str = "invalid character"):
        self.label = label
        self.position = position
        super().__init__(f"{reason} {label[position:position + 1]!r} at position {position} in {label!r}")


@dataclass(frozen=True)
class PauliOperator:
    """``i**phase`` times a tensor product of Hermitian single-qubit Paulis."""

    n_qubits: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        full = (1 << self.n_qubits) - 1
        if self.x & ~full or self.z & ~full or self.x < 0 or self.z < 0:
            raise ValueError("mask wider than n_qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_label(cls, label: str) -> PauliOperator:
        return pauli_from_string(label)

    @classmethod
    def identity(cls, n_qubits: int) -> PauliOperator:
        return cls(n_qubits, 0, 0, 0)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, letter: str) -> PauliOperator:
        """The one-qubit Pauli ``letter`` on ``qubit``, identity elsewhere."""
        idx = _LETTERS.index(letter)
        bit = 1 << (n_qubits - 1 - qubit)
        return cls(n_qubits, bit if idx & 1 else 0, bit if idx & 2 else 0)

    @classmethod
    def from_letters(cls, n_qubits: int, letters: dict[int, str], phase: int = 0) -> PauliOperator:
        x = z = 0
        for q, letter in letters.items():
            idx = _LETTERS.index(letter)
            bit = 1 << (n_qubits - 1 - q)
            if idx & 1:
                x |= bit
            if idx & 2:
                z |= bit
        return cls(n_qubits, x, z, phase)

    # -- inspection -------------------------------------------------------
    def _bit(self, qubit: int) -> int:
        if not 0 <= qubit < self.n_qubits:
            raise IndexError(f"qubit {qubit} out of range for {self.n_qubits} qubits")
        return 1 << (self.n_qubits - 1 - qubit)

    def letter(self, qubit: int) -> str:
        bit = self._bit(qubit)
        return _LETTERS[bool(self.x & bit) + 2 * bool(self.z & bit)]

    @property
    def letters(self) -> str:
        return "".join(self.letter(k) for k in range(self.n_qubits))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k in range(self.n_qubits) if (self.x | self.z) >> (self.n_qubits - 1 - k) & 1)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def masks(self) -> tuple[int, int]:
        return (self.x, self.z)

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def coefficient(self) -> complex:
        return _I_POW[self.phase]

    def symplectic(self) -> int:
        """``x`` in the high ``n`` bits, ``z`` in the low ``n`` bits."""
        return (self.x << self.n_qubits) | self.z

    def unsigned(self) -> PauliOperator:
        return PauliOperator(self.n_qubits, self.x, self.z, 0)

    def with_phase(self, phase: int) -> PauliOperator:
        return PauliOperator(self.n_qubits, self.x, self.z, phase)

    def __neg__(self) -> PauliOperator:
        return self.with_phase(self.phase + 2)

    def __str__(self) -> str:
        return _PHASE_STR[self.phase] + self.letters

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"

    # -- algebra ----------------------------------------------------------
    def __mul__(self, other: PauliOperator) -> PauliOperator:
        if isinstance(other, PauliOperator):
            return multiply(self, other)
        return NotImplemented

    def commutes(self, other: PauliOperator) -> bool:
        return commutes(self, other)

    def adjoint(self) -> PauliOperator:
        return self.with_phase(-self.phase)

    def tensor(self, other: PauliOperator) -> PauliOperator:
        """Kronecker product; ``self`` occupies the leading qubits."""
        m = other.n_qubits
        return PauliOperator(
            self.n_qubits + m,
            (self.x << m) | other.x,
            (self.z << m) | other.z,
            self.phase + other.phase,
        )

    def embed(self, n_qubits: int, offset: int) -> PauliOperator:
        """Place this operator on qubits ``offset .. offset + n - 1`` of a larger register."""
        shift = n_qubits - offset - self.n_qubits
        if shift < 0 or offset < 0:
            raise ValueError("embedding does not fit")
        return PauliOperator(n_qubits, self.x << shift, self.z << shift, self.phase)

    def restrict(self, offset: int, length: int) -> PauliOperator:
        """Letters on qubits ``offset .. offset + length - 1`` (phase dropped)."""
        shift = self.n_qubits - offset - length
        full = (1 << length) - 1
        return PauliOperator(length, (self.x >> shift) & full, (self.z >> shift) & full)

    def permute(self, perm: list[int] | tuple[int, ...]) -> PauliOperator:
        """Move the letter on qubit ``perm[k]`` to qubit ``k``."""
        letters = {k: self.letter(src) for k, src in enumerate(perm)}
        return PauliOperator.from_letters(self.n_qubits, letters, self.phase)


def pauli_from_string(label: str, phase: int | None = None) -> PauliOperator:
    """Parse ``[+|-|+i|-i]LETTERS``; an explicit ``phase`` adds to the prefix."""
    if not isinstance(label, str):
        raise TypeError("label must be a string")
    text = label.strip()
    start = 0
    for prefix in ("+i", "-i", "+", "-", "i"):
        if text.startswith(prefix) and len(text) > len(prefix) and text[len(prefix)] in "IXYZ":
            start = len(prefix)
            break
    body = text[start:]
    if not body:
        raise PauliParseError(label, 0, "empty Pauli label")
    n = len(body)
    x = z = 0
    for k, ch in enumerate(body):
        if ch not in "IXYZ":
            raise PauliParseError(label, start + k)
        bit = 1 << (n - 1 - k)
        if ch in "XY":
            x |= bit
        if ch in "ZY":
            z |= bit
    p = _PREFIXES[text[:start]] + (phase or 0)
    return PauliOperator(n, x, z, p)


def _check_sizes(a: PauliOperator, b: PauliOperator) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"length mismatch: {a.n_qubits} vs {b.n_qubits} qubits")


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Exact product ``a @ b``.

    Each letter is ``i**(x z) X**x Z**z``; moving ``Z**za`` past ``X**xb``
    costs ``(-1)**(za . xb)``.
    """
    _check_sizes(a, b)
    x = a.x ^ b.x
    z = a.z ^ b.z
    phase = (
        a.phase
        + b.phase
        + (a.x & a.z).bit_count()
        + (b.x & b.z).bit_count()
        - (x & z).bit_count()
        + 2 * (a.z & b.x).bit_count()
    )
    return PauliOperator(a.n_qubits, x, z, phase)


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    _check_sizes(a, b)
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2 == 0


def weight(a: PauliOperator) -> int:
    return a.weight


class PauliSum:
    """Linear combination of Pauli operators with complex coefficients.

    Term phases are absorbed into the coefficients, so every stored operator
    has ``phase == 0`` and terms are keyed by their masks.  Iteration order is
    canonical: sorted by ``(x, z)``.
    """

    __slots__ = ("n_qubits", "_terms")

    def __init__(self, n_qubits: int, terms: Iterable[tuple[complex, PauliOperator]] = ()):
        acc: dict[tuple[int, int], complex] = {}
        for coeff, op in terms:
            if op.n_qubits != n_qubits:
                raise ValueError(f"length mismatch: {op.n_qubits} vs {n_qubits} qubits")
            key = (op.x, op.z)
            acc[key] = acc.get(key, 0) + complex(coeff) * _I_POW[op.phase]
        self.n_qubits = n_qubits
        self._terms = tuple(
            (c, PauliOperator(n_qubits, k[0], k[1])) for k, c in sorted(acc.items()) if abs(c) >= COEFF_TOL
        )

    @classmethod
    def from_operator(cls, op: PauliOperator, coeff: complex = 1.0) -> PauliSum:
        return cls(op.n_qubits, [(coeff, op)])

    @classmethod
    def coerce(cls, value: Union[PauliSum, PauliOperator]) -> PauliSum:
        return value if isinstance(value, PauliSum) else cls.from_operator(value)

    @property
    def terms(self) -> tuple[tuple[complex, PauliOperator], ...]:
        return self._terms

    def operators(self) -> list[PauliOperator]:
        return [op for _, op in self._terms]

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[complex, PauliOperator]]:
        return iter(self._terms)

    @property
    def is_single(self) -> bool:
        return len(self._terms) == 1

    def single(self) -> PauliOperator:
        """The lone term as an operator with its unit-modulus phase folded in."""
        if len(self._terms) != 1:
            raise ValueError(f"PauliSum has {len(self._terms)} terms, expected 1")
        coeff, op = self._terms[0]
        for k, unit in enumerate(_I_POW):
            if abs(coeff - unit) < 1e-9:
                return op.with_phase(k)
        raise ValueError(f"coefficient {coeff} is not a power of i")

    def scale(self, factor: complex) -> PauliSum:
        return PauliSum(self.n_qubits, [(c * factor, op) for c, op in self._terms])

    def map_terms(self, fn) -> PauliSum:
        """Apply ``fn(op) -> PauliSum | PauliOperator`` termwise and resum."""
        out: list[tuple[complex, PauliOperator]] = []
        for coeff, op in self._terms:
            img = fn(op)
            if isinstance(img, PauliOperator):
                out.append((coeff, img))
            else:
                out.extend((coeff * c, o) for c, o in img.terms)
        return PauliSum(self.n_qubits, out)

    def __mul__(self, other):
        if isinstance(other, PauliOperator):
            return PauliSum(self.n_qubits, [(c, multiply(op, other)) for c, op in self._terms])
        if isinstance(other, PauliSum):
            return PauliSum(
                self.n_qubits, [(c1 * c2, multiply(o1, o2)) for c1, o1 in self._terms for c2, o2 in other._terms]
            )
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, PauliOperator):
            return PauliSum(self.n_qubits, [(c, multiply(other, op)) for c, op in self._terms])
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        return NotImplemented

    def __add__(self, other: PauliSum) -> PauliSum:
        return PauliSum(self.n_qubits, list(self._terms) + list(PauliSum.coerce(other).terms))

    def __neg__(self) -> PauliSum:
        return self.scale(-1)

    def allclose(self, other: Union[PauliSum, PauliOperator], atol: float = 1e-12) -> bool:
        other = PauliSum.coerce(other)
        diff = self + other.scale(-1)
        return all(abs(c) <= atol for c, _ in diff.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (PauliSum, PauliOperator)):
            return self.n_qubits == other.n_qubits and self.allclose(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n_qubits, tuple(op.masks for op in self.operators())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({_fmt_coeff(c)}){op.letters}" for c, op in self._terms)

    def __repr__(self) -> str:
        return f"PauliSum({self})"


def _fmt_coeff(c: complex) -> str:
    re, im = round(c.real, 12), round(c.imag, 12)
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}j"
    return f"{re:g}{im:+g}j"


Target = Union[PauliSum, PauliOperator]


def _same_type(result: PauliSum, like: Target) -> Target:
    if isinstance(like, PauliOperator):
        return result.single()
    return result


def _check_target(axis: PauliOperator, target: Target) -> None:
    if axis.n_qubits != target.n_qubits:
        raise ValueError(f"length mismatch: {axis.n_qubits} vs {target.n_qubits} qubits")


def conjugate_by_quarter(axis: PauliOperator, sign: int, target: Target) -> Target:
    """``exp(-i s pi/4 A) B exp(+i s pi/4 A)`` for Pauli ``A`` and ``s = sign``.

    Commuting terms are untouched; anticommuting terms become ``s * i * B A``
    (for ``|s| = 1``).  ``sign`` may be any integer number of quarter turns.
    Single operators stay single operators.
    """
    _check_target(axis, target)
    if not axis.is_hermitian:
        raise ValueError("rotation axis must be Hermitian")
    k = sign % 4
    # exp(-i k pi/4 A) B exp(i k pi/4 A) = B (cos k pi/2) + i B A (sin k pi/2) when {A, B} = 0
    cos_k, sin_k = (1, 0, -1, 0)[k], (0, 1, 0, -1)[k]

    def image(op: PauliOperator) -> PauliOperator:
        if commutes(axis, op):
            return op
        if sin_k == 0:
            return op.with_phase(op.phase + (0 if cos_k == 1 else 2))
        return multiply(op, axis).with_phase(multiply(op, axis).phase + (1 if sin_k == 1 else 3))

    if isinstance(target, PauliOperator):
        return image(target)
    return target.map_terms(image)


def conjugate_by_rotation(axis: PauliOperator, angle: float, target: Target) -> PauliSum:
    """``exp(-i phi A) B exp(+i phi A)`` for a Pauli axis and ``phi = angle``.

    Anticommuting terms become ``B cos(2 phi) + i B A sin(2 phi)``.  The
    Heisenberg image of ``B`` under the gate ``exp(i phi A)`` is therefore
    ``conjugate_by_rotation(A, -phi, B)``.
    """
    _check_target(axis, target)
    if not axis.is_hermitian:
        raise ValueError("rotation axis must be Hermitian")
    c, s = math.cos(2 * angle), math.sin(2 * angle)
    # snap to exact values so pi/4 multiples do not leave 1e-17 debris
    c = 0.0 if abs(c) < 1e-15 else c
    s = 0.0 if abs(s) < 1e-15 else s
    sign = -1 if axis.phase == 2 else 1

    def image(op: PauliOperator) -> PauliSum:
        if commutes(axis, op):
            return PauliSum.from_operator(op)
        return PauliSum(op.n_qubits, [(c, op), (1j * s * sign, multiply(op, axis.unsigned()))])

    return PauliSum.coerce(target).map_terms(image)


# conjugation P -> G P G^dagger, per letter: (new letter, extra phase in quarter turns)
_CLIFFORD_1Q = {
    "R": {"X": ("Z", 0), "Z": ("X", 0), "Y": ("Y", 2)},
    "Q": {"Z": ("X", 0), "X": ("Y", 0), "Y": ("Z", 0)},
    "Qdg": {"X": ("Z", 0), "Y": ("X", 0), "Z": ("Y", 0)},
}


def conjugate_by_clifford1q(gate: str, qubit: int, target: Target) -> Target:
    """Image ``G P G^dagger`` under a single-qubit Clifford.

    ``R`` is the Hadamard, ``Q = [[1, -i], [1, i]] / sqrt(2)`` maps
    ``Z -> X -> Y -> Z``, and ``Qdg`` is its inverse.
    """
    try:
        table = _CLIFFORD_1Q[gate]
    except KeyError:
        raise ValueError(f"unknown single-qubit Clifford tag {gate!r}") from None
    if not 0 <= qubit < target.n_qubits:
        raise IndexError(f"qubit {qubit} out of range for {target.n_qubits} qubits")

    def image(op: PauliOperator) -> PauliOperator:
        letter = op.letter(qubit)
        if letter == "I":
            return op
        new, extra = table[letter]
        bit = 1 << (op.n_qubits - 1 - qubit)
        x = (op.x & ~bit) | (bit if new in "XY" else 0)
        z = (op.z & ~bit) | (bit if new in "ZY" else 0)
        return PauliOperator(op.n_qubits, x, z, op.phase + extra)

    if isinstance(target, PauliOperator):
        return image(target)
    return target.map_terms(image)


def conjugate_by_cnot(control: int, target_qubit: int, p: Target) -> Target:
    """Image ``U P U^dagger`` under CNOT(control -> target_qubit)."""
    n = p.n_qubits
    if control == target_qubit:
        raise ValueError("CNOT control and target coincide")
    for q in (control, target_qubit):
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} out of range for {n} qubits")
    cb = n - 1 - control
    tb = n - 1 - target_qubit

    def image(op: PauliOperator) -> PauliOperator:
        xc, zc = op.x >> cb & 1, op.z >> cb & 1
        xt, zt = op.x >> tb & 1, op.z >> tb & 1
        # Aaronson-Gottesman sign rule for Hermitian letters
        flip = xc & zt & (xt ^ zc ^ 1)
        x = op.x ^ (xc << tb)
        z = op.z ^ (zt << cb)
        return PauliOperator(n, x, z, op.phase + 2 * flip)

    if isinstance(p, PauliOperator):
        return image(p)
    return p.map_terms(image)


def phase_to_complex(phase: int) -> complex:
    return _I_POW[phase % 4]
