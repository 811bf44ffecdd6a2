"""Error subgroups, their codespaces, and the standard-form logical operators.

The group ``Q`` generated by the supplied Paulis plays both roles at once:
its elements are the errors, and its joint +1 eigenspace is the protected
subspace that stores ``l = K - rank`` encoded qubits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .dense import DEFAULT_DENSE_CAP, apply_pauli, check_dense_cap
from .gf2 import XorBasis
from .pauli import PauliOperator, commutes, multiply, pauli_from_string

__all__ = [
    "DEFAULT_GROUP_CAP",
    "StabilizerError",
    "NonAbelianError",
    "DependentGeneratorsError",
    "MinusIdentityError",
    "CapExceededError",
    "StabilizerCode",
    "CodeSpace",
    "ErrorClass",
    "validate",
    "enumerate_group",
    "codespace_projector",
    "extract_codewords",
    "logical_basis",
    "standard_form_normalizer",
    "is_equivalent_normalizer",
    "in_group",
    "classify_error",
    "check_correctability",
    "tensor_codes",
]

DEFAULT_GROUP_CAP = 1 << 20

PauliLike = Union[PauliOperator, str]


class StabilizerError(ValueError):
    """Base class for invalid generator sets."""


class NonAbelianError(StabilizerError):
    def __init__(self, i: int, j: int, a: PauliOperator, b: PauliOperator):
        self.pair = (i, j)
        super().__init__(f"generators {i} ({a}) and {j} ({b}) anticommute")


class DependentGeneratorsError(StabilizerError):
    def __init__(self, index: int, combo: Sequence[int]):
        self.index = index
        self.combo = tuple(combo)
        super().__init__(f"generator {index} is the product of generators {list(self.combo)}")


class MinusIdentityError(StabilizerError):
    def __init__(self, detail: str):
        super().__init__(f"-I lies in the generated group: {detail}")


class CapExceededError(ValueError):
    """An enumeration or dense construction would exceed its configured cap."""


def _as_pauli(p: PauliLike) -> PauliOperator:
    return pauli_from_string(p) if isinstance(p, str) else p


@dataclass(frozen=True)
class StabilizerCode:
    """A validated Abelian Pauli subgroup plus its standard-form logicals.

    ``permutation`` lists the original qubits in standard-form order: the
    ``l`` base qubits first, then the ``r`` X-pivot qubits, then the rest.
    """

    n_qubits: int
    generators: tuple[PauliOperator, ...]
    encoded_count: int
    standard_z: tuple[PauliOperator, ...]
    standard_x: tuple[PauliOperator, ...]
    css: bool
    r: int
    permutation: tuple[int, ...] = ()
    name: str = field(default="", compare=False)

    @property
    def K(self) -> int:
        return self.n_qubits

    @property
    def l(self) -> int:  # noqa: E743
        return self.encoded_count

    @property
    def base_qubits(self) -> tuple[int, ...]:
        return self.permutation[: self.encoded_count]

    @cached_property
    def _basis(self) -> XorBasis:
        basis = XorBasis()
        for g in self.generators:
            basis.insert(g.symplectic())
        return basis

    def contains(self, p: PauliOperator) -> bool:
        """Mask-level (phase-insensitive) membership in the group."""
        return self._basis.contains(p.symplectic())

    def standard_y(self, j: int) -> PauliOperator:
        """``Y_j = i X_j Z_j``, Hermitian."""
        xz = multiply(self.standard_x[j], self.standard_z[j])
        return xz.with_phase(xz.phase + 1)

    def logical_operators(self) -> list[PauliOperator]:
        """All ``4**l - 1`` nontrivial products of the standard logicals, Hermitian."""
        out = []
        for word in itertools.product(range(4), repeat=self.encoded_count):
            if not any(word):
                continue
            p = PauliOperator.identity(self.n_qubits)
            for j, w in enumerate(word):
                if w:
                    factor = (None, self.standard_x[j], self.standard_z[j], self.standard_y(j))[w]
                    p = multiply(p, factor)
            out.append(p)
        return out

    def normalizer_generators(self) -> list[PauliOperator]:
        return list(self.generators) + list(self.standard_z) + list(self.standard_x)

    def __str__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        label = f"{self.name}: " if self.name else ""
        return f"{label}[[{self.n_qubits},{self.encoded_count}]] <{gens}>"


@dataclass(frozen=True)
class CodeSpace:
    n_qubits: int
    basis: tuple[np.ndarray, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        """Basis vectors as columns."""
        return np.column_stack(self.basis) if self.basis else np.zeros((1 << self.n_qubits, 0), complex)


@dataclass(frozen=True)
class ErrorClass:
    tag: str  # "InStabilizer" | "Detectable" | "UndetectableLogical"
    witness: Optional[PauliOperator] = None

    IN_STABILIZER = "InStabilizer"
    DETECTABLE = "Detectable"
    UNDETECTABLE = "UndetectableLogical"


# -- validation ---------------------------------------------------------------


def validate(generators: Iterable[PauliLike], name: str = "") -> StabilizerCode:
    """Check an Abelian generator set and compute its standard form.

    Raises:
        NonAbelianError: two generators anticommute.
        MinusIdentityError: the group contains ``-I`` (or ``+-iI``).
        DependentGeneratorsError: a generator is a product of earlier ones.
    """
    gens = tuple(_as_pauli(g) for g in generators)
    if not gens:
        raise StabilizerError("at least one generator is required")
    n = gens[0].n_qubits
    for k, g in enumerate(gens):
        if g.n_qubits != n:
            raise StabilizerError(f"generator {k} has {g.n_qubits} qubits, expected {n}")
    for i, j in itertools.combinations(range(len(gens)), 2):
        if not commutes(gens[i], gens[j]):
            raise NonAbelianError(i, j, gens[i], gens[j])
    for k, g in enumerate(gens):
        if g.phase % 2:
            raise MinusIdentityError(f"generator {k} ({g}) squares to -I")
    basis = XorBasis()
    for k, g in enumerate(gens):
        independent, combo = basis.insert(g.symplectic())
        if independent:
            continue
        members = [i for i in range(k) if combo >> i & 1]
        prod = g
        for i in members:
            prod = multiply(prod, gens[i])
        if prod.phase != 0:
            raise MinusIdentityError(f"generator {k} ({g}) times generators {members} gives {prod}")
        raise DependentGeneratorsError(k, members)

    z_ops, x_ops, r, perm, css = _standard_form(gens)
    return StabilizerCode(
        n_qubits=n,
        generators=gens,
        encoded_count=n - len(gens),
        standard_z=tuple(z_ops),
        standard_x=tuple(x_ops),
        css=css,
        r=r,
        permutation=tuple(perm),
        name=name,
    )


def _col_bit(n: int, col: int) -> int:
    return 1 << (n - 1 - col)


def _standard_form(gens: Sequence[PauliOperator]):
    """Symplectic Gaussian elimination into standard form.

    Pivot columns are searched in the order ``l, l+1, ..., K-1, 0, ..., l-1``
    so that, whenever possible, the first ``l`` qubits are left over as the
    base qubits of the encoded qubits.  A code already written in standard
    layout (base qubits, then the X block, then the Z block) is returned
    unchanged.  Returns ``(Z_bar list, X_bar list, r, permutation, css)``.
    """
    n = gens[0].n_qubits
    l = n - len(gens)
    order = list(range(l, n)) + list(range(l))
    rows = [[g.x, g.z] for g in gens]

    # X block: reduced echelon form of the X parts
    x_pivots: list[int] = []
    type1: list[list[int]] = []
    remaining = rows[:]
    for col in order:
        bit = _col_bit(n, col)
        hit = next((row for row in remaining if row[0] & bit), None)
        if hit is None:
            continue
        remaining = [row for row in remaining if row is not hit]
        for row in remaining + type1:
            if row[0] & bit:
                row[0] ^= hit[0]
                row[1] ^= hit[1]
        type1.append(hit)
        x_pivots.append(col)
    r = len(x_pivots)

    # Z block over the non-pivot columns for the pure-Z rows
    type2: list[list[int]] = []
    z_pivots: list[int] = []
    for col in order:
        if col in x_pivots:
            continue
        bit = _col_bit(n, col)
        hit = next((row for row in remaining if row[1] & bit), None)
        if hit is None:
            continue
        remaining = [row for row in remaining if row is not hit]
        for row in remaining + type2:
            if row[1] & bit:
                row[1] ^= hit[1]
        type2.append(hit)
        z_pivots.append(col)
    assert not remaining, "rank deficiency should have been caught by validation"

    # clear the Z pivots of the X-type rows using the pure-Z rows
    for row in type1:
        for col, zrow in zip(z_pivots, type2):
            if row[1] & _col_bit(n, col):
                row[1] ^= zrow[1]

    base = [c for c in range(n) if c not in x_pivots and c not in z_pivots]
    z_ops, x_ops = [], []
    for b in base:
        bb = _col_bit(n, b)
        zmask = bb
        xmask = bb
        xz = 0
        for col, row in zip(x_pivots, type1):
            if row[0] & bb:
                zmask |= _col_bit(n, col)
            if row[1] & bb:
                xz |= _col_bit(n, col)
        for col, row in zip(z_pivots, type2):
            if row[1] & bb:
                xmask |= _col_bit(n, col)
        z_ops.append(PauliOperator(n, 0, zmask))
        x_ops.append(PauliOperator(n, xmask, xz))

    rank_x = r
    z_basis = XorBasis()
    for g in gens:
        z_basis.insert(g.z)
    css = rank_x + z_basis.rank == len(gens)
    perm = base + x_pivots + z_pivots
    return z_ops, x_ops, r, perm, css


def standard_form_normalizer(code: StabilizerCode):
    """``(standard_z, standard_x, r)`` as computed during validation."""
    return list(code.standard_z), list(code.standard_x), code.r


# -- group enumeration and membership -------------------------------------------


def _generators_of(code_or_gens) -> tuple[PauliOperator, ...]:
    if isinstance(code_or_gens, StabilizerCode):
        return code_or_gens.generators
    return tuple(_as_pauli(g) for g in code_or_gens)


def enumerate_group(code_or_gens, cap: int = DEFAULT_GROUP_CAP) -> list[PauliOperator]:
    """All ``2**m`` generator-subset products; element ``s`` uses generators in bitmask ``s``.

    The identity comes first and phases are kept explicitly.
    """
    gens = _generators_of(code_or_gens)
    if (1 << len(gens)) > cap:
        raise CapExceededError(f"group of size 2^{len(gens)} exceeds the enumeration cap {cap}")
    elements = [PauliOperator.identity(gens[0].n_qubits)]
    for g in gens:
        elements.extend([multiply(e, g) for e in elements])
    return elements


def in_group(p: PauliOperator, code_or_gens) -> bool:
    """Phase-insensitive membership, by GF(2) reduction of the symplectic vector."""
    if isinstance(code_or_gens, StabilizerCode):
        return code_or_gens.contains(p)
    basis = XorBasis()
    for g in _generators_of(code_or_gens):
        basis.insert(g.symplectic())
    return basis.contains(p.symplectic())


def is_equivalent_normalizer(a: PauliLike, b: PauliLike, code: StabilizerCode) -> bool:
    """True iff ``a b`` lies in the stabilizer group up to a phase."""
    a, b = _as_pauli(a), _as_pauli(b)
    return code.contains(multiply(a, b))


# -- codespace ------------------------------------------------------------------


def _project(vec: np.ndarray, gens: Sequence[PauliOperator]) -> np.ndarray:
    """Apply ``prod (I + g) / 2`` over commuting Hermitian generators."""
    for g in gens:
        vec = 0.5 * (vec + apply_pauli(g, vec))
    return vec


def codespace_projector(code: StabilizerCode, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Dense ``P = (1/|Q|) sum_q q``, built as ``prod_g (I + g)/2``."""
    if code.n_qubits > cap:
        raise CapExceededError(f"{code.n_qubits} qubits exceeds the dense cap of {cap}")
    dim = 1 << code.n_qubits
    return _project(np.eye(dim, dtype=complex), code.generators)


def _basis_state_survives(i: int, gens: Sequence[PauliOperator]) -> bool:
    # a diagonal generator with eigenvalue -1 on |i> kills the projection outright
    for g in gens:
        if g.x == 0 and ((g.z & i).bit_count() + g.phase // 2) % 2:
            return False
    return True


def _gram_schmidt_scan(n: int, gens: Sequence[PauliOperator], want: int, projector=None, tol: float = 1e-8):
    dim = 1 << n
    basis: list[np.ndarray] = []
    for i in range(dim):
        if len(basis) == want:
            break
        if projector is not None:
            v = np.array(projector[:, i], dtype=complex)
        else:
            if not _basis_state_survives(i, gens):
                continue
            e = np.zeros(dim, dtype=complex)
            e[i] = 1.0
            v = _project(e, gens)
        for b in basis:
            v = v - np.vdot(b, v) * b
        norm = np.linalg.norm(v)
        if norm > tol:
            basis.append(v / norm)
    return basis


def extract_codewords(projector: Optional[np.ndarray], code: StabilizerCode, cap: int = DEFAULT_DENSE_CAP) -> CodeSpace:
    """Orthonormal codespace basis from projecting basis states in index order.

    ``projector`` may be ``None``, in which case each projection is computed
    directly from the generators without forming the dense matrix.

    Raises:
        ValueError: the span found does not have dimension ``2**l``.
    """
    check_dense_cap(code.n_qubits, cap)
    want = 1 << code.encoded_count
    basis = _gram_schmidt_scan(code.n_qubits, code.generators, want, projector)
    if len(basis) != want:
        raise ValueError(f"found {len(basis)} codewords, expected {want}")
    return CodeSpace(code.n_qubits, tuple(basis))


def logical_basis(code: StabilizerCode, cap: int = DEFAULT_DENSE_CAP) -> CodeSpace:
    """Codewords aligned with the standard-form logical frame.

    ``|0_L>`` is the joint +1 eigenvector of the group and every ``Z_j``;
    ``|x_L> = prod_j X_j**x_j |0_L>`` with encoded qubit 0 as the most
    significant bit of ``x``.  Encoded matrices are expressed in this basis.
    """
    check_dense_cap(code.n_qubits, cap)
    gens = list(code.generators) + list(code.standard_z)
    zero = _gram_schmidt_scan(code.n_qubits, gens, 1)
    if not zero:
        raise ValueError("no joint +1 eigenvector of the stabilizer and Z logicals")
    l = code.encoded_count
    states = []
    for x in range(1 << l):
        v = zero[0]
        for j in range(l):
            if x >> (l - 1 - j) & 1:
                v = apply_pauli(code.standard_x[j], v)
        states.append(v)
    return CodeSpace(code.n_qubits, tuple(states))


# -- error classification -------------------------------------------------------


def classify_error(
    e: PauliLike,
    stab_gens: Sequence[PauliOperator],
    norm_elems: Optional[Sequence[PauliOperator]] = None,
) -> ErrorClass:
    """Sort ``e`` into one of the three exclusive classes relative to a stabilizer.

    ``Detectable`` carries the first generator that anticommutes with ``e``.
    ``UndetectableLogical`` carries, when ``norm_elems`` is given, the first
    of them that ``e`` anticommutes with (showing it acts on the encoded data).
    """
    e = _as_pauli(e)
    if in_group(e, stab_gens):
        return ErrorClass(ErrorClass.IN_STABILIZER)
    for g in stab_gens:
        if not commutes(e, g):
            return ErrorClass(ErrorClass.DETECTABLE, g)
    witness = None
    for m in norm_elems or ():
        if not commutes(e, m):
            witness = m
            break
    return ErrorClass(ErrorClass.UNDETECTABLE, witness)


def check_correctability(errors: Sequence[PauliLike], stab_gens: Sequence[PauliOperator]):
    """Every pairwise product ``a^dagger b`` must be in the group or detectable.

    Returns ``(True, None)`` or ``(False, (a, b))`` for the first failing pair.
    """
    # Membership and commutation ignore phases, so the product is the XOR of symplectic vectors.
    errs = [_as_pauli(e) for e in errors]
    basis = XorBasis()
    for g in stab_gens:
        basis.insert(g.symplectic())
    n = errs[0].n_qubits if errs else 0
    low = (1 << n) - 1
    # swapped halves: the symplectic form is the parity of v & swap(g)
    swapped = [((g.symplectic() & low) << n) | (g.symplectic() >> n) for g in stab_gens]
    vecs = [e.symplectic() for e in errs]
    seen: dict[int, bool] = {}
    for i, va in enumerate(vecs):
        for j in range(i, len(vecs)):
            key = va ^ vecs[j]
            ok = seen.get(key)
            if ok is None:
                ok = basis.contains(key) or any((key & w).bit_count() & 1 for w in swapped)
                seen[key] = ok
            if not ok:
                return False, (errs[i], errs[j])
    return True, None


def tensor_codes(a: StabilizerCode, b: StabilizerCode) -> StabilizerCode:
    """Two independent blocks side by side, with each block's own logicals.

    Block ``a`` occupies the leading qubits.  Encoded qubits of ``a`` come
    first.  The standard-form data are embedded rather than recomputed so the
    logical frame stays block-local.
    """
    n = a.n_qubits + b.n_qubits
    gens = [g.embed(n, 0) for g in a.generators] + [g.embed(n, a.n_qubits) for g in b.generators]
    checked = validate(gens)
    return StabilizerCode(
        n_qubits=n,
        generators=checked.generators,
        encoded_count=a.encoded_count + b.encoded_count,
        standard_z=tuple(z.embed(n, 0) for z in a.standard_z) + tuple(z.embed(n, a.n_qubits) for z in b.standard_z),
        standard_x=tuple(x.embed(n, 0) for x in a.standard_x) + tuple(x.embed(n, a.n_qubits) for x in b.standard_x),
        css=a.css and b.css,
        r=a.r + b.r,
        permutation=a.base_qubits
        + tuple(q + a.n_qubits for q in b.base_qubits)
        + a.permutation[a.encoded_count :]
        + tuple(q + a.n_qubits for q in b.permutation[b.encoded_count :]),
        name=f"{a.name}x{b.name}" if a.name or b.name else "",
    )
