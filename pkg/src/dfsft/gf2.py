"""Linear algebra over GF(2) with rows packed into Python ints."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["XorBasis", "rank", "solve"]


@dataclass
class XorBasis:
    """Incremental echelon basis that remembers how each row was formed.

    ``combos[k]`` is a bitmask over insertion indices whose XOR equals
    ``rows[k]``, so a reduction can be traced back to the inputs.
    """

    rows: dict[int, int] = field(default_factory=dict)  # pivot bit -> row
    combos: dict[int, int] = field(default_factory=dict)  # pivot bit -> insertion combo
    count: int = 0

    def reduce(self, vec: int) -> tuple[int, int]:
        """Return ``(residual, combo)`` with ``vec = residual ^ XOR(inputs in combo)``."""
        combo = 0
        residual = 0
        while vec:
            top = vec.bit_length() - 1
            row = self.rows.get(top)
            if row is None:
                residual |= 1 << top
                vec ^= 1 << top
            else:
                vec ^= row
                combo ^= self.combos[top]
        return residual, combo

    def insert(self, vec: int) -> tuple[bool, int]:
        """Add ``vec`` as input number ``count``.

        Returns ``(independent, combo)``; for a dependent vector ``combo``
        lists the earlier inputs whose XOR equals it.
        """
        index = self.count
        self.count += 1
        combo = 1 << index
        while vec:
            top = vec.bit_length() - 1
            row = self.rows.get(top)
            if row is None:
                self.rows[top] = vec
                self.combos[top] = combo
                return True, 0
            vec ^= row
            combo ^= self.combos[top]
        return False, combo & ~(1 << index)

    def contains(self, vec: int) -> bool:
        return self.reduce(vec)[0] == 0

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(rows) -> int:
    basis = XorBasis()
    for r in rows:
        basis.insert(r)
    return basis.rank


def solve(columns: list[int], rhs: int) -> int | None:
    """Find ``c`` with ``XOR_{i in c} columns[i] == rhs``.

    ``columns[i]`` packs the equation coefficients of unknown ``i``.
    Returns the bitmask of chosen unknowns, or ``None`` if inconsistent.
    """
    basis = XorBasis()
    for col in columns:
        basis.insert(col)
    residual, combo = basis.reduce(rhs)
    if residual:
        return None
    return combo
