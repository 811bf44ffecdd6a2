"""Built-in code corpus and the plain-text stabilizer file format.

File format::

    # comment
    K=4
    XXII
    IXXI
    IIXX
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Union

from .pauli import PauliParseError, pauli_from_string
from .stabilizer import StabilizerCode, validate

__all__ = ["BUILTIN_CODES", "StabFileError", "builtin_code", "parse_stab", "format_stab", "load_code", "save_code"]

BUILTIN_CODES: dict[str, tuple[str, ...]] = {
    # four qubits, two encoded, both logical families two-body
    "q4": ("XXXX", "ZZZZ"),
    # nearest-neighbour XX errors on a chain of four
    "q2x": ("XXII", "IXXI", "IIXX"),
    # six-qubit CSS example with Z_bar = ZZZZII and X_bar = XIIIXX
    "footnote": ("XXIIII", "XIXIII", "XIIXII", "ZZZZZI", "ZZZZIZ"),
    # seven-qubit Hamming code, labelled so that X_bar = XIIIXXI and Z_bar = ZIZZIII
    "steane": ("IXIIXXX", "XIXIXIX", "XIIXIXX", "IZIIZZZ", "ZIZIZIZ", "ZIIZIZZ"),
    # perfect five-qubit code (not CSS)
    "fivequbit": ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"),
    # four-qubit code containing XZYX, used for the measurement demo
    "fig4": ("XZYX", "ZXXZ"),
}


class StabFileError(ValueError):
    def __init__(self, source: str, line: int, message: str):
        self.source = source
        self.line = line
        super().__init__(f"{source}:{line}: {message}")


def builtin_code(name: str) -> StabilizerCode:
    try:
        gens = BUILTIN_CODES[name.lower()]
    except KeyError:
        raise KeyError(f"unknown built-in code {name!r}; choose from {sorted(BUILTIN_CODES)}") from None
    return validate(gens, name=name.lower())


def parse_stab(text: str, source: str = "<string>", name: str = "") -> StabilizerCode:
    k = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if k is None:
            key, sep, value = line.partition("=")
            if not sep or key.strip() != "K":
                raise StabFileError(source, lineno, "first entry must be K=<int>")
            try:
                k = int(value)
            except ValueError:
                raise StabFileError(source, lineno, f"bad qubit count {value.strip()!r}") from None
            if k < 1:
                raise StabFileError(source, lineno, "K must be positive")
            continue
        try:
            p = pauli_from_string(line)
        except PauliParseError as exc:
            raise StabFileError(source, lineno, str(exc)) from None
        if p.n_qubits != k:
            raise StabFileError(source, lineno, f"generator has {p.n_qubits} qubits, expected {k}")
        gens.append(p)
    if k is None:
        raise StabFileError(source, 0, "missing K=<int> header")
    if not gens:
        raise StabFileError(source, 0, "no generators")
    return validate(gens, name=name)


def format_stab(code: StabilizerCode, comment: str = "") -> str:
    lines = [f"# {line}" for line in comment.splitlines()]
    lines.append(f"K={code.n_qubits}")
    lines.extend(str(g) for g in code.generators)
    return "\n".join(lines) + "\n"


def load_code(spec: Union[str, os.PathLike]) -> StabilizerCode:
    """Load a ``.stab`` file, or a built-in code by name (``q2x`` or ``q2x.stab``).

    An existing file always wins over a built-in of the same name.
    """
    path = Path(spec)
    if path.is_file():
        return parse_stab(path.read_text(encoding="utf-8"), source=str(path), name=path.stem)
    stem = path.stem if path.suffix == ".stab" else str(spec)
    if stem.lower() in BUILTIN_CODES and path.parent == Path("."):
        return builtin_code(stem)
    raise FileNotFoundError(f"no stabilizer file or built-in code named {str(spec)!r}")


def save_code(code: StabilizerCode, path: Union[str, os.PathLike], comment: str = "") -> None:
    Path(path).write_text(format_stab(code, comment), encoding="utf-8")
