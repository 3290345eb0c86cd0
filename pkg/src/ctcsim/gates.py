"""Gate matrices.

All matrices use the big-endian convention: for a two-qubit gate acting on
wires ``(w0, w1)`` the row index is ``2 * bit(w0) + bit(w1)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StateError

UNITARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GateMatrix:
    name: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StateError(f"gate {self.name!r}: matrix must be square, got {m.shape}")
        dim = m.shape[0]
        arity = dim.bit_length() - 1
        if dim < 2 or 1 << arity != dim:
            raise StateError(f"gate {self.name!r}: dimension {dim} is not a power of two")
        if not np.all(np.isfinite(m)):
            raise StateError(f"gate {self.name!r}: non-finite entries")
        if np.max(np.abs(m.conj().T @ m - np.eye(dim))) > UNITARY_TOL:
            raise StateError(f"gate {self.name!r} is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def __repr__(self):
        return f"GateMatrix({self.name!r}, arity={self.arity})"


_S = 1 / np.sqrt(2)

I = GateMatrix("I", np.eye(2))
X = GateMatrix("X", [[0, 1], [1, 0]])
Z = GateMatrix("Z", [[1, 0], [0, -1]])
H = GateMatrix("H", [[_S, _S], [_S, -_S]])
CNOT = GateMatrix("CNOT", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
SWAP = GateMatrix("SWAP", [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])

BUILTIN = {g.name: g for g in (I, X, Z, H, CNOT, SWAP)}


def by_name(name: str) -> GateMatrix:
    """Look up a built-in gate, case-insensitively."""
    try:
        return BUILTIN[name.upper()]
    except KeyError:
        raise KeyError(f"unknown gate {name!r}; expected one of {sorted(BUILTIN)}") from None


def custom(name: str, matrix) -> GateMatrix:
    return GateMatrix(name, np.asarray(matrix, dtype=complex))
