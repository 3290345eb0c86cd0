"""Signalling-to-the-past protocols over a P-CTC.

Bob holds wire ``B`` of a shared Psi+ pair; Alice holds ``A``. The CTC is the
Bell pair ``(C1, C2)``. Alice's gates act on ``A`` and on the CTC exit ``C2``,
after which ``(A, C1)`` is post-selected onto Phi+. Bob's wire is left in one
of the four BB84 states depending on which gates Alice chose.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import gates, states
from .ctc import Circuit, GateOp, PctcSpec, pctc_run
from .errors import NullSubspaceError, StateError
from .states import PureState

B, A, C1, C2 = "B", "A", "C1", "C2"
REGISTER = (B, A, C1, C2)

SCHMIDT_TOL = 1e-10


class Symbol(enum.Enum):
    ZERO = "zero"
    ONE = "one"
    PLUS = "plus"
    MINUS = "minus"

    @property
    def basis(self) -> str:
        return "std" if self in (Symbol.ZERO, Symbol.ONE) else "diag"

    @property
    def bit(self) -> int:
        return 0 if self in (Symbol.ZERO, Symbol.PLUS) else 1

    @classmethod
    def parse(cls, text: str) -> "Symbol":
        aliases = {"0": "zero", "1": "one", "+": "plus", "-": "minus"}
        key = text.strip().lower()
        return cls(aliases.get(key, key))


def symbol_for(basis: str, outcome: int) -> Symbol:
    """The symbol Bob reads when he gets ``outcome`` in ``basis``."""
    basis = states.basis_name(basis)
    return {
        ("std", 0): Symbol.ZERO,
        ("std", 1): Symbol.ONE,
        ("diag", 0): Symbol.PLUS,
        ("diag", 1): Symbol.MINUS,
    }[basis, outcome]


class GateStep(NamedTuple):
    name: str
    wires: tuple[str, ...]

    def __str__(self):
        return self.name

    def op(self) -> GateOp:
        return GateOp(gates.by_name(self.name), self.wires)


CNOT_AC2 = GateStep("CNOT", (A, C2))
Z_A = GateStep("Z", (A,))
SWAP_AC2 = GateStep("SWAP", (A, C2))
X_A = GateStep("X", (A,))

ALICE_GATES = (CNOT_AC2, SWAP_AC2, X_A, Z_A)

GateSequence = tuple[GateStep, ...]

_ENCODINGS: dict[Symbol, GateSequence] = {
    Symbol.ONE: (CNOT_AC2, SWAP_AC2),
    Symbol.ZERO: (CNOT_AC2, SWAP_AC2, X_A),
    Symbol.PLUS: (CNOT_AC2,),
    Symbol.MINUS: (CNOT_AC2, Z_A),
}


def encode(symbol: Symbol) -> GateSequence:
    return _ENCODINGS[Symbol(symbol)]


def to_circuit(sequence: Sequence[GateStep]) -> Circuit:
    return Circuit(tuple(step.op() for step in sequence))


def sequence_label(sequence: Sequence[GateStep]) -> str:
    return "+".join(step.name for step in sequence) or "-"


def shared_pair() -> PureState:
    """Psi+ on (B, A): (|0_B 1_A> + |1_B 0_A>)/sqrt(2)."""
    return states.bell_state("psi+", (B, A))


def initial_state() -> PureState:
    return states.tensor(shared_pair(), states.bell_state("phi+", (C1, C2)))


def spec_for(postselect: str = "phi+") -> PctcSpec:
    return PctcSpec(entry_wire=A, ancilla_pair=(C1, C2), postselect_onto=postselect)


def schmidt_coefficients(state: PureState, left: Sequence[str]) -> np.ndarray:
    left = list(left)
    right = [w for w in state.wires if w not in left]
    m = states.reorder(state, left + right).amps.reshape(1 << len(left), 1 << len(right))
    return np.linalg.svd(m, compute_uv=False)


def factorize(state: PureState, left: str, right: str) -> tuple[PureState, PureState]:
    """Split a two-wire product state into its factors.

    Both factors are normalized and phase-canonicalized. Raises StateError if
    the Schmidt rank exceeds one.
    """
    state = states.renormalize(states.reorder(state, (left, right)))
    m = state.amps.reshape(2, 2)
    u, s, vh = np.linalg.svd(m)
    if s[1] > SCHMIDT_TOL * s[0]:
        raise StateError(f"state is entangled across {left}|{right} (Schmidt {s})")
    lhs = states.canonical_phase(states.from_vector((left,), u[:, 0]))
    rhs = states.canonical_phase(states.from_vector((right,), vh[0, :]))
    return lhs, rhs


@dataclass(frozen=True)
class ProtocolRun:
    symbol: Symbol
    gates: GateSequence
    bob_state: PureState
    ctc_residual: PureState
    success_probability: float
    output: PureState
    postselect: str = "phi+"


def run_sequence(sequence: Sequence[GateStep], symbol: Symbol, postselect: str = "phi+") -> ProtocolRun:
    outcome = pctc_run(initial_state(), to_circuit(sequence), spec_for(postselect))
    if outcome.null:
        raise NullSubspaceError(
            f"post-selection onto {postselect} is null for {sequence_label(sequence)}",
            outcome.success_probability,
        )
    bob, ctc = factorize(outcome.output, B, C2)
    return ProtocolRun(
        symbol, tuple(sequence), bob, ctc, outcome.success_probability, outcome.output, postselect
    )


def run_protocol(symbol: Symbol, postselect: str = "phi+") -> ProtocolRun:
    symbol = Symbol(symbol)
    return run_sequence(encode(symbol), symbol, postselect)


def run_ralph(use_phase_flip: bool, postselect: str = "phi+") -> ProtocolRun:
    """Two-state radio: CNOT alone sends |+>, CNOT then Z sends |->."""
    if use_phase_flip:
        return run_sequence((CNOT_AC2, Z_A), Symbol.MINUS, postselect)
    return run_sequence((CNOT_AC2,), Symbol.PLUS, postselect)


def decode(bob_state: PureState, basis: str) -> tuple[int, float]:
    """Most likely bit for a measurement of Bob's qubit; ties go to 0."""
    if bob_state.n != 1:
        raise StateError("decode expects a single-qubit state")
    p0, p1 = states.measure_probs(bob_state, bob_state.wires[0], basis)
    return (0, p0) if p0 >= p1 - 1e-12 else (1, p1)
