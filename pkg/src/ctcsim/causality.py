"""Scenario evaluation under the two temporal orderings.

A scenario fixes Alice's gate sequence and Bob's measurement (basis and
outcome). It is evaluated twice:

* Bob first: Bob's collapse is applied to the shared pair, then Alice's gates,
  then post-selection. The probability is the joint probability of Bob's
  outcome and post-selection success.
* Alice first: the uncollapsed run is post-selected, then Bob's outcome
  probability is read off his marginal.

Verdicts follow two consistency rules: an event occurs only if every ordering
gives it non-zero probability; otherwise it is forbidden. Occurring events whose
gate sequence is not the canonical encoding of what Bob read are tagged as
reversed causality.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import states
from .protocols import (
    ALICE_GATES, A, B, C1, C2, GateSequence, GateStep, Symbol, encode,
    sequence_label, shared_pair, spec_for, symbol_for, to_circuit,
)
from .ctc import pctc_run
from .states import PureState

NULL_TOL = states.NULL_TOL
UNITARY_DEDUP_TOL = 1e-12
MAX_SCAN_GATES = 4


class Verdict(str, enum.Enum):
    OCCURS = "OCCURS"
    FORBIDDEN = "FORBIDDEN"
    REVERSED_CAUSALITY = "REVERSED_CAUSALITY"


@dataclass(frozen=True)
class Scenario:
    alice_gates: GateSequence
    bob_basis: str
    bob_outcome: int
    bob_timing: str = "before"

    def __post_init__(self):
        object.__setattr__(self, "alice_gates", tuple(GateStep(g.name, tuple(g.wires)) for g in self.alice_gates))
        object.__setattr__(self, "bob_basis", states.basis_name(self.bob_basis))
        if self.bob_outcome not in (0, 1):
            raise ValueError(f"bob_outcome must be 0 or 1, got {self.bob_outcome!r}")
        if self.bob_timing not in ("before", "after"):
            raise ValueError(f"bob_timing must be 'before' or 'after', got {self.bob_timing!r}")
        for g in self.alice_gates:
            if not set(g.wires) <= {A, C2}:
                raise ValueError(f"Alice's gate {g.name}{g.wires} must act on wires A and/or C2")

    @property
    def label(self) -> str:
        return sequence_label(self.alice_gates)

    @property
    def read_symbol(self) -> Symbol:
        return symbol_for(self.bob_basis, self.bob_outcome)


@dataclass(frozen=True)
class OrderingReport:
    bob_first_probability: float
    alice_first_probability: float
    projection_subspace: PureState | None  # None marks a null subspace

    @property
    def null(self) -> bool:
        return self.projection_subspace is None


@dataclass(frozen=True)
class Rationale:
    rule: str
    read_symbol: Symbol
    canonical: bool
    zero_frames: tuple[str, ...]

    def __str__(self):
        return self.rule


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    rationale: Rationale


def alice_unitary(sequence: Sequence[GateStep]) -> np.ndarray:
    """Matrix of Alice's gates on the (A, C2) subregister."""
    return to_circuit(sequence).unitary((A, C2))


def same_unitary(a: Sequence[GateStep], b: Sequence[GateStep], tol: float = UNITARY_DEDUP_TOL) -> bool:
    return float(np.max(np.abs(alice_unitary(a) - alice_unitary(b)))) <= tol


def evaluate_bob_first(
    s: Scenario, postselect: str = "phi+", shared: PureState | None = None
) -> tuple[PureState | None, float]:
    """Projection subspace and joint probability with Bob's collapse applied first.

    ``shared`` overrides the (B, A) resource state, Psi+ by default.
    """
    shared = shared_pair() if shared is None else shared
    p_bob = states.measure_probs(shared, B, s.bob_basis)[s.bob_outcome]
    if p_bob <= NULL_TOL:
        return None, 0.0
    collapsed = states.collapse(shared, B, s.bob_basis, s.bob_outcome)
    full = states.tensor(collapsed, states.bell_state("phi+", (C1, C2)))
    evolved = to_circuit(s.alice_gates).apply(full)
    spec = spec_for(postselect)
    onto = states.bell_state(spec.postselect_onto, spec.postselected)
    residual, q = states.project(evolved, spec.postselected, onto)
    if q <= NULL_TOL:
        return None, 0.0
    return residual, p_bob * min(q, 1.0)


def evaluate_alice_first(
    s: Scenario, postselect: str = "phi+", shared: PureState | None = None
) -> float:
    """Probability of Bob's outcome measured after the post-selected run."""
    shared = shared_pair() if shared is None else shared
    outcome = pctc_run(shared, to_circuit(s.alice_gates), spec_for(postselect))
    if outcome.null:
        return 0.0
    return states.measure_probs(outcome.output, B, s.bob_basis)[s.bob_outcome]


def evaluate(s: Scenario, postselect: str = "phi+", shared: PureState | None = None) -> OrderingReport:
    subspace, p_bob = evaluate_bob_first(s, postselect, shared)
    p_alice = evaluate_alice_first(s, postselect, shared)
    return OrderingReport(p_bob, p_alice, subspace)


def probability(s: Scenario, postselect: str = "phi+") -> float:
    """Event probability in the ordering named by ``s.bob_timing``."""
    if s.bob_timing == "before":
        return evaluate_bob_first(s, postselect)[1]
    return evaluate_alice_first(s, postselect)


def is_canonical(s: Scenario) -> bool:
    """Whether Alice's gates implement the encoding of the symbol Bob read."""
    return same_unitary(s.alice_gates, encode(s.read_symbol))


def classify(s: Scenario, report: OrderingReport | None = None, postselect: str = "phi+") -> Classification:
    report = evaluate(s, postselect) if report is None else report
    canonical = is_canonical(s)
    zero = tuple(
        name
        for name, p in (
            ("bob-first", report.bob_first_probability),
            ("alice-first", report.alice_first_probability),
        )
        if p <= NULL_TOL
    )
    if zero:
        rule = f"zero probability in {' and '.join(zero)} ordering"
        return Classification(Verdict.FORBIDDEN, Rationale(rule, s.read_symbol, canonical, zero))
    if canonical:
        rule = f"non-zero in both orderings; gates encode {s.read_symbol.value}"
        return Classification(Verdict.OCCURS, Rationale(rule, s.read_symbol, True, ()))
    rule = f"non-zero in both orderings; gates do not encode {s.read_symbol.value}"
    return Classification(Verdict.REVERSED_CAUSALITY, Rationale(rule, s.read_symbol, False, ()))


def gate_sequences(max_gates: int) -> list[GateSequence]:
    """All Alice gate sequences up to ``max_gates``, one per distinct unitary.

    Enumerated by length, then lexicographically by gate name; the first
    sequence reaching a unitary represents it.
    """
    if not 0 <= max_gates <= MAX_SCAN_GATES:
        raise ValueError(f"max_gates must be between 0 and {MAX_SCAN_GATES}, got {max_gates}")
    alphabet = sorted(ALICE_GATES, key=lambda g: g.name)
    kept: list[GateSequence] = []
    seen: list[np.ndarray] = []
    for length in range(max_gates + 1):
        for seq in itertools.product(alphabet, repeat=length):
            u = alice_unitary(seq)
            if any(np.max(np.abs(u - v)) <= UNITARY_DEDUP_TOL for v in seen):
                continue
            seen.append(u)
            kept.append(tuple(seq))
    return kept


@dataclass(frozen=True)
class ScanRow:
    scenario: Scenario
    report: OrderingReport
    classification: Classification


def scan_all(max_gates: int, postselect: str = "phi+") -> list[ScanRow]:
    rows = []
    for seq in gate_sequences(max_gates):
        for basis in ("std", "diag"):
            for outcome in (0, 1):
                s = Scenario(seq, basis, outcome)
                report = evaluate(s, postselect)
                rows.append(ScanRow(s, report, classify(s, report, postselect)))
    return rows
