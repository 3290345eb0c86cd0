"""Post-selected (P-CTC) and Deutschian (D-CTC) evolution.

P-CTCs are simulated with the equivalent-circuit construction: the CTC is a
Bell pair ``(C1, C2)``; ``C2`` emerges in the past and takes part in the
circuit, while the wire entering the CTC is post-selected together with ``C1``
onto a Bell state at the end.

D-CTCs are solved for Deutsch's consistency condition
``rho = Tr_sys[U (rho_in (x) rho) U^dag]`` by damped fixed-point iteration.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import states
from .errors import ConvergenceError, StateError, WireError
from .gates import GateMatrix
from .states import MixedState, PureState

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GateOp:
    gate: GateMatrix
    wires: tuple[str, ...]

    def __post_init__(self):
        wires = (self.wires,) if isinstance(self.wires, str) else tuple(self.wires)
        object.__setattr__(self, "wires", wires)
        if len(wires) != self.gate.arity:
            raise WireError(f"{self.gate.name} needs {self.gate.arity} wire(s), got {wires}")

    def __str__(self):
        return f"{self.gate.name}({','.join(self.wires)})"


@dataclass(frozen=True)
class Circuit:
    """Ordered gate applications on named wires."""

    ops: tuple[GateOp, ...] = ()

    @classmethod
    def of(cls, ops: Iterable[GateOp | tuple]) -> "Circuit":
        return cls(tuple(op if isinstance(op, GateOp) else GateOp(*op) for op in ops))

    def wires(self) -> set[str]:
        return {w for op in self.ops for w in op.wires}

    def apply(self, state: PureState) -> PureState:
        for op in self.ops:
            state = states.apply_gate(state, op.gate, op.wires)
        return state

    def unitary(self, wires: Sequence[str]) -> np.ndarray:
        """Matrix of the whole circuit on ``wires`` (big-endian)."""
        wires = tuple(wires)
        dim = 1 << len(wires)
        cols = []
        for j in range(dim):
            e = np.zeros(dim, dtype=complex)
            e[j] = 1
            cols.append(self.apply(PureState(wires, e)).amps)
        return np.array(cols).T

    def __len__(self):
        return len(self.ops)


@dataclass(frozen=True)
class PctcSpec:
    entry_wire: str = "A"
    ancilla_pair: tuple[str, str] = ("C1", "C2")
    postselect_onto: str = "phi+"

    def __post_init__(self):
        pair = tuple(self.ancilla_pair)
        if len(pair) != 2 or len({self.entry_wire, *pair}) != 3:
            raise WireError("entry wire and ancilla pair must be three distinct wires")
        object.__setattr__(self, "ancilla_pair", pair)
        object.__setattr__(self, "postselect_onto", states.bell_kind(self.postselect_onto))

    @property
    def postselected(self) -> tuple[str, str]:
        return (self.entry_wire, self.ancilla_pair[0])


@dataclass(frozen=True)
class PctcOutcome:
    """Result of a post-selected run.

    ``output`` is the renormalized surviving state, or None for a null
    post-selection. ``residual`` is the unnormalized projection, kept for
    reports of the projection subspace.
    """

    output: PureState | None
    success_probability: float
    residual: PureState

    @property
    def null(self) -> bool:
        return is_null(self)


def is_null(outcome: PctcOutcome) -> bool:
    return outcome.success_probability <= states.NULL_TOL


def pctc_run(initial: PureState, circuit: Circuit, spec: PctcSpec = PctcSpec()) -> PctcOutcome:
    c1, c2 = spec.ancilla_pair
    present = [w in initial.wires for w in (c1, c2)]
    if not any(present):
        initial = states.tensor(initial, states.bell_state("phi+", (c1, c2)))
    elif not all(present):
        raise WireError(f"ancilla pair {spec.ancilla_pair} is only partly in the register")
    if spec.entry_wire not in initial.wires:
        raise WireError(f"entry wire {spec.entry_wire!r} not in register {initial.wires}")
    stray = circuit.wires() - set(initial.wires)
    if stray:
        raise WireError(f"circuit touches wires {sorted(stray)} outside the register")

    final = circuit.apply(initial)
    onto = states.bell_state(spec.postselect_onto, spec.postselected)
    residual, p = states.project(final, spec.postselected, onto)
    if p <= states.NULL_TOL:
        log.debug("null post-selection (p=%.3g)", p)
        return PctcOutcome(None, p, residual)
    return PctcOutcome(states.renormalize(residual), min(p, 1.0), residual)


# --- Deutschian CTCs --------------------------------------------------------


@dataclass(frozen=True)
class DctcOptions:
    tolerance: float = 1e-10
    max_iterations: int = 10_000


@dataclass(frozen=True)
class DctcResult:
    ctc_fixed_point: MixedState
    output: MixedState
    residual: float
    iterations: int
    history: tuple[float, ...] = field(default=(), repr=False)


def _consistency_map(u: np.ndarray, rho_in: np.ndarray, n_sys: int, n_ctc: int):
    ds, dc = 1 << n_sys, 1 << n_ctc

    def evolve(rho_ctc: np.ndarray) -> np.ndarray:
        joint = u @ np.kron(rho_in, rho_ctc) @ u.conj().T
        return joint.reshape(ds, dc, ds, dc)

    def m(rho_ctc: np.ndarray) -> np.ndarray:
        out = np.einsum("iaib->ab", evolve(rho_ctc))
        return (out + out.conj().T) / 2

    def chronology_out(rho_ctc: np.ndarray) -> np.ndarray:
        out = np.einsum("iaja->ij", evolve(rho_ctc))
        return (out + out.conj().T) / 2

    return m, chronology_out


def dctc_fixed_point(
    u: GateMatrix,
    rho_in: MixedState,
    ctc_wires: Sequence[str],
    opts: DctcOptions = DctcOptions(),
) -> DctcResult:
    """Solve for a Deutsch-consistent CTC state.

    ``u`` acts on the register ``rho_in.wires + ctc_wires`` in that order.
    Iterates ``rho <- (M(rho) + rho) / 2`` from the maximally mixed state and
    stops once ``||M(rho) - rho||_1 < tolerance``; the strict comparison makes
    a zero tolerance unattainable by design.
    """
    ctc_wires = tuple(ctc_wires)
    if set(ctc_wires) & set(rho_in.wires):
        raise WireError("CTC wires overlap the system register")
    if opts.tolerance < 0 or opts.max_iterations < 0:
        raise ValueError("tolerance and max_iterations must be non-negative")
    n_sys, n_ctc = rho_in.n, len(ctc_wires)
    if u.arity != n_sys + n_ctc:
        raise StateError(f"unitary acts on {u.arity} wires, register has {n_sys + n_ctc}")

    m, chronology_out = _consistency_map(u.matrix, rho_in.rho, n_sys, n_ctc)
    rho = np.eye(1 << n_ctc, dtype=complex) / (1 << n_ctc)
    best = (np.inf, rho, 0)
    history = []
    for k in range(opts.max_iterations + 1):
        mapped = m(rho)
        residual = states.trace_norm(mapped - rho)
        history.append(residual)
        if residual < best[0]:
            best = (residual, rho, k)
        if residual < opts.tolerance:
            break
        if k < opts.max_iterations:
            rho = (mapped + rho) / 2
    else:
        res, rho_b, k_b = best
        result = DctcResult(
            MixedState(ctc_wires, rho_b),
            MixedState(rho_in.wires, chronology_out(rho_b)),
            res,
            k_b,
            tuple(history),
        )
        raise ConvergenceError(
            f"no fixed point within tolerance {opts.tolerance:g} after "
            f"{opts.max_iterations} iterations (best residual {res:.3g})",
            res,
            result,
        )
    log.debug("D-CTC converged after %d iterations, residual %.3g", k, residual)
    return DctcResult(
        MixedState(ctc_wires, rho),
        MixedState(rho_in.wires, chronology_out(rho)),
        residual,
        k,
        tuple(history),
    )
