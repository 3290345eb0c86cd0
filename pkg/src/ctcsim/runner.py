"""Execution of parsed ``.ctc`` programs."""
from __future__ import annotations

from dataclasses import dataclass

from . import gates, states
from .ctc import Circuit, DctcOptions, DctcResult, GateOp, dctc_fixed_point
from .dsl import Collapse, Gate, InitBasis, InitBell, Postselect, Program
from .states import MixedState, PureState


@dataclass(frozen=True)
class RunResult:
    """Outcome of a ``run pctc`` program.

    ``probability`` is the joint probability of every collapse outcome and the
    post-selection. ``residual`` is the unnormalized surviving component;
    ``state`` its renormalization (None when null).
    """

    state: PureState | None
    residual: PureState
    probability: float
    null_at: int | None = None  # source line of the statement that went null

    @property
    def null(self) -> bool:
        return self.state is None


def initial_state(program: Program, wires: tuple[str, ...] | None = None) -> PureState:
    """Register state built from ``bell``/``set`` statements; other wires start in |0>."""
    wires = program.wires if wires is None else wires
    parts: list[PureState] = []
    covered: set[str] = set()
    for s in program.statements:
        if isinstance(s, InitBell) and set(s.wires) <= set(wires):
            parts.append(states.bell_state(s.kind, s.wires))
            covered.update(s.wires)
        elif isinstance(s, InitBasis) and s.wire in wires:
            parts.append(states.basis_state(1, str(s.bit), (s.wire,)))
            covered.add(s.wire)
    for w in wires:
        if w not in covered:
            parts.append(states.basis_state(1, "0", (w,)))
    state = PureState((), [1.0], normalized=True)
    for part in parts:
        state = states.tensor(state, part)
    return states.reorder(state, wires)


def gate_op(stmt: Gate) -> GateOp:
    return GateOp(gates.by_name(stmt.name), stmt.wires)


def run_pctc(program: Program) -> RunResult:
    state = initial_state(program)
    prob = 1.0
    for s in program.statements:
        if isinstance(s, Gate):
            state = states.apply_gate(state, gates.by_name(s.name), s.wires)
        elif isinstance(s, Collapse):
            p = states.measure_probs(state, s.wire, s.basis)[s.outcome]
            if p <= states.NULL_TOL:
                return RunResult(None, PureState(state.wires, 0 * state.amps), 0.0, s.line)
            state = states.collapse(state, s.wire, s.basis, s.outcome)
            prob *= p
        elif isinstance(s, Postselect):
            onto = states.bell_state(s.kind, s.wires)
            residual, p = states.project(state, s.wires, onto)
            if p <= states.NULL_TOL:
                return RunResult(None, residual, 0.0, s.line)
            state = states.renormalize(residual)
            prob *= p
    return RunResult(state, PureState(state.wires, state.amps * prob ** 0.5), prob)


def run_dctc(program: Program, opts: DctcOptions = DctcOptions()) -> DctcResult:
    """Solve the Deutsch loop named by ``run dctc <ctc wires>``.

    System wires are the remaining declared wires (declaration order); the
    loop unitary is the product of all gate statements.
    """
    ctc = program.run.options
    system = tuple(w for w in program.wires if w not in ctc)
    rho_in = MixedState.from_pure(initial_state(program, system))
    circuit = Circuit(tuple(gate_op(s) for s in program.of_type(Gate)))
    u = gates.custom("U", circuit.unitary(system + ctc))
    return dctc_fixed_point(u, rho_in, ctc, opts)
