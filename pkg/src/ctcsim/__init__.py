"""Exact simulation of quantum circuits with closed timelike curves."""
from .causality import Classification, OrderingReport, Scenario, Verdict, classify, scan_all
from .ctc import Circuit, DctcOptions, DctcResult, GateOp, PctcOutcome, PctcSpec, dctc_fixed_point, is_null, pctc_run
from .errors import ConvergenceError, CTCError, NullSubspaceError, StateError, WireError
from .gates import CNOT, SWAP, GateMatrix, H, I, X, Z
from .protocols import Symbol, decode, encode, run_protocol, run_ralph
from .states import (
    MixedState, PureState, apply_gate, basis_state, bell_state, collapse, measure_probs,
    partial_trace, project, renormalize, tensor,
)

__version__ = "0.1.0"
