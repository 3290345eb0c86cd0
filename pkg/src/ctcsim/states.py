"""Dense pure and mixed multi-qubit states over labelled wires.

Registers are ordered tuples of wire labels. Wire 0 is the most significant
bit of the amplitude index, so the bitstring ``b`` sits at index
``sum(b[i] * 2**(n-1-i))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NullSubspaceError, StateError, WireError
from .gates import GateMatrix

NULL_TOL = 1e-12
NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-12

_S = 1 / np.sqrt(2)

BELL_KINDS = ("phi+", "phi-", "psi+", "psi-")
_BELL_ALIASES = {
    "phi+": "phi+", "φ+": "phi+", "Φ+": "phi+",
    "phi-": "phi-", "φ-": "phi-", "Φ-": "phi-", "Φ−": "phi-",
    "psi+": "psi+", "ψ+": "psi+", "Ψ+": "psi+",
    "psi-": "psi-", "ψ-": "psi-", "Ψ-": "psi-", "Ψ−": "psi-",
}
_BELL_VECTORS = {
    "phi+": np.array([_S, 0, 0, _S], dtype=complex),
    "phi-": np.array([_S, 0, 0, -_S], dtype=complex),
    "psi+": np.array([0, _S, _S, 0], dtype=complex),
    "psi-": np.array([0, _S, -_S, 0], dtype=complex),
}

_BASES = {"std": "std", "standard": "std", "z": "std", "diag": "diag", "diagonal": "diag", "x": "diag"}
_BASIS_VECTORS = {
    ("std", 0): np.array([1, 0], dtype=complex),
    ("std", 1): np.array([0, 1], dtype=complex),
    ("diag", 0): np.array([_S, _S], dtype=complex),
    ("diag", 1): np.array([_S, -_S], dtype=complex),
}


def bell_kind(kind: str) -> str:
    """Canonical spelling (``phi+`` etc.) of a Bell-state name."""
    key = kind.strip()
    canon = _BELL_ALIASES.get(key) or _BELL_ALIASES.get(key.lower())
    if canon is None:
        raise StateError(f"unknown Bell kind {kind!r}; expected one of {BELL_KINDS}")
    return canon


def basis_name(basis: str) -> str:
    """Canonical spelling (``std`` or ``diag``) of a measurement basis."""
    try:
        return _BASES[basis.strip().lower()]
    except KeyError:
        raise StateError(f"unknown basis {basis!r}; expected std or diag") from None


def basis_vector(basis: str, outcome: int) -> np.ndarray:
    if outcome not in (0, 1):
        raise StateError(f"outcome must be 0 or 1, got {outcome!r}")
    return _BASIS_VECTORS[basis_name(basis), outcome].copy()


def _check_wires(wires: Sequence[str]) -> tuple[str, ...]:
    wires = tuple(wires)
    if len(set(wires)) != len(wires):
        raise WireError(f"duplicate wire labels in {wires}")
    for w in wires:
        if not isinstance(w, str) or not w:
            raise WireError(f"wire labels must be non-empty strings, got {w!r}")
    return wires


@dataclass(frozen=True, eq=False)
class PureState:
    """Amplitude vector over an ordered wire register.

    ``normalized`` records that the state is known to have unit norm; the
    constructor verifies the claim.
    """

    wires: tuple[str, ...]
    amps: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        wires = _check_wires(self.wires)
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        if amps.shape[0] != 1 << len(wires):
            raise StateError(
                f"{len(wires)} wires need {1 << len(wires)} amplitudes, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise StateError("amplitudes must be finite")
        if self.normalized and abs(np.vdot(amps, amps).real - 1) > NORM_TOL:
            raise StateError("state flagged normalized but norm is not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "amps", amps)

    @property
    def n(self) -> int:
        return len(self.wires)

    def norm2(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def index(self, wire: str) -> int:
        try:
            return self.wires.index(wire)
        except ValueError:
            raise WireError(f"wire {wire!r} not in register {self.wires}") from None

    def tensor_view(self) -> np.ndarray:
        return self.amps.reshape((2,) * self.n)

    def amplitude(self, bits: str) -> complex:
        if len(bits) != self.n:
            raise StateError(f"bitstring {bits!r} does not match {self.n} wires")
        return complex(self.amps[int(bits, 2)]) if self.n else complex(self.amps[0])

    def ket(self, digits: int = 6) -> str:
        """Human-readable ket expansion, e.g. ``0.707|01> + 0.707|10>``."""
        terms = []
        for i, a in enumerate(self.amps):
            if abs(a) <= 1e-12:
                continue
            label = format(i, f"0{self.n}b") if self.n else ""
            terms.append(f"({format_complex(a, digits)})|{label}>")
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"PureState(wires={self.wires}, {self.ket()})"


def format_complex(z: complex, digits: int = 12) -> str:
    """Render ``a+bi`` with ``digits`` significant digits; parts under 1e-12 print as 0."""
    re, im = float(np.real(z)), float(np.imag(z))
    re = 0.0 if abs(re) < 1e-12 else re
    im = 0.0 if abs(im) < 1e-12 else im
    sign = "-" if im < 0 else "+"
    return f"{re:.{digits}g}{sign}{abs(im):.{digits}g}i"


def basis_state(n: int, bits: str, wires: Sequence[str] | None = None) -> PureState:
    """Computational basis state ``|bits>``; wires default to ``q0..q{n-1}``."""
    if len(bits) != n or any(c not in "01" for c in bits):
        raise StateError(f"bitstring {bits!r} is not {n} binary digits")
    wires = tuple(wires) if wires is not None else tuple(f"q{i}" for i in range(n))
    if len(wires) != n:
        raise WireError(f"{n} wires expected, got {wires}")
    amps = np.zeros(1 << n, dtype=complex)
    amps[int(bits, 2) if n else 0] = 1
    return PureState(wires, amps, normalized=True)


def from_vector(wires: Sequence[str], vector) -> PureState:
    """Normalized state from an arbitrary non-zero vector."""
    return renormalize(PureState(tuple(wires), np.asarray(vector, dtype=complex)))


def bell_state(kind: str, wires: Sequence[str]) -> PureState:
    wires = tuple(wires)
    if len(wires) != 2:
        raise WireError(f"a Bell state needs two wires, got {wires}")
    return PureState(_check_wires(wires), _BELL_VECTORS[bell_kind(kind)], normalized=True)


def tensor(a: PureState, b: PureState) -> PureState:
    overlap = set(a.wires) & set(b.wires)
    if overlap:
        raise WireError(f"cannot tensor states sharing wires {sorted(overlap)}")
    return PureState(a.wires + b.wires, np.kron(a.amps, b.amps), a.normalized and b.normalized)


def _targets(state: PureState, targets: Sequence[str]) -> list[int]:
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise WireError(f"target wires must be distinct, got {targets}")
    return [state.index(w) for w in targets]


def _apply_matrix(state: PureState, matrix: np.ndarray, axes: list[int]) -> np.ndarray:
    k = len(axes)
    u = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(u, state.tensor_view(), axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes).reshape(-1)


def apply_gate(state: PureState, gate: GateMatrix, targets: Sequence[str]) -> PureState:
    """Apply ``gate`` on ``targets`` (in the gate's wire order), identity elsewhere."""
    if isinstance(targets, str):
        targets = [targets]
    axes = _targets(state, targets)
    if len(axes) != gate.arity:
        raise WireError(f"gate {gate.name} acts on {gate.arity} wire(s), got {len(axes)}")
    return PureState(state.wires, _apply_matrix(state, gate.matrix, axes), state.normalized)


def reorder(state: PureState, wires: Sequence[str]) -> PureState:
    """Same state with the register permuted into ``wires`` order."""
    wires = tuple(wires)
    if sorted(wires) != sorted(state.wires):
        raise WireError(f"{wires} is not a permutation of {state.wires}")
    if wires == state.wires:
        return state
    perm = [state.index(w) for w in wires]
    out = np.transpose(state.tensor_view(), perm)
    return PureState(wires, out.reshape(-1), state.normalized)


def project(state: PureState, targets: Sequence[str], onto: PureState) -> tuple[PureState, float]:
    """Component of ``state`` with ``targets`` in ``|onto>``.

    ``onto``'s i-th wire is matched to ``targets[i]``. The residual lives on
    the remaining wires (original order) and is not renormalized; the second
    element is its squared norm. A zero-probability projection returns a zero
    residual rather than raising.
    """
    axes = _targets(state, targets)
    if onto.n != len(axes):
        raise WireError(f"projector spans {onto.n} wires but {len(axes)} targets given")
    if abs(onto.norm2() - 1) > NORM_TOL:
        raise StateError("projection target must be normalized")
    keep = [w for i, w in enumerate(state.wires) if i not in axes]
    bra = onto.amps.conj().reshape((2,) * onto.n)
    res = np.tensordot(bra, state.tensor_view(), axes=(list(range(onto.n)), axes))
    residual = PureState(tuple(keep), np.asarray(res).reshape(-1))
    return residual, residual.norm2()


def renormalize(state: PureState) -> PureState:
    p = state.norm2()
    if p <= NULL_TOL:
        raise NullSubspaceError(f"cannot renormalize: squared norm {p:.3g} is null", p)
    return PureState(state.wires, state.amps / np.sqrt(p), normalized=True)


def _require_normalized(state: PureState):
    if abs(state.norm2() - 1) > NORM_TOL:
        raise StateError(f"state is not normalized (squared norm {state.norm2():.15g})")


def measure_probs(state: PureState, wire: str, basis: str = "std") -> tuple[float, float]:
    """Outcome probabilities for measuring ``wire`` in the std or diag basis."""
    _require_normalized(state)
    out = []
    for outcome in (0, 1):
        _, p = project(state, [wire], PureState((wire,), basis_vector(basis, outcome)))
        out.append(p)
    p0, p1 = out
    s = p0 + p1
    return p0 / s, p1 / s


def collapse(state: PureState, wire: str, basis: str, outcome: int) -> PureState:
    """Post-measurement state; ``wire`` stays in the register set to the outcome vector."""
    vec = basis_vector(basis, outcome)
    amps = _apply_matrix(state, np.outer(vec, vec.conj()), [state.index(wire)])
    unnormalized = PureState(state.wires, amps)
    p = unnormalized.norm2()
    if p <= NULL_TOL:
        raise NullSubspaceError(
            f"outcome {outcome} in {basis_name(basis)} basis on {wire!r} has zero probability", p
        )
    return renormalize(unnormalized)


def overlap(a: PureState, b: PureState) -> complex:
    """<a|b>, after aligning b's register to a's."""
    return complex(np.vdot(a.amps, reorder(b, a.wires).amps))


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2 of the normalized directions."""
    na, nb = a.norm2(), b.norm2()
    if na <= NULL_TOL or nb <= NULL_TOL:
        return 0.0
    return abs(overlap(a, b)) ** 2 / (na * nb)


def equal_up_to_phase(a: PureState, b: PureState, tol: float = 1e-12) -> bool:
    """Same register contents, same norm and same direction."""
    if sorted(a.wires) != sorted(b.wires):
        return False
    if abs(a.norm2() - b.norm2()) > tol:
        return False
    return fidelity(a, b) >= 1 - tol


def canonical_phase(state: PureState) -> PureState:
    """Rotate the global phase so the first non-negligible amplitude is real positive."""
    for a in state.amps:
        if abs(a) > 1e-12:
            return PureState(state.wires, state.amps * (abs(a) / a), state.normalized)
    return state


# --- mixed states -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MixedState:
    """Density matrix over an ordered wire register."""

    wires: tuple[str, ...]
    rho: np.ndarray

    def __post_init__(self):
        wires = _check_wires(self.wires)
        rho = np.array(self.rho, dtype=complex)
        dim = 1 << len(wires)
        if rho.shape != (dim, dim):
            raise StateError(f"{len(wires)} wires need a {dim}x{dim} matrix, got {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise StateError("density matrix entries must be finite")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise StateError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > TRACE_TOL:
            raise StateError(f"density matrix trace is {np.trace(rho).real:.15g}, not 1")
        if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
            raise StateError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "rho", rho)

    @property
    def n(self) -> int:
        return len(self.wires)

    @classmethod
    def from_pure(cls, state: PureState) -> "MixedState":
        psi = renormalize(state).amps
        return cls(state.wires, np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, wires: Sequence[str]) -> "MixedState":
        dim = 1 << len(tuple(wires))
        return cls(tuple(wires), np.eye(dim) / dim)


def mixed_tensor(a: MixedState, b: MixedState) -> MixedState:
    overlap_ = set(a.wires) & set(b.wires)
    if overlap_:
        raise WireError(f"cannot tensor states sharing wires {sorted(overlap_)}")
    return MixedState(a.wires + b.wires, np.kron(a.rho, b.rho))


def partial_trace(rho: MixedState, keep: Sequence[str]) -> MixedState:
    """Reduced density matrix on ``keep`` (in the order given)."""
    keep = list(keep)
    if len(set(keep)) != len(keep):
        raise WireError(f"duplicate wires in {keep}")
    missing = [w for w in keep if w not in rho.wires]
    if missing:
        raise WireError(f"wires {missing} not in register {rho.wires}")
    n = rho.n
    keep_idx = [rho.wires.index(w) for w in keep]
    drop_idx = [i for i in range(n) if i not in keep_idx]
    t = rho.rho.reshape((2,) * (2 * n))
    # bring kept row axes, dropped row axes, kept col axes, dropped col axes together
    order = keep_idx + drop_idx + [n + i for i in keep_idx] + [n + i for i in drop_idx]
    t = np.transpose(t, order)
    dk, dd = 1 << len(keep_idx), 1 << len(drop_idx)
    t = t.reshape(dk, dd, dk, dd)
    reduced = np.einsum("ajbj->ab", t)
    reduced = (reduced + reduced.conj().T) / 2
    return MixedState(tuple(keep), reduced)


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values."""
    return float(np.linalg.svd(np.asarray(m), compute_uv=False).sum())
