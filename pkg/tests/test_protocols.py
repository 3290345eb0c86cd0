import itertools

import numpy as np
import pytest

from ctcsim import states
from ctcsim.ctc import pctc_run
from ctcsim.errors import StateError
from ctcsim.protocols import (
    A, B, C2, CNOT_AC2, SWAP_AC2, X_A, Z_A, GateStep, Symbol, decode, encode, factorize,
    initial_state, run_protocol, run_ralph, run_sequence, schmidt_coefficients, sequence_label,
    spec_for, symbol_for, to_circuit,
)
from ctcsim.states import PureState

import oracle

S = 1 / np.sqrt(2)
BOB = {
    Symbol.ZERO: [1, 0],
    Symbol.ONE: [0, 1],
    Symbol.PLUS: [S, S],
    Symbol.MINUS: [S, -S],
}
ORACLE_GATES = {
    Symbol.ONE: ["CNOT", "SWAP"],
    Symbol.ZERO: ["CNOT", "SWAP", "X"],
    Symbol.PLUS: ["CNOT"],
    Symbol.MINUS: ["CNOT", "Z"],
}


def bob(symbol):
    return PureState((B,), BOB[symbol])


@pytest.mark.parametrize("symbol, expected", [
    (Symbol.MINUS, [CNOT_AC2, Z_A]),
    (Symbol.ONE, [CNOT_AC2, SWAP_AC2]),
    (Symbol.ZERO, [CNOT_AC2, SWAP_AC2, X_A]),
    (Symbol.PLUS, [CNOT_AC2]),
])
def test_encode(symbol, expected):
    assert list(encode(symbol)) == expected
    assert encode(symbol)[0] == GateStep("CNOT", (A, C2))


@pytest.mark.parametrize("text, symbol", [("0", Symbol.ZERO), ("ONE", Symbol.ONE), ("+", Symbol.PLUS), (" minus ", Symbol.MINUS)])
def test_symbol_parse(text, symbol):
    assert Symbol.parse(text) is symbol


def test_symbol_parse_rejects():
    with pytest.raises(ValueError):
        Symbol.parse("q")


@pytest.mark.parametrize("symbol", list(Symbol))
def test_symbol_basis_roundtrip(symbol):
    assert symbol_for(symbol.basis, symbol.bit) is symbol


@pytest.mark.parametrize("symbol", list(Symbol))
def test_run_protocol_matches_oracle(symbol):
    run = run_protocol(symbol)
    res = oracle.postselect(oracle.apply(oracle.initial(), ORACLE_GATES[symbol]))
    q = oracle.norm2(res)
    assert run.success_probability == pytest.approx(q, abs=1e-12)
    expected = states.from_vector((B, C2), oracle.residual_vector(res))
    assert states.fidelity(run.output, expected) >= 1 - 1e-12
    assert states.fidelity(run.bob_state, bob(symbol)) >= 1 - 1e-12
    assert run.bob_state.normalized and 0 < run.success_probability <= 1


@pytest.mark.parametrize("symbol, p", [
    (Symbol.PLUS, 0.25), (Symbol.MINUS, 0.25), (Symbol.ONE, 0.5), (Symbol.ZERO, 0.5),
])
def test_success_probabilities(symbol, p):
    assert run_protocol(symbol).success_probability == pytest.approx(p, abs=1e-12)


def test_one_residual_from_oracle():
    run = run_protocol(Symbol.ONE)
    assert states.fidelity(run.ctc_residual, PureState((C2,), [1, 0])) >= 1 - 1e-12


@pytest.mark.parametrize("symbol, ctc", [
    (Symbol.ZERO, [0, 1]), (Symbol.PLUS, [1, 0]), (Symbol.MINUS, [1, 0]),
])
def test_residuals_match_stated(symbol, ctc):
    assert states.fidelity(run_protocol(symbol).ctc_residual, PureState((C2,), ctc)) >= 1 - 1e-12


@pytest.mark.parametrize("state, basis, expected", [
    ([0, 1], "std", (1, 1.0)),
    ([S, -S], "diag", (1, 1.0)),
    ([S, S], "std", (0, 0.5)),
    ([1, 0], "diag", (0, 0.5)),
])
def test_decode(state, basis, expected):
    bit, conf = decode(PureState((B,), state), basis)
    assert bit == expected[0]
    assert conf == pytest.approx(expected[1], abs=1e-12)


def test_decode_rejects_two_qubits():
    with pytest.raises(StateError):
        decode(states.basis_state(2, "00"), "std")


@pytest.mark.parametrize("flip, symbol", [(False, Symbol.PLUS), (True, Symbol.MINUS)])
def test_ralph(flip, symbol):
    run = run_ralph(flip)
    assert states.fidelity(run.bob_state, bob(symbol)) >= 1 - 1e-12
    assert run.success_probability == pytest.approx(0.25, abs=1e-12)
    assert len(run.gates) == 1 + flip


@pytest.mark.parametrize("symbol", list(Symbol))
def test_round_trip(symbol):
    bit, conf = decode(run_protocol(symbol).bob_state, symbol.basis)
    assert bit == symbol.bit
    assert conf == pytest.approx(1, abs=1e-12)


def test_bb84_pairwise_fidelities():
    got = {s: run_protocol(s).bob_state for s in Symbol}
    expected = {
        frozenset({Symbol.ZERO, Symbol.ONE}): 0.0,
        frozenset({Symbol.PLUS, Symbol.MINUS}): 0.0,
    }
    for s, t in itertools.combinations(Symbol, 2):
        f = states.fidelity(got[s], got[t])
        assert f == pytest.approx(expected.get(frozenset({s, t}), 0.5), abs=1e-12)


def test_z_placement_commutes():
    before = pctc_run(initial_state(), to_circuit([Z_A, CNOT_AC2]))
    after = pctc_run(initial_state(), to_circuit(encode(Symbol.MINUS)))
    assert np.allclose(before.output.amps, after.output.amps, atol=1e-12)
    assert np.allclose(before.residual.amps, after.residual.amps, atol=1e-12)


@pytest.mark.parametrize("symbol", list(Symbol))
def test_schmidt_rank_one(symbol):
    s = schmidt_coefficients(run_protocol(symbol).output, [B])
    assert s[1] <= 1e-10 * s[0]


def test_factorize_rejects_entangled():
    with pytest.raises(StateError):
        factorize(states.bell_state("phi+", (B, C2)), B, C2)


def test_bare_cnot_swap_order_matters():
    # SWAP before CNOT is a different unitary; Bob still ends up with a definite state
    run = run_sequence([SWAP_AC2, CNOT_AC2], Symbol.ONE)
    assert run.bob_state.n == 1


def test_sequence_label():
    assert sequence_label(encode(Symbol.ZERO)) == "CNOT+SWAP+X"
    assert sequence_label(()) == "-"


@pytest.mark.parametrize("kind", ["phi-", "psi+", "psi-"])
def test_other_postselections_match_oracle(kind):
    for symbol in Symbol:
        res = oracle.postselect(oracle.apply(oracle.initial(), ORACLE_GATES[symbol]), kind)
        q = oracle.norm2(res)
        out = pctc_run(initial_state(), to_circuit(encode(symbol)), spec_for(kind))
        assert out.success_probability == pytest.approx(q, abs=1e-12)
        if q > 1e-12:
            assert states.fidelity(out.output, states.from_vector((B, C2), oracle.residual_vector(res))) >= 1 - 1e-12
