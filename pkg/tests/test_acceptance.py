"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracle  # noqa: E402
from ctcsim import cli, claims, dsl, states  # noqa: E402
from ctcsim.causality import Scenario, Verdict, evaluate_bob_first, is_canonical, scan_all  # noqa: E402
from ctcsim.ctc import Circuit, pctc_run  # noqa: E402
from ctcsim.protocols import (  # noqa: E402
    B, C2, CNOT_AC2, Z_A, Symbol, decode, run_protocol, run_ralph, shared_pair, to_circuit,
)
from ctcsim.runner import run_dctc  # noqa: E402
from ctcsim.states import PureState  # noqa: E402

TOL = 1e-12
S = 1 / np.sqrt(2)
BOB = {Symbol.ZERO: [1, 0], Symbol.ONE: [0, 1], Symbol.PLUS: [S, S], Symbol.MINUS: [S, -S]}
CIRCUITS = Path(__file__).parent.parent / "circuits"

RESULTS: dict[int, tuple[bool, str]] = {}


def c1_four_state_correctness():
    worst_conf, worst_fid = 1.0, 1.0
    for symbol in Symbol:
        run = run_protocol(symbol)
        bit, conf = decode(run.bob_state, symbol.basis)
        if bit != symbol.bit:
            return False, f"{symbol.value} decoded as {bit}"
        worst_conf = min(worst_conf, conf)
        worst_fid = min(worst_fid, states.fidelity(run.bob_state, PureState((B,), BOB[symbol])))
    ok = abs(1 - worst_conf) <= TOL and worst_fid >= 1 - TOL
    return ok, f"min confidence {worst_conf:.15f}, min fidelity {worst_fid:.15f}"


def c2_ralph_radio():
    f_plus = states.fidelity(run_ralph(False).bob_state, PureState((B,), BOB[Symbol.PLUS]))
    f_minus = states.fidelity(run_ralph(True).bob_state, PureState((B,), BOB[Symbol.MINUS]))
    return min(f_plus, f_minus) >= 1 - TOL, f"fidelity |+> {f_plus:.15f}, |-> {f_minus:.15f}"


def c3_teleportation_identity():
    rng = np.random.default_rng(0)
    worst_f, worst_p = 1.0, 0.0
    for _ in range(100):
        chi = states.from_vector(("A",), rng.normal(size=2) + 1j * rng.normal(size=2))
        out = pctc_run(chi, Circuit())
        worst_f = min(worst_f, states.fidelity(out.output, PureState((C2,), chi.amps)))
        worst_p = max(worst_p, abs(out.success_probability - 0.25))
    return worst_f >= 1 - TOL and worst_p <= TOL, f"min fidelity {worst_f:.15f}, max |p - 1/4| {worst_p:.1e}"


def c4_success_probabilities():
    expected = {Symbol.PLUS: 0.25, Symbol.MINUS: 0.25, Symbol.ONE: 0.5, Symbol.ZERO: 0.5}
    gates = {Symbol.ONE: ["CNOT", "SWAP"], Symbol.ZERO: ["CNOT", "SWAP", "X"],
             Symbol.PLUS: ["CNOT"], Symbol.MINUS: ["CNOT", "Z"]}
    err = 0.0
    for symbol, p in expected.items():
        brute = oracle.norm2(oracle.postselect(oracle.apply(oracle.initial(), gates[symbol])))
        err = max(err, abs(run_protocol(symbol).success_probability - p), abs(brute - p))
    return err <= TOL, f"max deviation {err:.1e} (simulator and brute force)"


def c5_null_subspaces():
    probs = []
    for outcome, seq in ((0, [CNOT_AC2, Z_A]), (1, [CNOT_AC2])):
        bob = states.collapse(shared_pair(), B, "diag", outcome)
        out = pctc_run(bob, to_circuit(seq))
        probs.append(out.success_probability if out.null else float("inf"))
    return max(probs) <= TOL, f"post-selection probabilities {probs[0]:.1e} (|+>, CNOT+Z), {probs[1]:.1e} (|->, CNOT)"


def c6_wrong_basis_projection():
    subspace, p = evaluate_bob_first(Scenario([CNOT_AC2, Z_A], "std", 1))
    if subspace is None:
        return False, "projection is null"
    res, _ = oracle.bob_first(["CNOT", "Z"], "std", 1)
    f_oracle = states.fidelity(subspace, states.from_vector((B, C2), oracle.residual_vector(res)))
    f_stated = states.fidelity(subspace, PureState((B, C2), [0, 0, 1, 0]))
    ok = min(f_oracle, f_stated) >= 1 - TOL
    return ok, f"fidelity vs oracle {f_oracle:.15f}, vs |1_B 0_2> {f_stated:.15f}"


def c7_consistency_classifier():
    rows = scan_all(3)
    bad, canonical = [], 0
    for r in rows:
        rep, verdict = r.report, r.classification.verdict
        zero = min(rep.bob_first_probability, rep.alice_first_probability) <= TOL
        if zero and verdict is not Verdict.FORBIDDEN:
            bad.append(r.scenario)
        if is_canonical(r.scenario):
            canonical += 1
            if verdict is Verdict.FORBIDDEN:
                bad.append(r.scenario)
    return not bad and canonical >= 4, f"{len(rows)} scenarios, {canonical} canonical, {len(bad)} violations"


def c8_dctc_grandfather():
    res = run_dctc(dsl.parse((CIRCUITS / "grandfather.ctc").read_text(encoding="utf-8")))
    dist = float(np.max(np.abs(res.ctc_fixed_point.rho - np.eye(2) / 2)))
    ok = dist <= 1e-10 and res.residual <= 1e-10 and res.iterations <= 200
    return ok, f"|rho - I/2| {dist:.1e}, residual {res.residual:.1e}, {res.iterations} iterations"


def c9_discrepancy_ledger():
    expected = {"one-final-state", "free-will-zero-std1", "free-will-zero-diag0"}
    ledger = {c.claim.id for c in claims.discrepancies()}
    scan_flags = [f for row in cli.scan_report(3).rows for f in row["discrepancy"]]
    proto_flags = [f for s in Symbol for f in cli.protocol_report(s).rows[0]["discrepancy"]]
    ok = ledger == expected and sorted(scan_flags) == sorted(expected) and proto_flags == ["one-final-state"]
    return ok, f"ledger {sorted(ledger)}; scan flags {len(scan_flags)}; protocol flags {proto_flags}"


def c10_parser():
    from test_dsl import _assert_in_bounds, _fuzz_source, random_program

    rng = random.Random(7)
    for _ in range(1000):
        p = random_program(rng)
        if dsl.parse(dsl.format_program(p)) != p:
            return False, f"round-trip failed for {p}"
    rng = random.Random(8)
    errors = 0
    for _ in range(10_000):
        source = _fuzz_source(rng)
        try:
            dsl.parse(source)
        except dsl.ParseError as err:
            errors += 1
            _assert_in_bounds(source, err)
    return True, f"1000 round-trips, 10000 fuzz cases ({errors} rejected, all positions in bounds)"


CRITERIA = [
    (1, "four-state correctness", c1_four_state_correctness),
    (2, "two-state radio", c2_ralph_radio),
    (3, "teleportation identity", c3_teleportation_identity),
    (4, "success probabilities", c4_success_probabilities),
    (5, "null subspaces", c5_null_subspaces),
    (6, "wrong-basis projection", c6_wrong_basis_projection),
    (7, "consistency classifier", c7_consistency_classifier),
    (8, "D-CTC grandfather fixed point", c8_dctc_grandfather),
    (9, "discrepancy ledger", c9_discrepancy_ledger),
    (10, "parser round-trip and fuzz", c10_parser),
]


def run_criterion(number, title, fn) -> str:
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    RESULTS[number] = (ok, detail)
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {title}: {detail} [{elapsed:.2f}s]"
    print(line)
    return line


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion-{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn):
    line = run_criterion(number, title, fn)
    assert RESULTS[number][0], line


if __name__ == "__main__":
    for c in CRITERIA:
        run_criterion(*c)
    sys.exit(0 if all(RESULTS[n][0] for n, _, _ in CRITERIA) else 1)
