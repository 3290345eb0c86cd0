"""Command-line interface.

Exit codes: 0 success, 1 null subspace or non-convergence, 2 usage or parse
error, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import causality, claims, dsl, protocols, runner, states
from .ctc import DctcOptions, DctcResult
from .errors import ConvergenceError, NullSubspaceError
from .report import FORMATS, Report, amplitudes, matrix, render

log = logging.getLogger("ctcsim")

EXIT_OK, EXIT_NULL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

PROTOCOL_COLUMNS = [
    "symbol", "gates", "postselect", "null", "basis", "decoded_bit", "confidence",
    "success_probability", "bob_state", "ctc_residual", "samples", "discrepancy",
]
RUN_COLUMNS = ["file", "wires", "null", "null_line", "success_probability", "state", "samples"]
SCAN_COLUMNS = [
    "gates", "basis", "outcome", "bob_first_probability", "alice_first_probability",
    "verdict", "projection_subspace", "discrepancy",
]
DCTC_COLUMNS = [
    "ctc_wires", "converged", "residual", "iterations", "tolerance", "ctc_fixed_point", "output",
]


def _emit(report: Report, fmt: str):
    sys.stdout.write(render(report, fmt))
    sys.stdout.flush()


def _sample(rng: np.random.Generator, labels: list[str], probs, n: int) -> dict[str, int]:
    if n <= 0:
        return {}
    p = np.clip(np.asarray(probs, dtype=float), 0, None)
    counts = Counter(rng.choice(len(labels), size=n, p=p / p.sum()).tolist())
    return {labels[i]: counts.get(i, 0) for i in range(len(labels))}


# --- protocol ---------------------------------------------------------------


def protocol_report(symbol: protocols.Symbol, postselect: str = "phi+", sample: int = 0, seed: int = 0) -> Report:
    row = {
        "symbol": symbol.value,
        "gates": protocols.sequence_label(protocols.encode(symbol)),
        "postselect": postselect,
        "basis": symbol.basis,
        "discrepancy": list(claims.flags_for_symbol(symbol, postselect)),
    }
    try:
        run = protocols.run_protocol(symbol, postselect)
    except NullSubspaceError as exc:
        row.update(null=True, success_probability=exc.probability, bob_state=[], ctc_residual=[])
        return Report("protocol", PROTOCOL_COLUMNS, [row], single=True)
    bit, confidence = protocols.decode(run.bob_state, symbol.basis)
    samples = {}
    if sample:
        probs = states.measure_probs(run.bob_state, protocols.B, symbol.basis)
        samples = _sample(np.random.default_rng(seed), ["0", "1"], probs, sample)
    row.update(
        null=False,
        decoded_bit=bit,
        confidence=confidence,
        success_probability=run.success_probability,
        bob_state=amplitudes(run.bob_state),
        ctc_residual=amplitudes(run.ctc_residual),
        samples=samples,
    )
    return Report("protocol", PROTOCOL_COLUMNS, [row], single=True)


def cmd_protocol(args) -> int:
    report = protocol_report(protocols.Symbol.parse(args.symbol), args.postselect, args.sample, args.seed)
    _emit(report, args.format)
    return EXIT_NULL if report.rows[0]["null"] else EXIT_OK


# --- scan -------------------------------------------------------------------


def scan_report(max_gates: int, postselect: str = "phi+") -> Report:
    rows = []
    for r in causality.scan_all(max_gates, postselect):
        s = r.scenario
        rows.append({
            "gates": s.label,
            "basis": s.bob_basis,
            "outcome": s.bob_outcome,
            "bob_first_probability": r.report.bob_first_probability,
            "alice_first_probability": r.report.alice_first_probability,
            "verdict": r.classification.verdict.value,
            "projection_subspace": amplitudes(r.report.projection_subspace) or "null",
            "discrepancy": list(claims.flags_for(s, postselect)),
        })
    meta = {"max_gates": max_gates, "postselect": postselect}
    return Report("scan", SCAN_COLUMNS, rows, meta)


def cmd_scan(args) -> int:
    _emit(scan_report(args.max_gates, args.postselect), args.format)
    return EXIT_OK


# --- dctc -------------------------------------------------------------------


def dctc_report(result: DctcResult, tolerance: float, converged: bool) -> Report:
    row = {
        "ctc_wires": list(result.ctc_fixed_point.wires),
        "converged": converged,
        "residual": result.residual,
        "iterations": result.iterations,
        "tolerance": tolerance,
        "ctc_fixed_point": matrix(result.ctc_fixed_point.rho),
        "output": matrix(result.output.rho),
    }
    return Report("dctc", DCTC_COLUMNS, [row], single=True)


def _dctc(program: dsl.Program, args) -> int:
    opts = DctcOptions(tolerance=args.tolerance, max_iterations=args.max_iterations)
    try:
        result = runner.run_dctc(program, opts)
    except ConvergenceError as exc:
        print(f"ctcsim: {exc}", file=sys.stderr)
        _emit(dctc_report(exc.best, args.tolerance, False), args.format)
        return EXIT_NULL
    _emit(dctc_report(result, args.tolerance, True), args.format)
    return EXIT_OK


def _load(path: str) -> dsl.Program:
    text = Path(path).read_text(encoding="utf-8")
    return dsl.parse(text)


def cmd_dctc(args) -> int:
    program = _load(args.file)
    if program.run.mode != "dctc":
        print(f"ctcsim: {args.file}: expected a 'run dctc <wires>' program", file=sys.stderr)
        return EXIT_USAGE
    return _dctc(program, args)


# --- run --------------------------------------------------------------------


def run_report(path: str, result: runner.RunResult, sample: int = 0, seed: int = 0) -> Report:
    state = result.state
    samples = {}
    if sample and state is not None:
        labels = [format(i, f"0{state.n}b") for i in range(len(state.amps))]
        samples = _sample(np.random.default_rng(seed), labels, np.abs(state.amps) ** 2, sample)
        samples = {k: v for k, v in samples.items() if v}
    row = {
        "file": path,
        "wires": list(result.residual.wires),
        "null": result.null,
        "null_line": result.null_at,
        "success_probability": result.probability,
        "state": amplitudes(state) if state is not None else "null subspace",
        "samples": samples,
    }
    return Report("run", RUN_COLUMNS, [row], single=True)


def cmd_run(args) -> int:
    program = _load(args.file)
    mode = program.run.mode
    if mode == "dctc":
        return _dctc(program, args)
    if mode == "scan":
        ps = program.postselect
        postselect = ps.kind if ps is not None else args.postselect
        _emit(scan_report(args.max_gates, postselect), args.format)
        return EXIT_OK
    result = runner.run_pctc(program)
    if result.null:
        print(f"ctcsim: null subspace (line {result.null_at})", file=sys.stderr)
    _emit(run_report(args.file, result, args.sample, args.seed), args.format)
    return EXIT_NULL if result.null else EXIT_OK


# --- entry point ------------------------------------------------------------


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _max_gates(text: str) -> int:
    value = int(text)
    if not 0 <= value <= causality.MAX_SCAN_GATES:
        raise argparse.ArgumentTypeError(f"must be between 0 and {causality.MAX_SCAN_GATES}")
    return value


def _tolerance(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be a non-negative number")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--seed", type=int, default=0, help="seed for --sample (default 0)")
    common.add_argument("--postselect", choices=states.BELL_KINDS, default="phi+",
                        help="Bell state the CTC pair is post-selected onto")
    common.add_argument("--tolerance", type=_tolerance, default=1e-10,
                        help="D-CTC fixed-point residual tolerance")
    common.add_argument("--max-iterations", type=_nonneg_int, default=10_000)
    common.add_argument("--max-gates", type=_max_gates, default=2)
    common.add_argument("--sample", type=_nonneg_int, default=0, metavar="N",
                        help="also simulate N measurement shots")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="ctcsim", description="Exact simulation of circuits with closed timelike curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("protocol", parents=[common], help="run the four-state protocol for one symbol")
    p.add_argument("symbol", choices=[s.value for s in protocols.Symbol])
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("run", parents=[common], help="execute a .ctc program")
    p.add_argument("file")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("scan", parents=[common], help="classify every Alice/Bob scenario")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("dctc", parents=[common], help="solve a Deutschian fixed point from a .ctc program")
    p.add_argument("file")
    p.set_defaults(func=cmd_dctc)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except dsl.ParseError as exc:
        print(f"ctcsim: {getattr(args, 'file', '<input>')}:{exc.line}:{exc.column}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, UnicodeDecodeError) as exc:
        print(f"ctcsim: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
