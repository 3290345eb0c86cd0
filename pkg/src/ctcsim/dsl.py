"""Line-oriented circuit description language (``.ctc`` files).

One statement per line, ``#`` starts a comment::

    wires B A C1 C2
    bell psi+ B A
    bell phi+ C1 C2
    cnot A C2
    z A
    postselect A C1 phi+
    run pctc

Keywords, Bell kinds and basis names are case-insensitive; wire names are
case-sensitive. ``run dctc <wire>+`` names the CTC wires of a Deutschian loop.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .errors import CTCError

WIRE_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
TOKEN_RE = re.compile(r"[^ \t]+")

BELL_KINDS = ("phi+", "phi-", "psi+", "psi-")
BASES = ("std", "diag")
GATE_ARITY = {"x": 1, "z": 1, "h": 1, "cnot": 2, "swap": 2}
RUN_MODES = ("pctc", "scan", "dctc")
SCAN_REGISTER = ("B", "A", "C1", "C2")


class ParseError(CTCError):
    def __init__(self, line: int, column: int, expected: str, found: str):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        super().__init__(f"line {line}, column {column}: expected {expected}, found {found}")


# --- syntax tree ------------------------------------------------------------
# ``line`` is bookkeeping only and is excluded from equality.


@dataclass(frozen=True)
class WireDecl:
    names: tuple[str, ...]
    line: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class InitBell:
    kind: str
    wires: tuple[str, str]
    line: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class InitBasis:
    wire: str
    bit: int
    line: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Gate:
    name: str
    wires: tuple[str, ...]
    line: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Collapse:
    wire: str
    basis: str
    outcome: int
    line: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Postselect:
    wires: tuple[str, str]
    kind: str
    line: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Run:
    mode: str
    options: tuple[str, ...] = ()
    line: int = field(default=0, compare=False, repr=False)


Statement = Union[WireDecl, InitBell, InitBasis, Gate, Collapse, Postselect, Run]


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...]

    @property
    def wires(self) -> tuple[str, ...]:
        return tuple(w for s in self.statements if isinstance(s, WireDecl) for w in s.names)

    @property
    def run(self) -> Run:
        for s in self.statements:
            if isinstance(s, Run):
                return s
        return Run("pctc")

    @property
    def postselect(self) -> Postselect | None:
        return next((s for s in self.statements if isinstance(s, Postselect)), None)

    def of_type(self, *types) -> list[Statement]:
        return [s for s in self.statements if isinstance(s, types)]


# --- parser -----------------------------------------------------------------


@dataclass
class _Token:
    text: str
    col: int  # 1-based

    @property
    def last_col(self) -> int:
        return self.col + len(self.text) - 1


class _Line:
    """Token cursor over one source line."""

    def __init__(self, lineno: int, tokens: list[_Token]):
        self.lineno = lineno
        self.tokens = tokens
        self.pos = 0

    def _end_col(self) -> int:
        return self.tokens[-1].last_col

    def error(self, expected: str, tok: _Token | None = None) -> ParseError:
        if tok is None:
            return ParseError(self.lineno, self._end_col(), expected, "end of line")
        return ParseError(self.lineno, tok.col, expected, repr(tok.text))

    def next(self, expected: str) -> _Token:
        if self.pos >= len(self.tokens):
            raise self.error(expected)
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def end(self, expected: str = "end of line"):
        tok = self.peek()
        if tok is not None:
            raise self.error(expected, tok)

    def choice(self, options: tuple[str, ...], what: str) -> tuple[str, _Token]:
        tok = self.next(what)
        value = tok.text.lower()
        if value not in options:
            raise self.error(what, tok)
        return value, tok


def _tokenize(text: str) -> list[_Token]:
    code = text.split("#", 1)[0]
    return [_Token(m.group(), m.start() + 1) for m in TOKEN_RE.finditer(code)]


class _Parser:
    def __init__(self):
        self.declared: dict[str, tuple[int, int]] = {}
        self.initialized: set[str] = set()
        self.evolving = False  # a gate, collapse or postselect has been seen
        self.postselected: tuple[str, ...] = ()
        self.run: tuple[Run, _Line, _Token] | None = None
        self.statements: list[Statement] = []

    # token-level helpers with semantic checks

    def wire(self, ln: _Line) -> tuple[str, _Token]:
        tok = ln.next("wire name")
        if not WIRE_RE.match(tok.text):
            raise ln.error("wire name", tok)
        if tok.text not in self.declared:
            raise ln.error("declared wire", tok)
        if tok.text in self.postselected:
            raise ln.error("wire not consumed by postselect", tok)
        return tok.text, tok

    def bit(self, ln: _Line) -> int:
        value, _ = ln.choice(("0", "1"), "0 or 1")
        return int(value)

    def distinct(self, ln: _Line, toks: list[_Token]):
        seen = set()
        for tok in toks:
            if tok.text in seen:
                raise ln.error("distinct wires", tok)
            seen.add(tok.text)

    def init_target(self, ln: _Line, tok: _Token):
        if self.evolving:
            raise ln.error("initialization before gates, collapses and postselect", tok)
        if tok.text in self.initialized:
            raise ln.error("wire not yet initialized", tok)
        self.initialized.add(tok.text)

    # statements

    def statement(self, ln: _Line) -> Statement:
        if self.run is not None:
            raise ln.error("no statement after run", ln.tokens[0])
        kw = ln.next("statement keyword")
        key = kw.text.lower()
        n = ln.lineno
        if key == "wires":
            toks = [ln.next("wire name")]
            while ln.peek() is not None:
                toks.append(ln.next("wire name"))
            for tok in toks:
                if not WIRE_RE.match(tok.text):
                    raise ln.error("wire name", tok)
                if tok.text in self.declared:
                    raise ln.error("new wire name", tok)
                self.declared[tok.text] = (n, tok.col)
            return WireDecl(tuple(t.text for t in toks), n)
        if key == "bell":
            kind, _ = ln.choice(BELL_KINDS, "Bell kind (phi+, phi-, psi+, psi-)")
            (w1, t1), (w2, t2) = self.wire(ln), self.wire(ln)
            ln.end()
            self.distinct(ln, [t1, t2])
            self.init_target(ln, t1)
            self.init_target(ln, t2)
            return InitBell(kind, (w1, w2), n)
        if key == "set":
            w, t = self.wire(ln)
            bit = self.bit(ln)
            ln.end()
            self.init_target(ln, t)
            return InitBasis(w, bit, n)
        if key in GATE_ARITY:
            arity = GATE_ARITY[key]
            pairs = [self.wire(ln) for _ in range(arity)]
            ln.end(f"end of line ({key} takes {arity} wire{'s' if arity > 1 else ''})")
            self.distinct(ln, [t for _, t in pairs])
            if self.postselected:
                raise ln.error("gates before postselect", kw)
            self.evolving = True
            return Gate(key, tuple(w for w, _ in pairs), n)
        if key == "collapse":
            w, _ = self.wire(ln)
            basis, _ = ln.choice(BASES, "basis (std or diag)")
            outcome = self.bit(ln)
            ln.end()
            self.evolving = True
            return Collapse(w, basis, outcome, n)
        if key == "postselect":
            if self.postselected:
                raise ln.error("at most one postselect", kw)
            (w1, t1), (w2, t2) = self.wire(ln), self.wire(ln)
            kind, _ = ln.choice(BELL_KINDS, "Bell kind (phi+, phi-, psi+, psi-)")
            ln.end()
            self.distinct(ln, [t1, t2])
            self.evolving = True
            self.postselected = (w1, w2)
            return Postselect((w1, w2), kind, n)
        if key == "run":
            mode, mtok = ln.choice(RUN_MODES, "run mode (pctc, scan, dctc)")
            options: list[str] = []
            if mode == "dctc":
                toks = [self.wire(ln)[1]]
                while ln.peek() is not None:
                    toks.append(self.wire(ln)[1])
                self.distinct(ln, toks)
                options = [t.text for t in toks]
            ln.end()
            run = Run(mode, tuple(options), n)
            self.run = (run, ln, mtok)
            return run
        raise ln.error("statement keyword", kw)

    def finish(self):
        if self.run is None:
            return
        run, ln, mtok = self.run
        if run.mode == "scan":
            if tuple(self.declared) != SCAN_REGISTER:
                raise ln.error("wires B A C1 C2 declared for scan", mtok)
            if self.postselected and self.postselected != ("A", "C1"):
                raise ln.error("postselect A C1 for scan", mtok)
        elif run.mode == "dctc":
            if any(isinstance(s, (Collapse, Postselect)) for s in self.statements):
                raise ln.error("dctc program without collapse or postselect", mtok)
            if self.initialized & set(run.options):
                raise ln.error("uninitialized CTC wires", mtok)


def parse(source: str) -> Program:
    """Parse ``.ctc`` source; raises ParseError at the first problem."""
    p = _Parser()
    for lineno, raw in enumerate(source.split("\n"), start=1):
        if raw.endswith("\r"):
            raw = raw[:-1]
        tokens = _tokenize(raw)
        if not tokens:
            continue
        p.statements.append(p.statement(_Line(lineno, tokens)))
    p.finish()
    return Program(tuple(p.statements))


def format_statement(s: Statement) -> str:
    if isinstance(s, WireDecl):
        return "wires " + " ".join(s.names)
    if isinstance(s, InitBell):
        return f"bell {s.kind} {s.wires[0]} {s.wires[1]}"
    if isinstance(s, InitBasis):
        return f"set {s.wire} {s.bit}"
    if isinstance(s, Gate):
        return " ".join((s.name, *s.wires))
    if isinstance(s, Collapse):
        return f"collapse {s.wire} {s.basis} {s.outcome}"
    if isinstance(s, Postselect):
        return f"postselect {s.wires[0]} {s.wires[1]} {s.kind}"
    if isinstance(s, Run):
        return " ".join(("run", s.mode, *s.options))
    raise TypeError(f"not a statement: {s!r}")


def format_program(p: Program) -> str:
    """Canonical text; ``parse(format_program(p)) == p``."""
    return "".join(format_statement(s) + "\n" for s in p.statements)
