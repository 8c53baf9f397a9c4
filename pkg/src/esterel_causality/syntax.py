"""Abstract syntax, parser and printer for the instantaneous Esterel subset.

Concrete grammar::

    program ::= header* stmt
    header  ::= ("input" | "output") ID ("," ID)* ";"
    stmt    ::= seq ("||" seq)*
    seq     ::= atom (";" atom)*
    atom    ::= "nothing" | "emit" ID
              | "present" ID "then" stmt ["else" stmt] "end"
              | "signal" ID "in" stmt "end"
              | "(" stmt ")"

``;`` binds tighter than ``||``; both associate to the left.  ``--`` starts a
line comment.  Signals not declared in the header are local.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

INPUT = "input"
OUTPUT = "output"
LOCAL = "local"

KEYWORDS = frozenset(
    {"nothing", "emit", "present", "then", "else", "end", "signal", "in", "input", "output"}
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class SemErr(Exception):
    """Well-formed source that violates a signal declaration rule."""


class FreshnessViolation(Exception):
    pass


@dataclass(frozen=True, order=True)
class SignalId:
    name: str
    kind: str = LOCAL

    def __post_init__(self):
        if not self.name:
            raise ValueError("signal name must be nonempty")
        if self.kind not in (INPUT, OUTPUT, LOCAL):
            raise ValueError(f"bad signal kind {self.kind!r}")

    def __str__(self):
        return self.name


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Emit:
    signal: SignalId


@dataclass(frozen=True)
class Present:
    cond: SignalId
    then: "Program"
    else_: "Program"


@dataclass(frozen=True)
class Seq:
    first: "Program"
    second: "Program"


@dataclass(frozen=True)
class Par:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class Local:
    signal: SignalId
    body: "Program"


Program = Union[Nil, Emit, Present, Seq, Par, Local]

NIL = Nil()


def children(p: Program) -> tuple:
    if isinstance(p, Present):
        return (p.then, p.else_)
    if isinstance(p, (Seq,)):
        return (p.first, p.second)
    if isinstance(p, Par):
        return (p.left, p.right)
    if isinstance(p, Local):
        return (p.body,)
    return ()


def signals_of(p: Program) -> set:
    """Every SignalId occurring in ``p``, binders included."""
    out = set()
    stack = [p]
    while stack:
        t = stack.pop()
        if isinstance(t, Emit):
            out.add(t.signal)
        elif isinstance(t, Present):
            out.add(t.cond)
        elif isinstance(t, Local):
            out.add(t.signal)
        stack.extend(children(t))
    return out


def subterms(p: Program) -> frozenset:
    out = set()
    stack = [p]
    while stack:
        t = stack.pop()
        if t in out:
            continue
        out.add(t)
        stack.extend(children(t))
    return frozenset(out)


def substitute(p: Program, old: SignalId, new: SignalId) -> Program:
    """Rename every occurrence of ``old`` (binders and uses) to ``new``."""
    if any(s.name == new.name for s in signals_of(p)):
        raise FreshnessViolation(f"{new.name} occurs in {pretty(p)}")
    return _rename(p, old.name, new)


def _rename(p: Program, old: str, new: SignalId) -> Program:
    def sig(s):
        return new if s.name == old else s

    if isinstance(p, Nil):
        return p
    if isinstance(p, Emit):
        return Emit(sig(p.signal))
    if isinstance(p, Present):
        return Present(sig(p.cond), _rename(p.then, old, new), _rename(p.else_, old, new))
    if isinstance(p, Seq):
        return Seq(_rename(p.first, old, new), _rename(p.second, old, new))
    if isinstance(p, Par):
        return Par(_rename(p.left, old, new), _rename(p.right, old, new))
    if isinstance(p, Local):
        return Local(sig(p.signal), _rename(p.body, old, new))
    raise TypeError(p)


# --- environments ------------------------------------------------------------


@dataclass(frozen=True)
class SignalEnv:
    inputs: tuple = ()
    outputs: tuple = ()
    locals: tuple = ()

    def __post_init__(self):
        names = [s.name for s in self.all()]
        if len(names) != len(set(names)):
            raise SemErr("signal sets of an environment must be disjoint")

    def all(self) -> tuple:
        return self.inputs + self.outputs + self.locals

    def names(self) -> set:
        return {s.name for s in self.all()}

    def emittable(self) -> tuple:
        """The output and local signals, i.e. everything a program may emit."""
        return self.outputs + self.locals

    def lookup(self, name: str) -> SignalId:
        for s in self.all():
            if s.name == name:
                return s
        raise KeyError(name)

    def with_locals(self, extra: Iterable[SignalId]) -> "SignalEnv":
        known = self.names()
        new = tuple(sorted(s for s in set(extra) if s.name not in known))
        return SignalEnv(self.inputs, self.outputs, self.locals + new)


def fresh_signal(env: SignalEnv, hint: SignalId) -> SignalId:
    used = env.names()
    n = 0
    while f"{hint.name}${n}" in used:
        n += 1
    return SignalId(f"{hint.name}${n}", LOCAL)


def env_of(p: Program, inputs=(), outputs=()) -> SignalEnv:
    """Environment for ``p`` given the declared input and output names."""
    inputs = tuple(SignalId(n, INPUT) for n in inputs)
    outputs = tuple(SignalId(n, OUTPUT) for n in outputs)
    declared = {s.name for s in inputs + outputs}
    locs = sorted({s.name for s in signals_of(p)} - declared)
    return SignalEnv(inputs, outputs, tuple(SignalId(n, LOCAL) for n in locs))


# --- printing ----------------------------------------------------------------


def pretty(p: Program) -> str:
    if isinstance(p, Nil):
        return "nothing"
    if isinstance(p, Emit):
        return f"emit {p.signal.name}"
    if isinstance(p, Present):
        return f"present {p.cond.name} then {pretty(p.then)} else {pretty(p.else_)} end"
    if isinstance(p, Local):
        return f"signal {p.signal.name} in {pretty(p.body)} end"
    if isinstance(p, Seq):
        left = pretty(p.first)
        if isinstance(p.first, Par):
            left = f"({left})"
        right = pretty(p.second)
        if isinstance(p.second, (Seq, Par)):
            right = f"({right})"
        return f"{left} ; {right}"
    if isinstance(p, Par):
        right = pretty(p.right)
        if isinstance(p.right, Par):
            right = f"({right})"
        return f"{pretty(p.left)} || {right}"
    raise TypeError(p)


def pretty_program(p: Program, env: SignalEnv) -> str:
    lines = []
    if env.inputs:
        lines.append("input " + ", ".join(s.name for s in env.inputs) + ";")
    if env.outputs:
        lines.append("output " + ", ".join(s.name for s in env.outputs) + ";")
    lines.append(pretty(p))
    return "\n".join(lines)


# --- parsing -----------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<par>\|\|)
  | (?P<punct>[;,()])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(src: str) -> list:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group()
        kind = m.lastgroup
        if kind == "ident" and text in KEYWORDS:
            kind = "kw"
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0
        self.kinds: dict = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def accept(self, text):
        if self.tok.text == text and self.tok.kind != "ident":
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def ident(self) -> str:
        tok = self.tok
        if tok.kind != "ident":
            raise self.error(f"expected a signal name, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok.text

    def header(self):
        declared = {}
        while self.tok.kind == "kw" and self.tok.text in (INPUT, OUTPUT):
            kind = self.tok.text
            self.i += 1
            names = [self.ident()]
            while self.accept(","):
                names.append(self.ident())
            self.expect(";")
            for n in names:
                if n in declared:
                    if declared[n] != kind:
                        raise SemErr(f"signal {n} declared both {declared[n]} and {kind}")
                    raise SemErr(f"duplicate declaration of {n}")
                declared[n] = kind
        self.kinds = declared
        return declared

    def signal(self, name) -> SignalId:
        return SignalId(name, self.kinds.get(name, LOCAL))

    def stmt(self):
        left = self.seq()
        while self.accept("||"):
            left = Par(left, self.seq())
        return left

    def seq(self):
        left = self.atom()
        while self.accept(";"):
            left = Seq(left, self.atom())
        return left

    def atom(self):
        tok = self.tok
        if self.accept("nothing"):
            return NIL
        if self.accept("emit"):
            at = self.tok
            s = self.signal(self.ident())
            if s.kind == INPUT:
                raise SemErr(f"{at.line}:{at.col}: cannot emit input signal {s.name}")
            return Emit(s)
        if self.accept("present"):
            s = self.signal(self.ident())
            self.expect("then")
            then = self.stmt()
            else_ = self.stmt() if self.accept("else") else NIL
            self.expect("end")
            return Present(s, then, else_)
        if self.accept("signal"):
            at = self.tok
            s = self.signal(self.ident())
            if s.kind != LOCAL:
                raise SemErr(f"{at.line}:{at.col}: {s.kind} signal {s.name} cannot be declared local")
            self.expect("in")
            body = self.stmt()
            self.expect("end")
            return Local(s, body)
        if self.accept("("):
            inner = self.stmt()
            self.expect(")")
            return inner
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")


def parse(source: str):
    """Parse source text into ``(program, env)``.

    Raises ParseError on syntax errors and SemErr on declaration errors.
    """
    ps = _Parser(source)
    declared = ps.header()
    prog = ps.stmt()
    if ps.tok.kind != "eof":
        raise ps.error(f"unexpected {ps.tok.text!r} after program")
    inputs = [n for n, k in declared.items() if k == INPUT]
    outputs = [n for n, k in declared.items() if k == OUTPUT]
    return prog, env_of(prog, inputs, outputs)


def iter_nodes(p: Program) -> Iterator[Program]:
    yield p
    for c in children(p):
        yield from iter_nodes(c)
