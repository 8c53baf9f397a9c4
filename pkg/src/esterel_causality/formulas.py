"""Ground formulae over the Esterel subset and the contradiction relation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .syntax import Program, SignalEnv, SignalId, pretty

EMITS = "emits"
TERM = "term"
TRANS = "trans"


@dataclass(frozen=True, order=True)
class InputEvaluation:
    """A total assignment of presence (True) / absence (False) to the inputs."""

    items: tuple = ()

    @classmethod
    def of(cls, **polarity: bool) -> "InputEvaluation":
        return cls(tuple(sorted(polarity.items())))

    def present(self, name: str) -> bool:
        for n, v in self.items:
            if n == name:
                return v
        raise KeyError(name)

    def __str__(self):
        if not self.items:
            return "∅"
        return "{" + ",".join(f"{n}{'+' if v else '-'}" for n, v in self.items) + "}"


def all_input_evaluations(env: SignalEnv) -> list:
    """Every total input evaluation, ordered by input name with present first."""
    names = sorted(s.name for s in env.inputs)
    return [
        InputEvaluation(tuple(zip(names, vals)))
        for vals in itertools.product((True, False), repeat=len(names))
    ]


def parse_evaluation(text: str, env: SignalEnv) -> InputEvaluation:
    """Parse ``i=+,j=-`` into an evaluation over ``env.inputs``."""
    given = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, _, pol = part.partition("=")
        if pol not in ("+", "-"):
            raise ValueError(f"bad polarity in {part!r}; use name=+ or name=-")
        given[name.strip()] = pol == "+"
    expected = {s.name for s in env.inputs}
    if set(given) != expected:
        raise ValueError(f"evaluation must assign exactly the inputs {sorted(expected)}")
    return InputEvaluation(tuple(sorted(given.items())))


@dataclass(frozen=True)
class Formula:
    positive: bool
    kind: str
    source: Program
    ieval: InputEvaluation
    signal: Optional[SignalId] = None
    target: Optional[Program] = None

    def __post_init__(self):
        if self.kind not in (EMITS, TERM, TRANS):
            raise ValueError(self.kind)
        if (self.kind == TERM) != (self.signal is None):
            raise ValueError("only termination formulae omit the signal")
        if self.kind == TRANS and self.positive and self.target is None:
            raise ValueError("positive transitions need a target")
        if self.target is not None and not (self.kind == TRANS and self.positive):
            raise ValueError("negative formulae and predicates carry no target")

    @property
    def label(self) -> tuple:
        return (self.kind, self.ieval, self.signal)

    def negate(self) -> "Formula":
        """The no-target formula of opposite polarity on the same label."""
        return Formula(not self.positive, self.kind, self.source, self.ieval, self.signal)

    def __str__(self):
        return render(self)


def emits(p: Program, ieval: InputEvaluation, x: SignalId, positive=True) -> Formula:
    return Formula(positive, EMITS, p, ieval, x)


def term(p: Program, ieval: InputEvaluation, positive=True) -> Formula:
    return Formula(positive, TERM, p, ieval)


def trans(p: Program, ieval: InputEvaluation, x: SignalId, target: Program = None) -> Formula:
    """Positive transition, or the negative ``p -/x->`` when target is None."""
    return Formula(target is not None, TRANS, p, ieval, x, target)


def render(f: Formula) -> str:
    src = pretty(f.source)
    if f.kind == EMITS:
        body = f"{src} emits[{f.ieval}] {f.signal.name}"
    elif f.kind == TERM:
        body = f"{src} term[{f.ieval}]"
    elif f.positive:
        body = f"{src} --{f.ieval},{f.signal.name}--> {pretty(f.target)}"
    else:
        body = f"{src} --{f.ieval},{f.signal.name}-->"
    return body if f.positive else f"not {body}"


def sort_key(f: Formula) -> str:
    return render(f)


def contradicts(f: Formula, g: Formula) -> bool:
    return f.positive != g.positive and f.label == g.label and f.source == g.source


def consistent(T: Iterable[Formula], phi: Iterable[Formula]) -> bool:
    """True iff ``T`` satisfies every formula of ``phi``.

    Positive members must be in ``T``; negative members must not be
    contradicted by any member of ``T``.
    """
    T = T if isinstance(T, (set, frozenset)) else set(T)
    keys = None
    for g in phi:
        if g.positive:
            if g not in T:
                return False
        else:
            if keys is None:
                keys = {(f.source, f.label) for f in T}
            if (g.source, g.label) in keys:
                return False
    return True

