"""Finite grounding of the deduction rules for emission, termination and transition.

Rule schemas are matched against a concrete conclusion; variables that only
occur in premises (an intermediate label or target) range over the finite
term universe and signal set of the analysed program.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .formulas import (
    EMITS,
    TERM,
    TRANS,
    Formula,
    all_input_evaluations,
    emits,
    render,
    term,
    trans,
)
from .syntax import (
    INPUT,
    NIL,
    Emit,
    Local,
    Nil,
    Par,
    Present,
    Program,
    Seq,
    SignalEnv,
    fresh_signal,
    pretty,
    signals_of,
    substitute,
    subterms,
)

EMISSION_RULES = ("e0", "s0", "s1", "s2", "p0", "p1", "f0", "f1", "f2", "f3", "en0")
TRANSITION_RULES = (
    "nil", "em",
    "seq0", "seq1", "seq2", "seq3", "seq4",
    "par0", "par1", "par2", "par3", "par4",
    "if0", "if1", "if2", "if3", "if4", "if5", "if6", "if7",
    "enc0", "enc1",
)
COLLAPSED_EMISSION_RULE = "emit*"
RULE_NAMES = EMISSION_RULES + TRANSITION_RULES

DEFAULT_MAX_SPACE = 200_000


class ResourceLimit(Exception):
    pass


@dataclass(frozen=True)
class AnalysisContext:
    context: Program
    env: SignalEnv


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    premises: tuple
    conclusion: Formula

    def __str__(self):
        prem = "".join(render(p) + ", " for p in self.premises).rstrip(", ")
        return f"{self.rule}: {prem + ' ' if prem else ''}⊢ {render(self.conclusion)}"


def _local_signals(term: Program, base: SignalEnv) -> SignalEnv:
    return base.with_locals(signals_of(term))


def open_local(term: Local, base: SignalEnv):
    """The fresh name and renamed body used when deriving facts of ``term``."""
    fresh = fresh_signal(_local_signals(term, base), term.signal)
    return fresh, substitute(term.body, term.signal, fresh)


def _targets(p: Program, base: SignalEnv, memo: dict) -> frozenset:
    """Every term that can appear as the target of a transition of ``p``."""
    if p in memo:
        return memo[p]
    if isinstance(p, Nil):
        out = frozenset()
    elif isinstance(p, Emit):
        out = frozenset({NIL})
    elif isinstance(p, Present):
        out = _targets(p.then, base, memo) | _targets(p.else_, base, memo)
    elif isinstance(p, Seq):
        out = _targets(p.first, base, memo) | _targets(p.second, base, memo)
    elif isinstance(p, Par):
        left = _targets(p.left, base, memo)
        right = _targets(p.right, base, memo)
        out = left | right | {Par(a, b) for a in left for b in right}
    elif isinstance(p, Local):
        fresh, body = open_local(p, base)
        out = frozenset(
            Local(p.signal, substitute(t, fresh, p.signal)) for t in _targets(body, base, memo)
        )
    else:
        raise TypeError(p)
    memo[p] = out
    return out


def residual_universe(ctx: AnalysisContext) -> frozenset:
    """Subterms of the context closed under transition targets and local opening."""
    base = ctx.env
    memo: dict = {}
    terms: set = set()
    todo = [ctx.context]
    while todo:
        t = todo.pop()
        for s in subterms(t):
            if s in terms:
                continue
            terms.add(s)
            todo.extend(_targets(s, base, memo))
            if isinstance(s, Local):
                todo.append(open_local(s, base)[1])
    return frozenset(terms)


def _term_key(p: Program):
    return (len(pretty(p)), pretty(p))


@dataclass
class Universe:
    ctx: AnalysisContext
    terms: tuple
    signals: tuple
    evaluations: tuple
    pos_space: frozenset
    supportable: frozenset = frozenset()
    collapsed: bool = False
    _instances: dict = field(default_factory=dict, repr=False)
    _opened: dict = field(default_factory=dict, repr=False)

    @property
    def context(self) -> Program:
        return self.ctx.context

    def opened(self, p: Local):
        if p not in self._opened:
            self._opened[p] = open_local(p, self.ctx.env)
        return self._opened[p]

    def space_for(self, ieval) -> list:
        return [f for f in self.pos_space if f.ieval == ieval]

    def instances(self, f: Formula) -> tuple:
        """All ground rule instances concluding the positive formula ``f``."""
        try:
            return self._instances[f]
        except KeyError:
            out = tuple(_match(self, f))
            self._instances[f] = out
            return out

    def contradicting_instances(self, g: Formula) -> list:
        """All instances whose conclusion contradicts the negative formula ``g``."""
        if g.kind != TRANS:
            return list(self.instances(g.negate()))
        out = []
        for t in self.terms:
            out.extend(self.instances(trans(g.source, g.ieval, g.signal, t)))
        return out


def formula_space(terms, signals, evaluations) -> frozenset:
    out = set()
    for I in evaluations:
        for p in terms:
            out.add(term(p, I))
            for x in signals:
                out.add(emits(p, I, x))
                for t in terms:
                    out.add(trans(p, I, x, t))
    return frozenset(out)


def ground_space(ctx: AnalysisContext, *, collapsed: bool = False,
                 max_space: int = DEFAULT_MAX_SPACE) -> Universe:
    """Build the universe of terms and positive formulae for ``ctx``.

    With ``collapsed=True`` the emission rules are replaced by the single rule
    deriving ``p emits x`` from any transition ``p --x--> p'``.
    """
    terms = residual_universe(ctx)
    signals = set(ctx.env.emittable())
    for t in terms:
        signals |= {s for s in signals_of(t) if s.kind != INPUT}
    signals = tuple(sorted(signals))
    evaluations = tuple(all_input_evaluations(ctx.env))
    n = len(terms)
    size = len(evaluations) * n * (1 + len(signals) * (1 + n))
    if size > max_space:
        raise ResourceLimit(f"{size} positive formulae exceed the cap of {max_space}")
    u = Universe(
        ctx=ctx,
        terms=tuple(sorted(terms, key=_term_key)),
        signals=signals,
        evaluations=evaluations,
        pos_space=formula_space(terms, signals, evaluations),
        collapsed=collapsed,
    )
    u.supportable = supportable_space(u)
    return u


def instances_concluding(u: Universe, f: Formula) -> tuple:
    return u.instances(f)


def supportable_space(u: Universe) -> frozenset:
    """Greatest set of formulae each concluded by an instance whose positive
    premises are again in the set (negative premises ignored)."""
    alive = set(u.pos_space)
    deps: dict = {}
    for f in u.pos_space:
        for ri in u.instances(f):
            for p in ri.premises:
                if p.positive:
                    deps.setdefault(p, set()).add(f)
    todo = list(alive)
    while todo:
        f = todo.pop()
        if f not in alive:
            continue
        ok = any(all(p in alive for p in ri.premises if p.positive) for ri in u.instances(f))
        if not ok:
            alive.discard(f)
            todo.extend(g for g in deps.get(f, ()) if g in alive)
    return frozenset(alive)


# --- rule matching -----------------------------------------------------------


def _emission(u: Universe, f: Formula):
    p, I, x, c = f.source, f.ieval, f.signal, u.context
    if u.collapsed:
        for t in u.terms:
            yield RuleInstance(COLLAPSED_EMISSION_RULE, (trans(p, I, x, t),), f)
        return
    if isinstance(p, Emit):
        if p.signal == x:
            yield RuleInstance("e0", (), f)
    elif isinstance(p, Seq):
        a, b = p.first, p.second
        yield RuleInstance("s0", (emits(a, I, x),), f)
        yield RuleInstance("s1", (term(a, I), emits(b, I, x)), f)
        for x1 in u.signals:
            for a1 in u.terms:
                yield RuleInstance("s2", (trans(a, I, x1, a1), term(a1, I), emits(b, I, x)), f)
    elif isinstance(p, Par):
        yield RuleInstance("p0", (emits(p.left, I, x),), f)
        yield RuleInstance("p1", (emits(p.right, I, x),), f)
    elif isinstance(p, Present):
        s = p.cond
        if s.kind == INPUT:
            if I.present(s.name):
                yield RuleInstance("f2", (emits(p.then, I, x),), f)
            else:
                yield RuleInstance("f3", (emits(p.else_, I, x),), f)
        else:
            yield RuleInstance("f0", (emits(c, I, s), emits(p.then, I, x)), f)
            yield RuleInstance("f1", (emits(c, I, s, positive=False), emits(p.else_, I, x)), f)
    elif isinstance(p, Local):
        fresh, body = u.opened(p)
        for x1 in _unrenamed_labels(p, fresh, x):
            yield RuleInstance("en0", (emits(body, I, x1),), f)


def _unrenamed_labels(p: Local, fresh, x) -> list:
    """Premise labels ``l`` with ``l[s/fresh] == x`` for binder ``s``."""
    if x == fresh:
        return []
    if x.name == p.signal.name:
        return [fresh, x]
    return [x]


def _termination(u: Universe, f: Formula):
    p, I, c = f.source, f.ieval, u.context
    if isinstance(p, Nil):
        yield RuleInstance("nil", (), f)
    elif isinstance(p, Seq):
        yield RuleInstance("seq4", (term(p.first, I), term(p.second, I)), f)
    elif isinstance(p, Par):
        yield RuleInstance("par4", (term(p.left, I), term(p.right, I)), f)
    elif isinstance(p, Present):
        s = p.cond
        if s.kind == INPUT:
            # then-branch under presence, else-branch under absence
            if I.present(s.name):
                yield RuleInstance("if6", (term(p.then, I),), f)
            else:
                yield RuleInstance("if7", (term(p.else_, I),), f)
        else:
            yield RuleInstance("if4", (emits(c, I, s), term(p.then, I)), f)
            yield RuleInstance("if5", (emits(c, I, s, positive=False), term(p.else_, I)), f)
    elif isinstance(p, Local):
        _, body = u.opened(p)
        yield RuleInstance("enc1", (term(body, I),), f)


def _transition(u: Universe, f: Formula):
    p, I, x, t, c = f.source, f.ieval, f.signal, f.target, u.context
    if isinstance(p, Emit):
        if p.signal == x and t == NIL:
            yield RuleInstance("em", (), f)
    elif isinstance(p, Seq):
        a, b = p.first, p.second
        for x1 in u.signals:
            for a1 in u.terms:
                yield RuleInstance(
                    "seq0", (trans(a, I, x, a1), term(a1, I), trans(b, I, x1, t)), f)
        for x1 in u.signals:
            for a1 in u.terms:
                yield RuleInstance(
                    "seq1", (trans(a, I, x1, a1), term(a1, I), trans(b, I, x, t)), f)
        yield RuleInstance("seq2", (term(a, I), trans(b, I, x, t)), f)
        yield RuleInstance("seq3", (trans(a, I, x, t), term(t, I), term(b, I)), f)
    elif isinstance(p, Par):
        a, b = p.left, p.right
        if isinstance(t, Par):
            for x1 in u.signals:
                yield RuleInstance(
                    "par0", (trans(a, I, x, t.left), trans(b, I, x1, t.right)), f)
            for x1 in u.signals:
                yield RuleInstance(
                    "par1", (trans(a, I, x1, t.left), trans(b, I, x, t.right)), f)
        yield RuleInstance("par2", (term(a, I), trans(b, I, x, t)), f)
        yield RuleInstance("par3", (trans(a, I, x, t), term(b, I)), f)
    elif isinstance(p, Present):
        s = p.cond
        if s.kind == INPUT:
            if I.present(s.name):
                yield RuleInstance("if2", (trans(p.then, I, x, t),), f)
            else:
                yield RuleInstance("if3", (trans(p.else_, I, x, t),), f)
        else:
            yield RuleInstance("if0", (emits(c, I, s), trans(p.then, I, x, t)), f)
            yield RuleInstance("if1", (emits(c, I, s, positive=False), trans(p.else_, I, x, t)), f)
    elif isinstance(p, Local):
        if not (isinstance(t, Local) and t.signal == p.signal):
            return
        fresh, body = u.opened(p)
        if any(s.name == fresh.name for s in signals_of(t.body)):
            return
        target = substitute(t.body, p.signal, fresh)
        for x1 in _unrenamed_labels(p, fresh, x):
            yield RuleInstance("enc0", (trans(body, I, x1, target),), f)


def _match(u: Universe, f: Formula):
    if not f.positive:
        raise ValueError("rules only conclude positive formulae")
    if f.kind == EMITS:
        return _emission(u, f)
    if f.kind == TERM:
        return _termination(u, f)
    return _transition(u, f)


def dump_instances(u: Universe, formulas=None) -> str:
    """One instance per line, for debugging."""
    formulas = sorted(formulas if formulas is not None else u.pos_space, key=render)
    return "\n".join(str(ri) for f in formulas for ri in u.instances(f))
