"""Supported models and the logical classification of programs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .formulas import Formula, InputEvaluation, consistent, render
from .grounding import AnalysisContext, ResourceLimit, Universe
from .syntax import subterms

NON_REACTIVE = "NonReactive"
NON_DETERMINISTIC = "NonDeterministic"
COHERENT = "Coherent"

DEFAULT_MAX_CHOICES = 24
WITNESS_CAP = 8


@dataclass(frozen=True)
class Model:
    facts: frozenset

    def sorted(self) -> list:
        return sorted(self.facts, key=render)

    def render(self) -> list:
        return [render(f) for f in self.sorted()]

    def restrict(self, ieval: InputEvaluation) -> "Model":
        return Model(frozenset(f for f in self.facts if f.ieval == ieval))

    def __len__(self):
        return len(self.facts)


@dataclass
class LogicalVerdict:
    status: str
    models: list
    count: int
    per_evaluation: dict = field(default_factory=dict)

    @property
    def unique_model(self) -> Optional[Model]:
        return self.models[0] if self.status == COHERENT else None


def status_for(count: int) -> str:
    if count == 0:
        return NON_REACTIVE
    return COHERENT if count == 1 else NON_DETERMINISTIC


def is_supported_model(u: Universe, T, P: Optional[Iterable] = None,
                       L: Optional[Iterable] = None) -> bool:
    """Check both supported-model conditions for ``T`` w.r.t. terms ``P`` and labels ``L``.

    ``P`` defaults to the whole term universe and ``L`` to every label; a label
    is a ``(kind, ieval, signal)`` triple as in ``Formula.label``.
    """
    facts = frozenset(T.facts if isinstance(T, Model) else T)
    for f in facts:
        if not any(consistent(facts, ri.premises) for ri in u.instances(f)):
            return False
    P = set(u.terms if P is None else P)
    L = None if L is None else set(L)
    for f in u.pos_space:
        if f in facts or f.source not in P or (L is not None and f.label not in L):
            continue
        if any(consistent(facts, ri.premises) for ri in u.instances(f)):
            return False
    return True


# --- pruned search -------------------------------------------------------------


class _Compiled:
    """Per-evaluation instances over supportable facts as index sets."""

    def __init__(self, u: Universe, facts: list):
        self.facts = facts
        index = {f: i for i, f in enumerate(facts)}
        by_label: dict = {}
        for i, f in enumerate(facts):
            by_label.setdefault((f.source, f.label), []).append(i)
        self.rules = []  # per fact: list of (pos indices, neg indices)
        self.watch = [[] for _ in facts]  # fact -> facts whose instances mention it
        for i, f in enumerate(facts):
            alts = []
            for ri in u.instances(f):
                pos, neg, dead = [], [], False
                for prem in ri.premises:
                    if prem.positive:
                        if prem not in index:
                            dead = True
                            break
                        pos.append(index[prem])
                    else:
                        neg.extend(by_label.get((prem.source, prem.label), ()))
                if not dead:
                    alts.append((tuple(pos), tuple(neg)))
                    for j in itertools.chain(pos, neg):
                        self.watch[j].append(i)
            self.rules.append(alts)


def _propagate(cp: _Compiled, val: list, queue: list) -> bool:
    """Unit propagation of condition 1 and 2; False on conflict."""
    while queue:
        i = queue.pop()
        must, can = False, False
        for pos, neg in cp.rules[i]:
            if any(val[j] is False for j in pos) or any(val[j] is True for j in neg):
                continue
            can = True
            if all(val[j] is True for j in pos) and all(val[j] is False for j in neg):
                must = True
                break
        if must:
            if val[i] is False:
                return False
            if val[i] is None:
                val[i] = True
                queue.extend(cp.watch[i])
                queue.append(i)
        elif not can:
            if val[i] is True:
                return False
            if val[i] is None:
                val[i] = False
                queue.extend(cp.watch[i])
                queue.append(i)
    return True


def _search(cp: _Compiled, max_choices: int) -> list:
    n = len(cp.facts)
    val = [None] * n
    if not _propagate(cp, val, list(range(n))):
        return []
    open_ = sum(v is None for v in val)
    if open_ > max_choices:
        raise ResourceLimit(f"{open_} undetermined facts exceed the cap of {max_choices}")
    found = []

    def go(val):
        try:
            i = val.index(None)
        except ValueError:
            found.append(frozenset(cp.facts[j] for j in range(n) if val[j]))
            return
        for choice in (True, False):
            nxt = list(val)
            nxt[i] = choice
            if _propagate(cp, nxt, [i] + cp.watch[i]):
                go(nxt)

    go(val)
    return found


def models_for_evaluation(u: Universe, ieval: InputEvaluation,
                          max_choices: int = DEFAULT_MAX_CHOICES) -> list:
    facts = sorted((f for f in u.supportable if f.ieval == ieval), key=render)
    found = _search(_Compiled(u, facts), max_choices)
    return sorted((Model(m) for m in found), key=lambda m: m.render())


def _product(per_eval: list, cap: Optional[int]) -> list:
    out = []
    for combo in itertools.product(*per_eval):
        out.append(Model(frozenset().union(*(m.facts for m in combo))))
        if cap is not None and len(out) >= cap:
            break
    return out


def enumerate_supported_models(u: Universe, ctx: AnalysisContext = None, *,
                               evaluations=None, max_choices: int = DEFAULT_MAX_CHOICES,
                               cap: Optional[int] = None) -> list:
    """All supported models over the residual universe, every label included.

    Models are products of independent per-evaluation models.  ``cap`` bounds
    how many are materialised.
    """
    evaluations = u.evaluations if evaluations is None else evaluations
    per_eval = [models_for_evaluation(u, I, max_choices) for I in evaluations]
    return _product(per_eval, cap)


def classify_logical(u: Universe, ctx: AnalysisContext = None, *, evaluations=None,
                     max_choices: int = DEFAULT_MAX_CHOICES) -> LogicalVerdict:
    evaluations = u.evaluations if evaluations is None else evaluations
    per_eval = [models_for_evaluation(u, I, max_choices) for I in evaluations]
    count = 1
    for ms in per_eval:
        count *= len(ms)
    per = {I: (status_for(len(ms)), len(ms)) for I, ms in zip(evaluations, per_eval)}
    return LogicalVerdict(status_for(count), _product(per_eval, WITNESS_CAP), count, per)


def residual_facts(u: Universe, model: Model) -> list:
    """Facts of ``model`` whose source is not a subterm of the analysed program."""
    subs = subterms(u.context)
    return [f for f in model.sorted() if f.source not in subs]


# --- naive oracle ----------------------------------------------------------------


def enumerate_supported_models_naive(u: Universe, ieval: InputEvaluation) -> list:
    """Test every subset of the evaluation's positive formulae.

    Exponential in the size of the space; intended for tiny programs only.
    """
    space = sorted(u.space_for(ieval), key=render)
    index = {f: i for i, f in enumerate(space)}
    rules = []
    for f in space:
        alts = []
        for ri in u.instances(f):
            pos, neg, ok = 0, 0, True
            for prem in ri.premises:
                if prem.positive:
                    if prem not in index:
                        ok = False
                        break
                    pos |= 1 << index[prem]
                else:
                    for g in space:
                        if g.source == prem.source and g.label == prem.label:
                            neg |= 1 << index[g]
            if ok:
                alts.append((pos, neg))
        rules.append(alts)
    found = []
    for T in range(1 << len(space)):
        derived = 0
        for i, alts in enumerate(rules):
            if any(pos & ~T == 0 and neg & T == 0 for pos, neg in alts):
                derived |= 1 << i
        if derived == T:
            found.append(Model(frozenset(f for i, f in enumerate(space) if T >> i & 1)))
    return sorted(found, key=lambda m: m.render())
