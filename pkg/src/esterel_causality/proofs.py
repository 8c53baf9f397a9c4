"""Supported proofs, constructiveness and the theorem checks linking both semantics."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .formulas import EMITS, TERM, TRANS, Formula, contradicts, emits, render, term, trans
from .grounding import AnalysisContext, RuleInstance, Universe
from .models import COHERENT, LogicalVerdict

PROVED_POSITIVE = "ProvedPositive"
PROVED_NEGATIVE = "ProvedNegative"
UNPROVABLE = "Unprovable"
MIXED = "Mixed"

DEFAULT_SWEEP_LIMIT = 5000


class PropertyViolation(Exception):
    pass


@dataclass(frozen=True)
class Refutation:
    """How one rule instance contradicting a negative root is blocked."""

    instance: RuleInstance
    premise: Formula
    witness: Formula


@dataclass(frozen=True)
class ProofTree:
    root: Formula
    rule: Optional[str] = None
    children: tuple = ()
    refutations: tuple = ()

    def rules(self) -> list:
        out = [self.rule] if self.rule else []
        for c in self.children:
            out.extend(c.rules())
        return out

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


class Prover:
    """Depth-first supported-proof search with path-aware memoisation.

    A goal already on the current path fails that branch.  Failures are only
    cached when no ancestor above the goal was hit during the search.
    """

    def __init__(self, u: Universe):
        self.u = u
        self.proved: dict = {}
        self.failed: set = set()

    def prove(self, goal: Formula) -> Optional[ProofTree]:
        tree = self._prove(goal, {})[0]
        return None if tree is None else contract(tree)

    def _prove(self, goal, path):
        if goal in self.proved:
            return self.proved[goal], math.inf
        if goal in self.failed:
            return None, math.inf
        if goal in path:
            return None, path[goal]
        depth = len(path)
        path[goal] = depth
        try:
            if goal.positive:
                tree, low = self._positive(goal, path)
            else:
                tree, low = self._negative(goal, path)
        finally:
            del path[goal]
        if tree is not None:
            self.proved[goal] = tree
        elif low >= depth:
            self.failed.add(goal)
        return tree, low

    def _positive(self, goal, path):
        low = math.inf
        for ri in self.u.instances(goal):
            kids = []
            for prem in ri.premises:
                sub, l = self._prove(prem, path)
                if sub is None:
                    low = min(low, l)
                    break
                kids.append(sub)
            else:
                return ProofTree(goal, ri.rule, tuple(kids)), math.inf
        return None, low

    def _negative(self, goal, path):
        low = math.inf
        kids: dict = {}
        refs = []
        for ri in self.u.contradicting_instances(goal):
            found = None
            for prem in ri.premises:
                for witness in self._contradictions(prem):
                    if witness in kids:
                        found = (prem, kids[witness])
                        break
                    sub, l = self._prove(witness, path)
                    if sub is not None:
                        kids[witness] = sub
                        found = (prem, sub)
                        break
                    low = min(low, l)
                if found:
                    break
            if found is None:
                return None, low
            refs.append(Refutation(ri, found[0], found[1].root))
        return ProofTree(goal, None, tuple(kids.values()), tuple(refs)), math.inf

    def _contradictions(self, prem: Formula):
        if prem.positive:
            return [prem.negate()]
        if prem.kind != TRANS:
            return [prem.negate()]
        return [trans(prem.source, prem.ieval, prem.signal, t) for t in self.u.terms]


def _occurrence(t: ProofTree, f: Formula) -> Optional[ProofTree]:
    for c in t.children:
        if c.root == f:
            return c
        hit = _occurrence(c, f)
        if hit is not None:
            return hit
    return None


def contract(t: ProofTree) -> ProofTree:
    """Remove repetitions of a formula along any path of ``t``.

    Memoised subproofs may mention a goal that sits above them; the inner
    occurrence is itself a proof of that goal and replaces the outer node.
    """
    while True:
        inner = _occurrence(t, t.root)
        if inner is None:
            break
        t = inner
    return ProofTree(t.root, t.rule, tuple(contract(c) for c in t.children), t.refutations)


def prove(u: Universe, goal: Formula, prover: Prover = None) -> Optional[ProofTree]:
    """A supported proof of ``goal`` or None when none exists."""
    return (prover or Prover(u)).prove(goal)


# --- independent checks ----------------------------------------------------------


def verify_tree(u: Universe, tree: ProofTree, _path=()) -> list:
    """Structural problems of ``tree``; an empty list means it is a supported proof."""
    problems = []
    root = tree.root
    if root in _path:
        problems.append(f"cycle at {render(root)}")
        return problems
    K = {c.root for c in tree.children}
    if root.positive:
        if not any(ri.rule == tree.rule and set(ri.premises) == K
                   for ri in u.instances(root)):
            problems.append(f"no {tree.rule} instance with premises {sorted(map(render, K))} "
                            f"concludes {render(root)}")
    else:
        for ri in u.contradicting_instances(root):
            if not any(contradicts(k, prem) for k in K for prem in ri.premises):
                problems.append(f"{ri.rule} instance for {render(ri.conclusion)} is not refuted")
    for c in tree.children:
        problems.extend(verify_tree(u, c, _path + (root,)))
    return problems


class BoundedOracle:
    """Provability by trees of bounded height, computed level by level.

    ``holds(f, d)`` is true iff ``f`` has a well-founded proof tree of height
    at most ``d``; no path bookkeeping is involved.
    """

    def __init__(self, u: Universe):
        self.u = u
        self.memo: dict = {}

    def holds(self, f: Formula, d: int) -> bool:
        key = (f, d)
        if key in self.memo:
            return self.memo[key]
        if d <= 0:
            res = False
        elif self.holds(f, d - 1):
            res = True
        elif f.positive:
            res = any(all(self.holds(p, d - 1) for p in ri.premises)
                      for ri in self.u.instances(f))
        else:
            res = all(any(self._refuted(p, d - 1) for p in ri.premises)
                      for ri in self.u.contradicting_instances(f))
        self.memo[key] = res
        return res

    def _refuted(self, prem: Formula, d: int) -> bool:
        if prem.positive or prem.kind != TRANS:
            return self.holds(prem.negate(), d)
        return any(self.holds(trans(prem.source, prem.ieval, prem.signal, t), d)
                   for t in self.u.terms)


# --- constructiveness ---------------------------------------------------------------


@dataclass
class Resolution:
    status: str
    trees: tuple = ()
    target: object = None
    note: str = ""


@dataclass
class ConstructiveVerdict:
    constructive: bool
    per_obligation: dict = field(default_factory=dict)

    def failures(self) -> list:
        return [k for k, r in self.per_obligation.items()
                if r.status not in (PROVED_POSITIVE, PROVED_NEGATIVE)]


def _resolve_signal(u, prover, p, I, x) -> Resolution:
    pos_e = prover.prove(emits(p, I, x))
    pos_t, target = None, None
    for t in u.terms:
        pos_t = prover.prove(trans(p, I, x, t))
        if pos_t is not None:
            target = t
            break
    neg_e = prover.prove(emits(p, I, x, positive=False))
    neg_t = prover.prove(trans(p, I, x))
    if pos_e and pos_t:
        return Resolution(PROVED_POSITIVE, (pos_e, pos_t), target)
    if neg_e and neg_t:
        return Resolution(PROVED_NEGATIVE, (neg_e, neg_t))
    if (pos_e or neg_e) and (pos_t or neg_t):
        return Resolution(MIXED, tuple(t for t in (pos_e, pos_t, neg_e, neg_t) if t),
                          target, "emission and transition resolve with opposite polarity")
    return Resolution(UNPROVABLE, tuple(t for t in (pos_e, pos_t, neg_e, neg_t) if t), target)


def classify_constructive(u: Universe, ctx: AnalysisContext = None, *, evaluations=None,
                          prover: Prover = None) -> ConstructiveVerdict:
    """Resolve every signal and the termination obligation for each evaluation."""
    ctx = ctx or u.ctx
    prover = prover or Prover(u)
    p = ctx.context
    per = {}
    for I in (u.evaluations if evaluations is None else evaluations):
        for x in ctx.env.emittable():
            per[(I, x.name)] = _resolve_signal(u, prover, p, I, x)
        pos = prover.prove(term(p, I))
        neg = prover.prove(term(p, I, positive=False))
        if pos:
            per[(I, TERM)] = Resolution(PROVED_POSITIVE, (pos,))
        elif neg:
            per[(I, TERM)] = Resolution(PROVED_NEGATIVE, (neg,))
        else:
            per[(I, TERM)] = Resolution(UNPROVABLE)
    ok = all(r.status in (PROVED_POSITIVE, PROVED_NEGATIVE) for r in per.values())
    return ConstructiveVerdict(ok, per)


# --- theorem checks ---------------------------------------------------------------


@dataclass
class PropertyResult:
    name: str
    holds: bool
    detail: str = ""


def negative_space(u: Universe, evaluations=None) -> list:
    """One no-target negative formula per source, label kind and signal."""
    out = []
    for I in (u.evaluations if evaluations is None else evaluations):
        for p in u.terms:
            out.append(term(p, I, positive=False))
            for x in u.signals:
                out.append(emits(p, I, x, positive=False))
                out.append(trans(p, I, x))
    return out


def check_theorems(u: Universe, ctx: AnalysisContext, lv: LogicalVerdict,
                   cv: ConstructiveVerdict, *, prover: Prover = None, evaluations=None,
                   sweep_limit: int = DEFAULT_SWEEP_LIMIT) -> list:
    prover = prover or Prover(u)
    evaluations = u.evaluations if evaluations is None else evaluations
    results = []
    space = [f for f in u.pos_space if f.ieval in evaluations]
    sweep = len(space) <= sweep_limit

    proved_pos = None
    if sweep:
        proved_pos = {f for f in space if prover.prove(f) is not None}

    if not cv.constructive:
        results.append(PropertyResult("constructive-implies-meaningful", True, "vacuous"))
    elif lv.status != COHERENT:
        results.append(PropertyResult("constructive-implies-meaningful", False,
                                      f"constructive but {lv.status}"))
    elif proved_pos is None:
        results.append(PropertyResult("constructive-implies-meaningful", True,
                                      "unique model; proof sweep skipped (space too large)"))
    else:
        model = lv.unique_model.facts
        extra = sorted(map(render, proved_pos - model))
        missing = sorted(map(render, model - proved_pos))
        ok = not extra and not missing
        detail = "proved-positive set equals the unique model" if ok else \
            f"proved but not in model: {extra}; in model but unproved: {missing}"
        results.append(PropertyResult("constructive-implies-meaningful", ok, detail))

    clashes = []
    for key, r in cv.per_obligation.items():
        roots = [t.root for t in r.trees]
        for a in roots:
            for b in roots:
                if contradicts(a, b):
                    clashes.append(render(a))
    if sweep:
        for g in negative_space(u, evaluations):
            if prover.prove(g) is None:
                continue
            if g.kind == TRANS:
                hit = [f for f in proved_pos if f.source == g.source and f.label == g.label]
            else:
                hit = [g.negate()] if g.negate() in proved_pos else []
            clashes.extend(render(f) for f in hit)
    results.append(PropertyResult(
        "supported-proofs-consistent", not clashes,
        "no formula proved in both polarities" + ("" if sweep else " (obligations only)")
        if not clashes else f"both polarities proved: {sorted(set(clashes))}"))
    return results


# --- rendering -------------------------------------------------------------------


def _positive_form(g: Formula) -> str:
    if g.kind == TRANS:
        return render(g)[len("not "):] + " (any target)"
    return render(g.negate())


def _text_lines(t: ProofTree) -> list:
    """Premises above an inference line above the conclusion, indented by depth."""
    concl = render(t.root)
    if t.root.positive:
        above = []
        for c in t.children:
            above.extend("    " + line for line in _text_lines(c))
        return above + [f"─── ({t.rule})", concl]
    above = []
    if not t.refutations:
        above.append(f"    no rule concludes {_positive_form(t.root)}")
    for r in t.refutations:
        above.append(f"    [{r.instance.rule}] {render(r.instance.conclusion)} "
                     f"blocked at {render(r.premise)} by {render(r.witness)}")
    for c in t.children:
        above.extend("    " + line for line in _text_lines(c))
    return above + ["─── (refute)", concl]


def render_proof(t: ProofTree, format: str = "text") -> str:
    if format == "json":
        return json.dumps(proof_to_dict(t), indent=2, ensure_ascii=False)
    if format != "text":
        raise ValueError(format)
    return "\n".join(_text_lines(t))


def proof_to_dict(t: ProofTree) -> dict:
    return {
        "root": render(t.root),
        "rule": t.rule,
        "refutations": [
            {"rule": r.instance.rule, "conclusion": render(r.instance.conclusion),
             "premise": render(r.premise), "witness": render(r.witness)}
            for r in t.refutations
        ],
        "children": [proof_to_dict(c) for c in t.children],
    }
