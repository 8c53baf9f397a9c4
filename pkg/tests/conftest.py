import functools
import random
from pathlib import Path

import pytest

from esterel_causality.cli import CORPUS_DIR
from esterel_causality.grounding import AnalysisContext, ground_space, residual_universe
from esterel_causality.models import classify_logical
from esterel_causality.proofs import Prover, classify_constructive
from esterel_causality.syntax import (
    INPUT, LOCAL, NIL, OUTPUT, Emit, Local, Par, Present, Seq, SignalId, env_of, parse,
    signals_of,
)

CORPUS = sorted(p.stem for p in CORPUS_DIR.glob("*.est"))
GOLDEN_PROGRAMS = [f"P{n}" for n in range(7)]

ACCEPTANCE_LINES = []


def source(name):
    return (CORPUS_DIR / f"{name}.est").read_text()


@functools.lru_cache(maxsize=None)
def load(name):
    prog, env = parse(source(name))
    return AnalysisContext(prog, env)


@functools.lru_cache(maxsize=None)
def analysis(name, collapsed=False):
    """(ctx, universe, logical verdict, constructive verdict, prover) for a corpus program."""
    ctx = load(name)
    u = ground_space(ctx, collapsed=collapsed)
    lv = classify_logical(u, ctx)
    prover = Prover(u)
    cv = classify_constructive(u, ctx, prover=prover)
    return ctx, u, lv, cv, prover


@pytest.fixture(params=CORPUS)
def corpus_name(request):
    return request.param


# --- random programs ---------------------------------------------------------------

I_SIG = SignalId("i", INPUT)
O_SIG = SignalId("o", OUTPUT)
S_SIG = SignalId("s", LOCAL)
T_SIG = SignalId("t", LOCAL)


def random_program(rng, depth):
    c = rng.randrange(6 if depth > 0 else 2)
    if c == 0:
        return NIL
    if c == 1:
        return Emit(rng.choice([O_SIG, S_SIG, T_SIG]))
    if c == 2:
        return Present(rng.choice([I_SIG, O_SIG, S_SIG, T_SIG]),
                       random_program(rng, depth - 1), random_program(rng, depth - 1))
    if c == 3:
        return Seq(random_program(rng, depth - 1), random_program(rng, depth - 1))
    if c == 4:
        return Par(random_program(rng, depth - 1), random_program(rng, depth - 1))
    return Local(S_SIG, random_program(rng, depth - 1))


def context_for(prog):
    sigs = signals_of(prog)
    env = env_of(prog, ["i"] if I_SIG in sigs else [], ["o"] if O_SIG in sigs else [])
    return AnalysisContext(prog, env)


def space_per_evaluation(ctx):
    """Size of the positive formula space for one evaluation, without grounding."""
    terms = residual_universe(ctx)
    sigs = set(ctx.env.emittable())
    for t in terms:
        sigs |= {s for s in signals_of(t) if s.kind != INPUT}
    n = len(terms)
    return n * (1 + len(sigs) * (1 + n))


def small_programs(count, max_space, seed=2009, depth=3):
    """``count`` seeded random contexts whose per-evaluation space is at most ``max_space``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        ctx = context_for(random_program(rng, depth))
        if space_per_evaluation(ctx) <= max_space:
            out.append(ctx)
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
