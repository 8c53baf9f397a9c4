import pytest
from hypothesis import given
from hypothesis import strategies as st

from esterel_causality.formulas import (
    InputEvaluation, all_input_evaluations, consistent, contradicts, emits, parse_evaluation,
    render, term, trans,
)
from esterel_causality.grounding import ground_space
from esterel_causality.proofs import negative_space
from esterel_causality.syntax import INPUT, NIL, Emit, SignalEnv, SignalId

from conftest import load

EMPTY = InputEvaluation()
s = SignalId("s")


@pytest.fixture(scope="module")
def p1():
    return load("P1").context


def test_contradicts_examples(p1):
    assert contradicts(emits(p1, EMPTY, s), emits(p1, EMPTY, s, positive=False))
    assert contradicts(trans(p1, EMPTY, s, NIL), trans(p1, EMPTY, s))
    assert not contradicts(emits(p1, EMPTY, s), term(p1, EMPTY, positive=False))


def test_consistent_examples():
    p2 = load("P2").context
    assert consistent(set(), {emits(p2, EMPTY, s, positive=False)})
    assert not consistent({emits(p2, EMPTY, s)}, {emits(p2, EMPTY, s, positive=False)})
    e = emits(Emit(s), EMPTY, s)
    assert consistent({e}, {e})


def test_negative_transition_covers_every_target(p1):
    assert not consistent({trans(p1, EMPTY, s, p1)}, {trans(p1, EMPTY, s)})


def test_evaluations():
    assert all_input_evaluations(SignalEnv()) == [EMPTY]
    i = SignalId("i", INPUT)
    assert [str(I) for I in all_input_evaluations(SignalEnv(inputs=(i,)))] == ["{i+}", "{i-}"]
    j = SignalId("j", INPUT)
    evals = all_input_evaluations(SignalEnv(inputs=(j, i)))
    assert [str(I) for I in evals] == ["{i+,j+}", "{i+,j-}", "{i-,j+}", "{i-,j-}"]


def test_parse_evaluation():
    env = load("P0").env
    assert str(parse_evaluation("i=-", env)) == "{i-}"
    with pytest.raises(ValueError):
        parse_evaluation("i=?", env)
    with pytest.raises(ValueError):
        parse_evaluation("k=+", env)


def test_rendering(p1):
    assert render(term(NIL, EMPTY)) == "nothing term[∅]"
    assert render(emits(p1, EMPTY, s, positive=False)) == \
        "not present s then emit s else nothing end emits[∅] s"
    assert render(trans(Emit(s), EMPTY, s, NIL)) == "emit s --∅,s--> nothing"
    assert render(trans(Emit(s), EMPTY, s)) == "not emit s --∅,s-->"


def test_formula_shape_invariants(p1):
    with pytest.raises(ValueError):
        trans(p1, EMPTY, None, NIL)
    with pytest.raises(ValueError):
        emits(p1, EMPTY, None)


def _pool():
    u = ground_space(load("P0"))
    return sorted(u.pos_space, key=render) + negative_space(u)


POOL = _pool()
formulas = st.sampled_from(POOL)


@given(formulas, formulas)
def test_contradiction_symmetric(f, g):
    assert contradicts(f, g) == contradicts(g, f)
    if contradicts(f, g):
        assert f.positive != g.positive


@given(st.sets(st.sampled_from([f for f in POOL if f.positive]), max_size=8),
       st.sets(formulas, max_size=6), st.sets(formulas, max_size=6))
def test_consistency_splits_over_union(T, phi1, phi2):
    assert consistent(T, phi1 | phi2) == (consistent(T, phi1) and consistent(T, phi2))


@given(st.integers(min_value=0, max_value=5))
def test_evaluation_count(n):
    env = SignalEnv(inputs=tuple(SignalId(f"i{k}", INPUT) for k in range(n)))
    evals = all_input_evaluations(env)
    assert len(evals) == 2 ** n
    assert len(set(evals)) == len(evals)
