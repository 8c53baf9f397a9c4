import pytest

from esterel_causality.formulas import consistent, render
from esterel_causality.grounding import ResourceLimit, ground_space
from esterel_causality.models import (
    COHERENT, NON_DETERMINISTIC, NON_REACTIVE, Model, classify_logical, enumerate_supported_models,
    enumerate_supported_models_naive, is_supported_model, models_for_evaluation, residual_facts,
    status_for,
)

from conftest import analysis, small_programs
from reference_models import FULL, LISTED

EXPECTED = {
    "P0": (COHERENT, 1), "P1": (NON_DETERMINISTIC, 2), "P2": (NON_REACTIVE, 0),
    "P3": (COHERENT, 1), "P4": (COHERENT, 1), "P5": (COHERENT, 1), "P6": (COHERENT, 1),
    "L1": (COHERENT, 1),
}


def rendered(models):
    return [set(m.render()) for m in models]


def test_status_for():
    assert [status_for(n) for n in (0, 1, 2, 7)] == \
        [NON_REACTIVE, COHERENT, NON_DETERMINISTIC, NON_DETERMINISTIC]


def test_corpus_verdicts(corpus_name):
    _, _, lv, *_ = analysis(corpus_name)
    assert (lv.status, lv.count) == EXPECTED[corpus_name]
    assert len(lv.models) == lv.count


@pytest.mark.parametrize("name", ["P0", "P3", "P4", "P5", "P6"])
def test_unique_model_is_complete_derivation(name):
    _, _, lv, *_ = analysis(name)
    [model] = rendered(lv.models)
    assert model == FULL[name]


def test_p1_models():
    _, _, lv, *_ = analysis("P1")
    got = rendered(lv.models)
    assert sorted(map(sorted, got)) == sorted(map(sorted, FULL["P1"]))
    assert lv.unique_model is None


@pytest.mark.parametrize("name", ["P0", "P3", "P4", "P5"])
def test_listed_facts_are_contained(name):
    [model] = rendered(analysis(name)[2].models)
    assert LISTED[name] <= model


def test_facts_beyond_the_listing_are_forced():
    # each omitted fact has an instance whose premises hold in the listed set's completion
    for name in ("P0", "P4"):
        _, u, lv, *_ = analysis(name)
        model = lv.unique_model.facts
        for f in model:
            if render(f) not in LISTED[name]:
                assert any(consistent(model, ri.premises) for ri in u.instances(f))


def test_listed_sets_are_not_models_when_incomplete():
    for name in ("P0", "P4"):
        _, u, lv, *_ = analysis(name)
        listed = {f for f in u.pos_space if render(f) in LISTED[name]}
        assert len(listed) == len(LISTED[name])
        assert not is_supported_model(u, listed)


def test_is_supported_model_examples():
    _, u, lv, *_ = analysis("P1")
    assert all(is_supported_model(u, m) for m in lv.models)
    _, u2, *_ = analysis("P2")
    assert not is_supported_model(u2, set())
    # the first condition alone holds trivially for the empty set
    assert is_supported_model(u2, set(), P=[])


def test_models_pass_both_conditions(corpus_name):
    _, u, lv, *_ = analysis(corpus_name)
    for m in lv.models:
        assert is_supported_model(u, m)
        assert is_supported_model(u, m, P=[])


def test_models_decompose_by_evaluation():
    _, u, lv, *_ = analysis("P0")
    [m] = lv.models
    parts = [m.restrict(I) for I in u.evaluations]
    assert sum(map(len, parts)) == len(m)
    for I, part in zip(u.evaluations, parts):
        assert models_for_evaluation(u, I) == [part]


def test_evaluation_restriction():
    ctx, u, *_ = analysis("P0")
    I = u.evaluations[0]
    lv = classify_logical(u, ctx, evaluations=[I])
    assert lv.status == COHERENT
    assert all(f.ieval == I for f in lv.models[0].facts)


def test_residual_facts():
    _, u, lv, *_ = analysis("P6")
    res = [render(f) for f in residual_facts(u, lv.unique_model)]
    assert res == ["nothing || nothing term[∅]"]


def test_choice_limit():
    _, u, *_ = analysis("P1")
    with pytest.raises(ResourceLimit):
        enumerate_supported_models(u, max_choices=0)


def test_model_cap():
    _, u, *_ = analysis("P1")
    assert len(enumerate_supported_models(u, cap=1)) == 1


@pytest.mark.parametrize("name", ["P1", "P2", "P3"])
def test_naive_oracle_on_corpus(name):
    _, u, *_ = analysis(name)
    for I in u.evaluations:
        naive = enumerate_supported_models_naive(u, I)
        assert sorted(map(sorted, map(rendered_set, naive))) == \
            sorted(map(sorted, map(rendered_set, models_for_evaluation(u, I))))


def rendered_set(m):
    facts = m.facts if isinstance(m, Model) else m
    return {render(f) for f in facts}


def test_naive_oracle_on_small_random_programs():
    for ctx in small_programs(30, 14, seed=7):
        u = ground_space(ctx)
        for I in u.evaluations:
            naive = {frozenset(rendered_set(m)) for m in enumerate_supported_models_naive(u, I)}
            fast = {frozenset(rendered_set(m)) for m in models_for_evaluation(u, I)}
            assert naive == fast
