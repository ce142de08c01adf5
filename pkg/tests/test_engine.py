from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from acceptreject.core import Piece, Region, lineality_basis
from acceptreject.engine import (
    TOP,
    Assessment,
    ClosedAssessment,
    Model,
    NINE_CLASS_NAMES,
    at_most_as_resolved,
    background,
    check_model_axioms,
    classify,
    closure,
    combine,
    confusion_statements,
    deductive_extension,
    is_coherent,
    is_deductively_closable,
    limbo_contains,
    maximal_completion,
    natural_extension,
    reckoning_extension,
    remove_confusion,
)
from acceptreject.errors import ConfusedInput, NoRespect, NotClosable, StrategyNotSound
from conftest import running_example
from oracles import caratheodory_posi
from strategies import SPACES, assessments, gamble_lists, gambles, nonzero_gambles, positive_rationals

F = Fraction


def model_of(plane, name):
    return reckoning_extension(deductive_extension(running_example(plane, name)))


# confusion -----------------------------------------------------------------


def test_confusion_statements(plane):
    g = plane.gamble
    assert confusion_statements(Assessment(plane, [g([1, 0])], [g([1, 0])])) == [g([1, 0])]
    assert confusion_statements(running_example(plane, "E1")) == []
    assert confusion_statements(Assessment(plane)) == []


def test_assessment_dedupes(plane):
    a = Assessment(plane, [[1, 0], [1, 0]], [[0, -1]])
    assert len(a.accepted) == 1


@pytest.mark.parametrize("strategy,acc,rej", [
    ("drop_from_accepted", [(0, 1)], [(1, 0)]),
    ("drop_from_rejected", [(1, 0), (0, 1)], []),
    ("drop_from_both", [(0, 1)], []),
])
def test_remove_confusion_raw(plane, strategy, acc, rej):
    a = Assessment(plane, [[1, 0], [0, 1]], [[1, 0]])
    out = remove_confusion(a, strategy)
    assert out == Assessment(plane, acc, rej)
    assert out.is_confusion_free()


def test_remove_confusion_closed_routes_agree(plane):
    d = deductive_extension(running_example(plane, "E3"))
    assert not d.is_confusion_free()
    one = remove_confusion(d, "drop_from_rejected")
    two = remove_confusion(d, "drop_from_both_then_reclose")
    assert list(one.rejected) == list(two.rejected) == [plane.gamble([-3, 1])]
    assert one.is_confusion_free() and two.is_confusion_free()
    assert at_most_as_resolved(one, two).holds and at_most_as_resolved(two, one).holds
    with pytest.raises(StrategyNotSound):
        remove_confusion(d, "drop_from_accepted")


def test_remove_confusion_is_identity_on_clean_input(plane):
    a = running_example(plane, "E1")
    for s in ("drop_from_accepted", "drop_from_rejected", "drop_from_both"):
        assert remove_confusion(a, s) == a


def test_unknown_strategy(plane):
    with pytest.raises(ValueError):
        remove_confusion(Assessment(plane), "shrug")


# deductive closure ---------------------------------------------------------


def test_deductive_extension_keeps_generators(plane):
    d = deductive_extension(running_example(plane, "E1"))
    assert isinstance(d, ClosedAssessment)
    assert set(d.accepted_gens) == {plane.gamble([2, 1]), plane.gamble([1, 2])}
    assert d.accepts(plane.gamble([3, 3])) and not d.accepts(plane.gamble([1, 0]))
    empty = deductive_extension(Assessment(plane))
    assert not empty.accepts(plane.gamble([1, 1])) and not empty.rejects(plane.gamble([1, 1]))


def test_closability_of_running_examples(plane):
    v = is_deductively_closable(running_example(plane, "E3"))
    assert not v.closable
    assert v.witness == plane.gamble([1, 1])
    assert v.certificate == (F(2, 3), F(1, 3))
    assert is_deductively_closable(running_example(plane, "E1"))
    assert is_deductively_closable(running_example(plane, "E2"))


# limbo and reckoning -------------------------------------------------------


def test_limbo_examples(plane):
    d = deductive_extension(running_example(plane, "E2"))
    assert limbo_contains(d, plane.gamble([0, -1]))
    assert not limbo_contains(d, plane.gamble([2, 1]))
    assert not limbo_contains(d, plane.gamble([1, -1]))


def test_reckoning_extension_examples(plane):
    m1 = model_of(plane, "E1")
    assert m1.rejects(plane.gamble([-2, -1]))
    assert classify(m1, plane.gamble([2, 1])).favourable
    m2 = model_of(plane, "E2")
    assert not m2.rejects(plane.gamble([-1, -1]))
    assert not classify(m2, plane.gamble([1, 1])).favourable
    m0 = reckoning_extension(deductive_extension(Assessment(plane, [[1, 0]])))
    assert not m0.rejected_region.pieces or not m0.rejects(plane.gamble([-1, 0]))
    with pytest.raises(ConfusedInput):
        reckoning_extension(deductive_extension(running_example(plane, "E3")))


def test_classify_examples(plane):
    g = plane.gamble
    r = classify(model_of(plane, "E1"), g([3, 3]))
    assert r.accepted and r.favourable and r.status == "accepted"
    assert NINE_CLASS_NAMES[r.nine_class] == "favourable"
    fair = natural_extension(Assessment(plane, [[1, -1], [-1, 1], [1, 2]], [[-1, -2]]), None)
    r = classify(fair, g([1, -1]))
    assert r.accepted and r.indifferent and NINE_CLASS_NAMES[r.nine_class] == "indifferent"
    r = classify(model_of(plane, "E2"), g([0, 1]))
    assert r.unresolved and r.indeterminate and r.status == "unresolved"
    assert NINE_CLASS_NAMES[r.nine_class] == "unresolved-rejected-negation"


def test_classify_marks_confusion(plane):
    m = Model.candidate(plane, Region.posi(plane, [plane.gamble([1, 0])]),
                        Region(plane, [Piece.ray((1, 0))]))
    r = classify(m, plane.gamble([2, 0]))
    assert r.confusing and r.nine_class is None and r.status == "confusing"


# background models and natural extension ------------------------------------


def test_background_presets_are_models(plane):
    for name in ("nonneg", "uniform", "positive", "trivial"):
        s = background(plane, name)
        assert s.isq == (name in ("nonneg", "trivial"))
        assert check_model_axioms(s, s).ok, name


def test_natural_extension_examples(plane):
    g = plane.gamble
    s = background(plane, "nonneg")
    m = natural_extension(Assessment(plane, [[-1, 2]]), s)
    assert m.rejects(g([-1, -1])) and m.accepts(g([0, 0]))
    with pytest.raises(NoRespect) as exc:
        natural_extension(Assessment(plane, [[-1, -2]]), s)
    assert exc.value.witness is not None
    bare = natural_extension(Assessment(plane), s)
    for f in ([1, 0], [0, 0], [-1, 0], [-1, 1]):
        assert bare.accepts(g(f)) == s.accepts(g(f))
        assert bare.rejects(g(f)) == s.rejects(g(f))


def test_coherence_examples(plane):
    o = background(plane, "trivial")
    m1 = natural_extension(running_example(plane, "E1"), o)
    assert is_coherent(m1, o)
    c = is_coherent(running_example(plane, "E1"), o)
    assert not c and c.reason == "natural extension adds statements"
    assert not is_coherent(Assessment(plane), background(plane, "nonneg"))


# order-theoretic operations --------------------------------------------------


def test_combine_union_and_reckoning_union(plane):
    g = plane.gamble
    e1, e2 = running_example(plane, "E1"), running_example(plane, "E2")
    u = combine("union", [e1, e2])
    assert set(u.accepted) == set(e1.accepted) | set(e2.accepted)
    a = Assessment(plane, [[1, -1]], [[-1, -2]])
    b = Assessment(plane, [[-1, 1], [1, 2]])
    m = combine("reckoning_union", [a, b])
    assert m.accepts(g([3, -3])) and m.accepts(g([-3, 3])) and m.rejects(g([-2, -4]))
    with pytest.raises(NoRespect):
        combine("reckoning_union", [Assessment(plane, [[1, 1]]), Assessment(plane, [], [[2, 2]])])


def test_intersection_of_models_is_a_model(plane):
    m1, m2 = model_of(plane, "E1"), model_of(plane, "E2")
    meet = combine("intersect", [m1, m2])
    assert isinstance(meet, Model)
    assert check_model_axioms(meet).ok
    assert meet.accepts(plane.gamble([3, 3])) and not meet.accepts(plane.gamble([2, 1]))


def test_models_with_confusion_do_not_intersect_to_models(plane):
    g = plane.gamble
    rays = Region(plane, [Piece.ray((2, -1)), Piece.ray((-1, 2))])
    # accepting a half-plane swallows both rejected rays: confused but limbo-free
    half = Model.candidate(plane, Region.cone(plane, [g([1, -1]), g([-1, 1]), g([1, 1])]), rays)
    assert not half.is_confusion_free()
    assert check_model_axioms(half)["AR4"].ok
    quadrant = natural_extension(Assessment(plane, [[1, 0], [0, 1]], [[2, -1], [-1, 2]]), None)
    meet = combine("intersect", [half, quadrant])
    assert meet.accepts(g([1, 1])) and meet.rejects(g([2, -1]))
    assert limbo_contains(meet, g([-2, -1]))
    assert not check_model_axioms(meet)["AR4"].ok
    # reckoning the intersection gives back the second factor
    healed = reckoning_extension(meet)
    assert at_most_as_resolved(healed, quadrant).holds and at_most_as_resolved(quadrant, healed).holds


def test_closure_examples(plane):
    assert closure(running_example(plane, "E3"), "ncM") is TOP
    assert closure(running_example(plane, "E3"), "ncD") is TOP
    assert isinstance(closure(running_example(plane, "E3"), "D"), ClosedAssessment)
    m = closure(running_example(plane, "E1"), "ncM")
    ref = model_of(plane, "E1")
    assert at_most_as_resolved(m, ref).holds and at_most_as_resolved(ref, m).holds
    assert closure(TOP, "D") is TOP
    with pytest.raises(ValueError):
        closure(Assessment(plane), "X")


def test_maximal_completion_examples(plane):
    g = plane.gamble
    e2 = running_example(plane, "E2")
    m = maximal_completion(e2, [g([2, 1])], "accept_first")
    assert m.accepts(g([2, 1]))
    m = maximal_completion(e2, [g([0, -1])], "accept_first")
    assert m.rejects(g([0, -1])) and not m.accepts(g([0, -1]))
    base = model_of(plane, "E2")
    same = maximal_completion(e2, [])
    assert at_most_as_resolved(same, base).holds and at_most_as_resolved(base, same).holds
    m = maximal_completion(e2, [g([0, 1])], "reject_first")
    assert m.rejects(g([0, 1]))
    with pytest.raises(NotClosable):
        maximal_completion(running_example(plane, "E3"), [g([1, 0])])
    with pytest.raises(ValueError):
        maximal_completion(e2, [], "coin_flip")


def test_model_axiom_examples(plane):
    g = plane.gamble
    o = background(plane, "trivial")
    assert check_model_axioms(natural_extension(running_example(plane, "E1"), o), o).ok
    assert not check_model_axioms(model_of(plane, "E1"), o)["AR1"].ok
    same_ray = Model.candidate(plane, Region.posi(plane, [g([1, 0])]), Region(plane, [Piece.ray((1, 0))]))
    rep = check_model_axioms(same_ray)
    assert rep["AR2"].ok and not rep["NC"].ok
    # on a single line the shifted ray stays on the ray: nothing in limbo
    flat = Model.candidate(plane, Region.posi(plane, [g([1, 1])]), Region(plane, [Piece.ray((-1, -1))]))
    assert check_model_axioms(flat).ok
    missing = Model.candidate(plane, Region.posi(plane, [g([0, 1])]), Region(plane, [Piece.ray((-1, 1))]))
    rep = check_model_axioms(missing)
    ar4 = rep["AR4"]
    assert not ar4.ok
    w = ar4.witness
    assert not missing.rejects(w) and limbo_contains(missing, w)
    assert limbo_contains(missing, g([-1, 0]))


# properties ----------------------------------------------------------------

spaces = st.sampled_from([SPACES[2], SPACES[3]])


@st.composite
def nested_pairs(draw):
    s = draw(spaces)
    a = draw(assessments(s, 3, 2))
    extra = draw(assessments(s, 1, 1))
    return a, a.union(extra)


def _same(x, y):
    if x is TOP or y is TOP:
        return x is y
    return at_most_as_resolved(x, y).holds and at_most_as_resolved(y, x).holds


@pytest.mark.parametrize("structure", ["D", "ncD", "ncM"])
@given(pair=nested_pairs())
def test_closure_laws(structure, pair):
    a, b = pair
    ca, cb = closure(a, structure), closure(b, structure)
    assert at_most_as_resolved(a, ca).holds
    assert at_most_as_resolved(ca, cb).holds
    assert _same(closure(ca, structure), ca)


@given(nonzero_gambles(SPACES[3]), gamble_lists(SPACES[3], 1, 3), gambles(SPACES[3]), st.integers(-2, 2))
def test_lineality_leaves_strict_acceptance_alone(line, gens, f, k):
    s = SPACES[3]
    gens = [line, -line] + gens
    d = deductive_extension(Assessment(s, gens))
    basis = lineality_basis(gens)
    assert basis
    assert d.accepts(s.zero())
    strict = d.accepts(f) and not d.accepts(-f)
    shifted = f + basis[0] * k
    assert strict == (d.accepts(shifted) and not d.accepts(-shifted))


@given(gamble_lists(SPACES[3], 2, 4), gambles(SPACES[3]), gambles(SPACES[3]))
def test_strict_acceptance_is_additive(gens, f, g):
    s = SPACES[3]
    d = deductive_extension(Assessment(s, gens))

    def strict(h):
        return d.accepts(h) and not d.accepts(-h)

    if strict(f) and strict(g):
        assert strict(f + g)


@st.composite
def reckoned_models(draw):
    s = draw(spaces)
    a = draw(assessments(s, 3, 2))
    assume(is_deductively_closable(a))
    return natural_extension(a, None)


@given(reckoned_models(), nonzero_gambles(SPACES[3]), positive_rationals)
def test_rejection_is_scale_invariant(m, f, lam):
    s = m.space
    f = s.gamble(f.values[: s.dim])
    assert m.rejects(f) == m.rejects(f * lam)


@given(reckoned_models(), gambles(SPACES[3]), gambles(SPACES[3]), gambles(SPACES[3]))
def test_favourable_gambles_sweeten_deals(m, f, g, h):
    s = m.space
    f, g, h = (s.gamble(x.values[: s.dim]) for x in (f, g, h))
    fav = [x for x in (f, g, h) if classify(m, x).favourable]
    for x in fav:
        for y in fav:
            assert classify(m, x + y).favourable
    for x in (f, g, h):
        if m.accepts(x):
            for y in fav:
                assert classify(m, x + y).favourable


@given(st.data())
def test_closure_is_below_every_completion(data):
    s = data.draw(spaces)
    a = data.draw(assessments(s, 2, 2))
    assume(is_deductively_closable(a))
    queries = data.draw(gamble_lists(s, 0, 3))
    policy = data.draw(st.sampled_from(["accept_first", "reject_first"]))
    m = maximal_completion(a, queries, policy)
    assert at_most_as_resolved(closure(a, "ncM"), m).holds
    for q in queries:
        assert m.accepts(q) or m.rejects(q)
    assert m.is_confusion_free()


@given(assessments(SPACES[2], 3, 2))
def test_closability_matches_caratheodory(a):
    expected = not any(caratheodory_posi(r, a.accepted) for r in a.rejected)
    assert bool(is_deductively_closable(a)) == expected
