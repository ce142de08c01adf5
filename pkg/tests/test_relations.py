from hypothesis import assume, given, strategies as st

from acceptreject.core import Region
from acceptreject.engine import Assessment, Model, background, is_deductively_closable, natural_extension
from acceptreject.relations import check_monotonicity, default_sample, relate, verify_relation_axioms
from conftest import running_example
from oracles import caratheodory_posi, ray_minus_cone2d
from strategies import SPACES, assessments, gambles


def e1_model(plane, with_zero=True):
    bg = background(plane, "trivial") if with_zero else None
    return natural_extension(running_example(plane, "E1"), bg)


def fair_coin(plane):
    return natural_extension(Assessment(plane, [[1, -1], [-1, 1], [1, 2]], [[-1, -2]]), background(plane, "trivial"))


def test_relate_on_e1(plane):
    m = e1_model(plane)
    f, g = plane.gamble([3, 0]), plane.gamble([0, 2])
    v = relate(m, g, f)
    assert v.unpreferred
    # f − g = (3,−2) sits just past the rejected ray (2,−1), so it is rejected too
    w = relate(m, f, g)
    assert w.unpreferred and not w.accept_exchange
    assert v.uncomparable and w.uncomparable
    assert not v.indifferent and not v.preferred


def test_relate_on_fair_coin(plane):
    v = relate(fair_coin(plane), plane.gamble([1, 0]), plane.gamble([0, 1]))
    assert v.indifferent and v.accept_exchange and not v.uncomparable


def test_relate_reflexive(plane):
    f = plane.gamble([5, -7])
    assert relate(e1_model(plane), f, f).accept_exchange
    bare = e1_model(plane, with_zero=False)
    assert not relate(bare, f, f).accept_exchange
    assert not relate(bare, f, f).unpreferred


def test_axioms_hold_on_e1(plane):
    m = e1_model(plane)
    sample = default_sample(m)[:9] + [plane.gamble(v) for v in ([3, 0], [0, 2], [-1, -1])]
    assert len(sample) == 12
    rep = verify_relation_axioms(m, sample)
    assert rep.ok, rep.failures()


def test_missing_zero_breaks_reflexivity(plane):
    rep = verify_relation_axioms(e1_model(plane, with_zero=False), [plane.gamble([1, 1])])
    assert not rep["AD1 accept reflexivity"].ok


def test_unscaled_rejection_breaks_mixture_independence(plane):
    g = plane.gamble
    m = Model.candidate(plane, Region.cone(plane, [g([1, 0]), g([0, 1])]), Region.points(plane, [g([-1, -1])]))
    rep = verify_relation_axioms(m, [g([0, 0]), g([1, 1])])
    assert not rep["AD6 reject mixture independence"].ok
    assert rep["AD1 accept reflexivity"].ok


def test_empty_sample_is_vacuous(plane):
    assert verify_relation_axioms(e1_model(plane), []).ok


def test_monotonicity(plane):
    g = plane.gamble
    s = background(plane, "nonneg")
    m = natural_extension(Assessment(plane, [[-1, 2]]), s)
    sample = [g([2, 2]), g([1, 1]), g([0, 3]), g([-1, 0])]
    assert check_monotonicity(m, s, sample).ok
    # a candidate that drops the background's rejections
    short = Model.candidate(plane, m.accepted_region, Region.empty(plane))
    rep = check_monotonicity(short, s, sample)
    assert rep["accept monotonicity"].ok and not rep["reject monotonicity"].ok
    o = background(plane, "trivial")
    assert check_monotonicity(e1_model(plane), o, sample).ok


def test_default_sample_has_generators_and_negations(plane):
    m = e1_model(plane)
    sample = default_sample(m, [plane.gamble([7, 7])])
    for gen in m.accepted_gens:
        assert gen in sample and -gen in sample
    assert sample[-1] == plane.gamble([7, 7])
    assert len(sample) == len(set(sample))


# properties ----------------------------------------------------------------

spaces = st.sampled_from([SPACES[2], SPACES[3]])


@st.composite
def coherent_models(draw):
    s = draw(spaces)
    a = draw(assessments(s, 3, 2))
    assume(is_deductively_closable(a))
    return natural_extension(a, background(s, "trivial"))


def _cut(m, gs):
    return [m.space.gamble(g.values[: m.space.dim]) for g in gs]


@given(coherent_models(), st.lists(gambles(SPACES[3]), min_size=2, max_size=4))
def test_cancellation(m, gs):
    gs = _cut(m, gs)
    zero = m.space.zero()
    for f in gs:
        for g in gs:
            assert relate(m, f, g) == relate(m, f - g, zero)


@given(coherent_models(), st.lists(gambles(SPACES[3]), min_size=2, max_size=4))
def test_derived_relations_are_orders(m, gs):
    gs = _cut(m, gs)
    v = {(i, j): relate(m, f, g) for i, f in enumerate(gs) for j, g in enumerate(gs)}
    n = len(gs)
    for i in range(n):
        assert v[i, i].indifferent and not v[i, i].preferred and not v[i, i].uncomparable
        for j in range(n):
            assert v[i, j].indifferent == v[j, i].indifferent
            assert v[i, j].uncomparable == v[j, i].uncomparable
            assert not (v[i, j].preferred and v[j, i].preferred)
            for k in range(n):
                if v[i, j].indifferent and v[j, k].indifferent:
                    assert v[i, k].indifferent
                if v[i, j].preferred and v[j, k].preferred:
                    assert v[i, k].preferred


@given(coherent_models(), st.lists(gambles(SPACES[3]), min_size=1, max_size=3))
def test_axioms_hold_on_natural_extensions(m, gs):
    sample = default_sample(m)[:6] + _cut(m, gs)
    assert verify_relation_axioms(m, sample).ok


@given(assessments(SPACES[2], 3, 2), gambles(SPACES[2]), gambles(SPACES[2]))
def test_relate_matches_planar_oracle(a, f, g):
    assume(is_deductively_closable(a))
    m = natural_extension(a, None)
    d = f - g
    acc = caratheodory_posi(d, a.accepted)
    rej = any(ray_minus_cone2d(d, r.values, [x.values for x in a.accepted]) for r in a.rejected)
    v = relate(m, f, g)
    assert (v.accept_exchange, v.unpreferred) == (acc, rej)
