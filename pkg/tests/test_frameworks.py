import pytest
from hypothesis import assume, given, strategies as st

from acceptreject.core import Piece, Region
from acceptreject.engine import (
    Assessment,
    background,
    is_deductively_closable,
    maximal_completion,
    natural_extension,
)
from acceptreject.errors import ConditionViolated, NoRespect, NotClosable
from acceptreject.frameworks import (
    FiAssessment,
    FiBackground,
    acceptability_extension,
    af_assessment,
    af_closability,
    check_characterisation,
    favourability_extension,
    fi_natural_extension,
    framework_membership,
    preference_components,
    walley_correspondence,
)
from conftest import running_example
from strategies import SPACES, gamble_lists, gambles


def fair_coin(plane):
    return fi_natural_extension(FiAssessment(plane, [[1, 2]], [[1, -1]]))


def test_framework_membership(plane):
    e1 = natural_extension(running_example(plane, "E1"), None)
    flags = framework_membership(e1)
    assert not flags.AF and not flags.FI
    assert flags.witness == plane.gamble([-2, 1])
    flags = framework_membership(fair_coin(plane))
    assert flags.AF and flags.FI
    assert not framework_membership(natural_extension(running_example(plane, "E2"), None)).AF


def test_af_closability(plane):
    assert not af_closability(af_assessment(plane, [[-1, -2]], [[1, 2]]))
    assert af_closability(af_assessment(plane, [[1, 2]], [[1, 2]]))
    assert af_closability(af_assessment(plane, [[-1, 1]], [[1, 0], [0, 1]]))
    with pytest.raises(ConditionViolated):
        af_closability(Assessment(plane, [], [[1, 1]]))


def test_fi_natural_extension_gives_the_fair_coin(plane):
    g = plane.gamble
    m = fair_coin(plane)
    for f in ([1, -1], [0, 0], [2, -1], [-5, 5], [3, 0]):
        assert m.accepts(g(f)) and not m.rejects(g(f)), f
    for f in ([-1, 0], [1, -2], [-3, 2]):
        assert m.rejects(g(f)) and not m.accepts(g(f)), f
    ind, fav = preference_components(m)
    assert ind.contains(g([4, -4])) and not ind.contains(g([1, 0]))
    assert fav.contains(g([1, 0])) and not fav.contains(g([1, -1]))


def test_fi_natural_extension_edge_cases(plane):
    g = plane.gamble
    m = fi_natural_extension(FiAssessment(plane, [], [[1, -1]]))
    assert m.accepts(g([-2, 2])) and not m.accepts(g([1, 0]))
    assert not m.rejected_region.pieces
    with pytest.raises(NotClosable):
        fi_natural_extension(FiAssessment(plane, [[1, 2], [-1, -2]]))
    with pytest.raises(NotClosable):
        fi_natural_extension(FiAssessment(plane, [[1, 0]], [[1, 0]]))


def test_favourability_extension(plane):
    g = plane.gamble
    s = FiBackground.nonneg(plane)
    m = favourability_extension([[-1, 3]], s)
    assert m.favourable_region.contains(g([-2, 7]))
    assert m.rejects(g([2, -7]))
    with pytest.raises(NoRespect):
        favourability_extension([[-1, -1]], s)
    bare = favourability_extension([], s)
    for f in ([1, 0], [0, 2], [1, 1]):
        assert bare.favourable_region.contains(g(f))
    assert not bare.favourable_region.contains(g([-1, 1]))
    assert not bare.favourable_region.contains(plane.zero())


def test_acceptability_extension(plane):
    g = plane.gamble
    s = background(plane, "nonneg")
    m = acceptability_extension([[-1, 2]], s)
    assert m.rejects(g([-1, -1])) and m.accepts(plane.zero())
    assert not m.rejects(g([1, -1]))
    with pytest.raises(NoRespect):
        acceptability_extension([[-2, 1], [1, -2]], s)


def test_characterisations_of_extensions(plane):
    o = FiBackground.make(plane, Region(plane, [Piece.cone([], 2)]), Region.empty(plane), "trivial")
    assert check_characterisation(fair_coin(plane), o, "FI").ok
    s = FiBackground.nonneg(plane)
    m = favourability_extension([[-1, 3]], s)
    assert check_characterisation(m, s, "F").ok
    broken = type(m).candidate(plane, m.accepted_region, m.rejected_region,
                               indifferent_region=m.indifferent_region,
                               favourable_region=m.favourable_region.union(Region(plane, [Piece.cone([], 2)])))
    rep = check_characterisation(broken, s, "F")
    assert not rep["F2 does not favour status quo"].ok
    a = background(plane, "nonneg")
    assert check_characterisation(acceptability_extension([[-1, 2]], a), a, "A").ok
    with pytest.raises(ValueError):
        check_characterisation(m, s, "Z")


def test_af_characterisation_of_fair_coin(plane):
    o = background(plane, "trivial")
    assert check_characterisation(fair_coin(plane), o, "AF").ok
    e1 = natural_extension(running_example(plane, "E1"), o)
    assert not check_characterisation(e1, o, "AF").ok or not framework_membership(e1).AF


def test_walley_strict(plane):
    rep = walley_correspondence(plane, [[-1, 3], [1, 0], [0, 1]])
    assert rep.ok
    rep = walley_correspondence(plane, [[0, 0], [1, 0], [0, 1]])
    assert not rep["D1 zero is not desirable"].ok
    assert not rep["F2 does not favour status quo"].ok
    assert rep["axiom-for-axiom agreement"].ok
    rep = walley_correspondence(plane, [[-1, 3]])
    assert not rep["D2 positive gambles are desirable"].ok and rep["axiom-for-axiom agreement"].ok


def test_walley_really_desirable(plane):
    rep = walley_correspondence(plane, [[1, 0], [0, 1], [-1, -1]], "really_desirable")
    assert not rep["avoiding partial loss"].ok
    assert not rep["A2 does not reject status quo"].ok
    assert rep["axiom-for-axiom agreement"].ok
    assert walley_correspondence(plane, [[1, 0], [0, 1], [-1, 2]], "really_desirable").ok
    with pytest.raises(ValueError):
        walley_correspondence(plane, [], "lukewarm")


# properties ----------------------------------------------------------------

spaces = st.sampled_from([SPACES[2], SPACES[3]])


@st.composite
def af_inputs(draw):
    s = draw(spaces)
    acc = draw(gamble_lists(s, 0, 2))
    fav = draw(gamble_lists(s, 1, 2))
    a = af_assessment(s, acc, fav)
    assume(af_closability(a))
    return a


@given(af_inputs())
def test_reckoning_preserves_condition_af(a):
    assert is_deductively_closable(a)
    m = natural_extension(a, None)
    assert framework_membership(m).AF


@given(af_inputs(), st.data())
def test_maximal_af_completions_accept_status_quo(a, data):
    qs = data.draw(gamble_lists(a.space, 0, 2)) + [a.space.zero()]
    m = maximal_completion(a, qs, "accept_first")
    assert m.accepts(a.space.zero())


@st.composite
def fi_inputs(draw):
    s = draw(spaces)
    fav = draw(gamble_lists(s, 0, 2))
    ind = draw(gamble_lists(s, 0, 1))
    return FiAssessment(s, fav, ind)


@given(fi_inputs(), gambles(SPACES[3]), gambles(SPACES[3]))
def test_fi_extension_structure(a, f, g):
    try:
        m = fi_natural_extension(a)
    except NotClosable:
        with pytest.raises(NoRespect):
            natural_extension(a.assessment(), background(a.space, "trivial"))
        return
    s = a.space
    f, g = s.gamble(f.values[: s.dim]), s.gamble(g.values[: s.dim])
    ind, fav = preference_components(m)
    if ind.contains(f):
        assert ind.contains(-f)
        if ind.contains(g):
            assert ind.contains(f + g)
        for h in a.favourable:
            assert fav.contains(h + f)
    # the explicit formula agrees with the general natural extension
    gen = natural_extension(a.assessment(), background(s, "trivial"))
    for x in (f, g, f + g):
        assert (m.accepts(x), m.rejects(x)) == (gen.accepts(x), gen.rejects(x))

