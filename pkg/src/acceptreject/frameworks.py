"""Simplified frameworks: accept-favour, favour-indifference, favourability, acceptability.

The preference components of any model are read off its regions:
indifferent gambles are M⪰ ∩ −M⪰ and favourable ones are M⪰ ∩ −M≺.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .core import (
    Gamble,
    Piece,
    Region,
    Space,
    first_common_point,
    member_posi,
    posi_certificate,
    region_includes,
)
from .engine import (
    DEFAULT_SEED,
    Assessment,
    BackgroundModel,
    Closability,
    Model,
    _as_gamble,
    background,
    ray_dedupe,
)
from .errors import ConditionViolated, NoRespect, NotClosable
from .report import Report

__all__ = [
    "FRAMEWORK_TAGS",
    "FiAssessment",
    "FiBackground",
    "FrameworkFlags",
    "acceptability_extension",
    "af_assessment",
    "af_closability",
    "check_characterisation",
    "favourability_extension",
    "fi_natural_extension",
    "framework_membership",
    "preference_components",
    "walley_correspondence",
]

FRAMEWORK_TAGS = ("AF", "FI", "F", "A")


def preference_components(x):
    """(indifferent, favourable) regions of a model or background."""
    acc, rej = x.accepted_region, x.rejected_region
    ind = getattr(x, "indifferent_region", None)
    fav = getattr(x, "favourable_region", None)
    if ind is None:
        ind = acc.meet(acc.negate()).simplified()
    if fav is None:
        fav = acc.meet(rej.negate()).simplified()
    return ind, fav


@dataclass(frozen=True)
class FiBackground(BackgroundModel):
    """A favour-indifference background ⟨S≃ ∪ S≻, −S≻⟩ kept with its components."""

    indifferent_region: Region
    favourable_region: Region

    @staticmethod
    def make(space: Space, indifferent: Region, favourable: Region, name: str = "fi") -> "FiBackground":
        return FiBackground(name, space, indifferent.union(favourable), favourable.negate(),
                            indifferent, favourable)

    @staticmethod
    def nonneg(space: Space) -> "FiBackground":
        """⟨L≥, L<⟩ read as S≃ = {0}, S≻ = L>."""
        zero = Region(space, [Piece.cone([], space.dim)])
        return FiBackground.make(space, zero, Region(space, [Piece.orthant("positive", space.dim)]), "nonneg")


# --------------------------------------------------------------------------
# membership of the frameworks


class FrameworkFlags(NamedTuple):
    AF: bool
    FI: bool
    witness: Optional[Gamble]


def framework_membership(m, rng=None, samples: int = 24) -> FrameworkFlags:
    """Condition AF (−M≺ ⊆ M⪰) and Condition FI (additionally M⪰ = M≻ ∪ M≃)."""
    rng = rng or random.Random(DEFAULT_SEED)
    space = m.space
    for r in getattr(m, "rejected_gens", ()):
        if not m.accepts(-r):
            return FrameworkFlags(False, False, -r)
    af = region_includes(m.accepted_region, m.rejected_region.negate(), rng, samples)
    if not af.holds:
        return FrameworkFlags(False, False, af.witness)
    ind, fav = preference_components(m)
    fi = region_includes(ind.union(fav), m.accepted_region, rng, samples)
    if space.dim and not fi.holds:
        return FrameworkFlags(True, False, fi.witness)
    return FrameworkFlags(True, True, None)


def af_assessment(space: Space, accepted=(), favourable=()) -> Assessment:
    """⟨accepted ∪ favourable, −favourable⟩."""
    fav = [_as_gamble(space, f) for f in favourable]
    return Assessment(space, [_as_gamble(space, g) for g in accepted] + fav, [-f for f in fav])


def af_closability(a: Assessment) -> Closability:
    """0 ∉ A≻ + posi A⪰, one LP per favourable statement."""
    acc = set(a.accepted)
    for r in a.rejected:
        if -r not in acc:
            raise ConditionViolated(f"rejected {r} without accepting its negation")
    gens = list(a.accepted)
    for r in a.rejected:
        f = -r
        # 0 = f + g with g in posi A⪰  ⇔  −f ∈ posi A⪰
        if member_posi(r, gens):
            return Closability(False, f, posi_certificate(r, gens))
    return Closability(True, None, None)


# --------------------------------------------------------------------------
# favour-indifference


class FiAssessment:
    """Favourable and indifferent gamble lists."""

    def __init__(self, space: Space, favourable=(), indifferent=()):
        self.space = space
        self.favourable = tuple(_as_gamble(space, g) for g in favourable)
        self.indifferent = tuple(_as_gamble(space, g) for g in indifferent)

    def assessment(self) -> Assessment:
        """A⪰ = favourable ∪ indifferent ∪ −indifferent, A≺ = −favourable."""
        acc = list(self.favourable) + list(self.indifferent) + [-g for g in self.indifferent]
        return Assessment(self.space, acc, [-f for f in self.favourable])

    def __repr__(self):
        return f"FiAssessment(favourable={list(self.favourable)}, indifferent={list(self.indifferent)})"


def _span_region(space: Space, gens: Sequence[Gamble]) -> Region:
    if not gens:
        return Region(space, [Piece.cone([], space.dim)])
    return Region.span(space, list(gens))


def fi_natural_extension(a: FiAssessment) -> Model:
    """M≃ = lhull A≃ and M≻ = posi A≻ + lhull A≃; NotClosable if 0 ∈ M≻."""
    space = a.space
    ind = _span_region(space, a.indifferent)
    fav = Region.posi(space, list(a.favourable)).plus(ind) if a.favourable else Region.empty(space)
    zero = space.zero()
    for p in fav.pieces:
        x = p.witness(zero.values)
        if x is not None:
            raise NotClosable("favourable gambles cancel against indifferent ones", witness=zero, certificate=x)
    m = Model(space, ind.union(fav), fav.negate(),
              ray_dedupe(list(a.favourable) + list(a.indifferent) + [-g for g in a.indifferent]),
              ray_dedupe(-f for f in a.favourable), None, "favour-indifference",
              a.indifferent, a.favourable, verify=False, indifferent_region=ind, favourable_region=fav)
    return m


# --------------------------------------------------------------------------
# favourability and acceptability


def favourability_extension(fav, s: BackgroundModel) -> Model:
    """Natural extension of favourable gambles over a favour-indifference background."""
    space = s.space
    fav = [_as_gamble(space, f) for f in fav]
    if not isinstance(s, FiBackground):
        ind_s, fav_s = preference_components(s)
    else:
        ind_s, fav_s = s.indifferent_region, s.favourable_region
    hull = fav_s.union(Region.points(space, fav)).posi_hull()
    m_fav = ind_s.plus(hull).simplified()
    zero = space.zero()
    if m_fav.contains(zero):
        # some favourable gamble's negation is reachable from the rest
        reach = m_fav.union(ind_s)
        w = next((f for f in fav if reach.contains(-f)), zero)
        raise NoRespect(f"favourable gambles cancel against the background at {w}", witness=w)
    m = Model(space, ind_s.union(m_fav), m_fav.negate(), ray_dedupe(fav), ray_dedupe(-f for f in fav), s,
              "favourability", favourable=tuple(fav), verify=False, indifferent_region=ind_s,
              favourable_region=m_fav)
    return m


def acceptability_extension(acc, s: BackgroundModel) -> Model:
    """M⪰ = posi(S⪰ ∪ acc), M≺ = S≺ − M⪰; NoRespect when the two meet."""
    space = s.space
    acc = [_as_gamble(space, g) for g in acc]
    m_acc = s.accepted_region.union(Region.points(space, acc)).posi_hull()
    w = first_common_point(m_acc, s.rejected_region)
    if w is not None:
        raise NoRespect(f"accepted gambles reach the background-rejected {w}", witness=w)
    m_rej = s.rejected_region.plus(m_acc.negate()).union(s.rejected_region).simplified()
    return Model(space, m_acc, m_rej, ray_dedupe(acc), (), s, "acceptability", verify=False)


# --------------------------------------------------------------------------
# characterisations


def _cone_check(rep: Report, name: str, r: Region, rng, samples: int):
    if not r.pieces or (len(r.pieces) == 1 and r.pieces[0].homogeneous):
        rep.add(name, True, method="structural")
        return
    inc = region_includes(r, r.posi_hull(), rng, samples)
    rep.add(name, inc.holds, inc.witness, "exact" if inc.certified else "sampled")


def _include(rep: Report, name: str, outer: Region, inner: Region, rng, samples: int):
    inc = region_includes(outer, inner, rng, samples)
    rep.add(name, inc.holds, inc.witness, "exact" if inc.certified else "sampled")


def _zero_check(rep: Report, name: str, r: Region):
    z = r.space.zero()
    bad = r.contains(z)
    rep.add(name, not bad, z if bad else None)


def check_characterisation(m, s: BackgroundModel, tag: str, samples: int = 24,
                           seed: int = DEFAULT_SEED) -> Report:
    """The framework axioms for ``tag`` in AF, FI, F or A."""
    if tag not in FRAMEWORK_TAGS:
        raise ValueError(f"unknown framework {tag!r}; expected one of {FRAMEWORK_TAGS}")
    rng = random.Random(seed)
    rep = Report(f"{tag} characterisation")
    ind, fav = preference_components(m)
    acc, rej = m.accepted_region, m.rejected_region
    if tag == "AF":
        inc = region_includes(acc, s.accepted_region, rng, samples)
        inc2 = region_includes(rej, s.rejected_region, rng, samples) if inc.holds else inc
        rep.add("AF1 includes the background", inc.holds and inc2.holds, inc.witness or inc2.witness,
                "exact" if inc.certified and inc2.certified else "sampled")
        _zero_check(rep, "AF2 does not favour status quo", fav)
        _cone_check(rep, "AF3 acceptable gambles form a cone", acc, rng, samples)
        _cone_check(rep, "AF3 favourable gambles form a cone", fav, rng, samples)
        _include(rep, "AF4 favours sweetened deals", fav, acc.plus(fav), rng, samples)
    elif tag == "FI":
        s_ind, s_fav = preference_components(s)
        inc = region_includes(ind, s_ind, rng, samples)
        inc2 = region_includes(fav, s_fav, rng, samples) if inc.holds else inc
        rep.add("FI1 includes the background", inc.holds and inc2.holds, inc.witness or inc2.witness,
                "exact" if inc.certified and inc2.certified else "sampled")
        _zero_check(rep, "FI2 does not favour status quo", fav)
        _cone_check(rep, "FI3 favourable gambles form a cone", fav, rng, samples)
        zero = m.space.zero()
        lin = ind.contains(zero)
        if lin:
            inc = region_includes(ind, ind.negate(), rng, samples)
            lin = inc.holds
            w = inc.witness
        else:
            w = zero
        rep.add("FI3 indifferent gambles form a linear space", lin, w, "sampled")
        if lin:
            _cone_check(rep, "FI3 indifferent gambles are closed under addition", ind, rng, samples)
        _include(rep, "FI4 favours sweetened deals", fav, fav.plus(ind), rng, samples)
    elif tag == "F":
        s_ind, s_fav = preference_components(s)
        _include(rep, "F1 favours background-favourable gambles", fav, s_fav, rng, samples)
        _zero_check(rep, "F2 does not favour status quo", fav)
        _cone_check(rep, "F3 favourable gambles form a cone", fav, rng, samples)
        _include(rep, "F4 favours sweetened deals", fav, fav.plus(s_ind), rng, samples)
    else:
        _include(rep, "A1 accepts background-acceptable gambles", acc, s.accepted_region, rng, samples)
        w = first_common_point(acc, s.rejected_region)
        rep.add("A2 does not reject status quo", w is None, w)
        _cone_check(rep, "A3 acceptable gambles form a cone", acc, rng, samples)
    return rep


# --------------------------------------------------------------------------
# desirability axioms from the literature


def walley_correspondence(space: Space, desirable, variant: str = "strict_D1_D4", samples: int = 24,
                          seed: int = DEFAULT_SEED) -> Report:
    """Desirability axioms on posi(desirable) side by side with the matching characterisation.

    ``strict_D1_D4`` pairs D1–D4 with F1–F3 over S≻ = L>; ``really_desirable``
    pairs positive homogeneity, addition, avoiding partial loss and accepting
    sure gains with A1–A3 over ⟨L≥, L<⟩.
    """
    gens = [_as_gamble(space, g) for g in desirable]
    rng = random.Random(seed)
    cone = Region.posi(space, gens)
    rep = Report(f"desirability axioms ({variant})")
    zero = space.zero()
    units = space.units()
    if variant == "strict_D1_D4":
        d1 = not cone.contains(zero)
        d2 = bool(gens) and all(member_posi(u, gens) for u in units)
        d34 = True  # a finitely generated posi is a convex cone
        rep.add("D1 zero is not desirable", d1, None if d1 else zero)
        rep.add("D2 positive gambles are desirable", d2,
                None if d2 else next((u for u in units if not gens or not member_posi(u, gens)), None))
        rep.add("D3 positive scaling", d34, method="structural")
        rep.add("D4 combination", d34, method="structural")
        s = FiBackground.nonneg(space)
        m = Model(space, Region(space, [Piece.cone([], space.dim)]).union(cone), cone.negate(), gens, (), s,
                  "favourability", verify=False, indifferent_region=s.indifferent_region, favourable_region=cone)
        f = check_characterisation(m, s, "F", samples, seed)
        pairs = [("D1 zero is not desirable", "F2 does not favour status quo"),
                 ("D2 positive gambles are desirable", "F1 favours background-favourable gambles")]
        d_cone = d34
        f_cone = f["F3 favourable gambles form a cone"].ok
    elif variant == "really_desirable":
        # acceptable gambles: the closed cone, status quo included
        cone = Region.cone(space, gens)
        neg = Region(space, [Piece.orthant("positive", space.dim).negate()])
        w = first_common_point(cone, neg)
        d9 = w is None
        d10 = all(cone.contains(u) for u in units)
        rep.add("positive homogeneity", True, method="structural")
        rep.add("addition", True, method="structural")
        rep.add("avoiding partial loss", d9, w)
        rep.add("accepting sure gains", d10, None if d10 else next(u for u in units if not cone.contains(u)))
        s = background(space, "nonneg")
        m = Model(space, cone, s.rejected_region.plus(cone.negate()), gens, (), s, "acceptability", verify=False)
        f = check_characterisation(m, s, "A", samples, seed)
        pairs = [("avoiding partial loss", "A2 does not reject status quo"),
                 ("accepting sure gains", "A1 accepts background-acceptable gambles")]
        d_cone = True
        f_cone = f["A3 acceptable gambles form a cone"].ok
    else:
        raise ValueError(f"unknown variant {variant!r}")
    for c in f.checks:
        rep.checks.append(c)
    agree = all(rep[a].ok == f[b].ok for a, b in pairs) and d_cone == f_cone
    rep.add("axiom-for-axiom agreement", agree, method="derived")
    return rep
