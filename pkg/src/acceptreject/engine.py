"""Assessments, deductive closure, reckoning extension and models.

Every object here is a pair of regions (accepted, rejected) over one space.
Raw assessments keep their finite statement lists as well; closed
assessments and models keep the generators they were built from, which the
command line uses for serialisation.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

from .core import (
    Gamble,
    Inclusion,
    Piece,
    Region,
    Space,
    SpaceMismatch,
    UnsupportedRegionAlgebra,
    first_common_point,
    piece_included,
    posi_certificate,
    region_includes,
)
from .errors import ConfusedInput, NoRespect, NotClosable, StrategyNotSound
from .report import Report

__all__ = [
    "Assessment",
    "BackgroundModel",
    "ClosedAssessment",
    "Model",
    "StatusRecord",
    "TOP",
    "at_most_as_resolved",
    "background",
    "check_model_axioms",
    "classify",
    "closure",
    "combine",
    "confusion_statements",
    "deductive_extension",
    "is_coherent",
    "is_deductively_closable",
    "limbo_contains",
    "maximal_completion",
    "natural_extension",
    "reckoning_extension",
    "remove_confusion",
]

DEFAULT_SEED = 20240601


def _as_gamble(space: Space, g) -> Gamble:
    if isinstance(g, Gamble):
        if g.space != space:
            raise SpaceMismatch("gamble from another space")
        return g
    return Gamble(space, g)


def _dedupe(gambles: Iterable[Gamble]) -> tuple:
    seen = set()
    out = []
    for g in gambles:
        if g not in seen:
            seen.add(g)
            out.append(g)
    return tuple(out)


def ray_dedupe(gambles: Iterable[Gamble]) -> tuple:
    """Keep the first gamble on each ray."""
    seen = set()
    out = []
    for g in gambles:
        key = g.normalized()
        if key not in seen:
            seen.add(key)
            out.append(g)
    return tuple(out)


class _Pair:
    """Common surface: an accepted and a rejected region."""

    space: Space
    accepted_region: Region
    rejected_region: Region

    def accepts(self, f: Gamble) -> bool:
        return self.accepted_region.contains(f)

    def rejects(self, f: Gamble) -> bool:
        return self.rejected_region.contains(f)

    def confusion_witness(self) -> Optional[Gamble]:
        return first_common_point(self.accepted_region, self.rejected_region)

    def is_confusion_free(self) -> bool:
        return self.confusion_witness() is None


class Assessment(_Pair):
    """A raw assessment: finite lists of accepted and rejected gambles."""

    def __init__(self, space: Space, accepted=(), rejected=()):
        self.space = space
        self.accepted = _dedupe(_as_gamble(space, g) for g in accepted)
        self.rejected = _dedupe(_as_gamble(space, g) for g in rejected)
        self.accepted_region = Region.points(space, self.accepted)
        self.rejected_region = Region.points(space, self.rejected)

    def __repr__(self):
        return f"Assessment(accepted={list(self.accepted)}, rejected={list(self.rejected)})"

    def __eq__(self, other):
        return (
            isinstance(other, Assessment)
            and self.space == other.space
            and set(self.accepted) == set(other.accepted)
            and set(self.rejected) == set(other.rejected)
        )

    def __hash__(self):
        return hash((self.space, frozenset(self.accepted), frozenset(self.rejected)))

    def accepts(self, f):
        return f in self.accepted

    def rejects(self, f):
        return f in self.rejected

    def union(self, other: "Assessment") -> "Assessment":
        return Assessment(self.space, self.accepted + other.accepted, self.rejected + other.rejected)

    def with_accepted(self, *fs) -> "Assessment":
        return Assessment(self.space, self.accepted + fs, self.rejected)

    def with_rejected(self, *fs) -> "Assessment":
        return Assessment(self.space, self.accepted, self.rejected + fs)


@dataclass(frozen=True)
class BackgroundModel:
    name: str
    space: Space
    accepted_region: Region
    rejected_region: Region

    @property
    def isq(self) -> bool:
        return self.accepted_region.contains(self.space.zero())

    def accepts(self, f):
        return self.accepted_region.contains(f)

    def rejects(self, f):
        return self.rejected_region.contains(f)

    def confusion_witness(self) -> Optional[Gamble]:
        return first_common_point(self.accepted_region, self.rejected_region)


BACKGROUNDS = ("nonneg", "uniform", "positive", "trivial")


def background(space: Space, name: str) -> BackgroundModel:
    """Preset backgrounds: ⟨L≥,L<⟩, ⟨L⋗,L⋖⟩, ⟨L>,L<⟩ and the trivial ⟨{0},∅⟩."""
    d = space.dim
    if name == "nonneg":
        acc, rej = Piece.orthant("nonneg", d), Piece.orthant("positive", d).negate()
    elif name == "uniform":
        acc, rej = Piece.orthant("uniform", d), Piece.orthant("uniform", d).negate()
    elif name == "positive":
        acc, rej = Piece.orthant("positive", d), Piece.orthant("positive", d).negate()
    elif name == "trivial":
        return BackgroundModel("trivial", space, Region(space, [Piece.cone([], d)]), Region.empty(space))
    else:
        raise ValueError(f"unknown background {name!r}; expected one of {BACKGROUNDS}")
    return BackgroundModel(name, space, Region(space, [acc]), Region(space, [rej]))


class ClosedAssessment(_Pair):
    """⟨posi(accepted_gens ∪ S⪰), rejected ∪ S≺⟩, or explicit regions."""

    def __init__(self, space, accepted_gens=(), rejected=(), background: Optional[BackgroundModel] = None,
                 accepted_region: Optional[Region] = None, rejected_region: Optional[Region] = None):
        self.space = space
        self.accepted_gens = ray_dedupe(_as_gamble(space, g) for g in accepted_gens)
        self.rejected = _dedupe(_as_gamble(space, g) for g in rejected)
        self.background = background
        if accepted_region is None:
            base = Region.posi(space, self.accepted_gens)
            if background is not None:
                base = base.union(background.accepted_region).posi_hull()
            accepted_region = base
        if rejected_region is None:
            rejected_region = Region.points(space, self.rejected)
            if background is not None:
                rejected_region = rejected_region.union(background.rejected_region)
        self.accepted_region = accepted_region
        self.rejected_region = rejected_region

    def __repr__(self):
        return f"ClosedAssessment(accepted_gens={list(self.accepted_gens)}, rejected={list(self.rejected)})"


class Model(_Pair):
    """A deductively closed assessment without limbo."""

    def __init__(self, space, accepted_region: Region, rejected_region: Region, accepted_gens=(),
                 rejected_gens=(), background: Optional[BackgroundModel] = None, origin: str = "reckoning",
                 indifferent=(), favourable=(), verify: bool = True, indifferent_region: Optional[Region] = None,
                 favourable_region: Optional[Region] = None):
        self.space = space
        self.accepted_region = accepted_region
        self.rejected_region = rejected_region
        self.accepted_gens = tuple(accepted_gens)
        self.rejected_gens = tuple(rejected_gens)
        self.background = background
        self.origin = origin
        self.indifferent = tuple(indifferent)
        self.favourable = tuple(favourable)
        # explicit preference components, when the construction knows them
        self.indifferent_region = indifferent_region
        self.favourable_region = favourable_region
        if verify:
            w = self.confusion_witness()
            if w is not None:
                raise ConfusedInput(f"model would be confused at {w}", witness=w)

    @staticmethod
    def candidate(space, accepted_region, rejected_region, **kw) -> "Model":
        """An unverified model, for axiom checking of external candidates."""
        return Model(space, accepted_region, rejected_region, origin=kw.pop("origin", "candidate"), verify=False, **kw)

    def __repr__(self):
        return f"Model<{self.origin}>(accepted={self.accepted_region}, rejected={self.rejected_region})"


class _Top:
    """The top assessment ⟨L, L⟩: returned when no confusion-free closure exists."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "TOP"

    def accepts(self, f):
        return True

    def rejects(self, f):
        return True


TOP = _Top()


# --------------------------------------------------------------------------
# confusion


def confusion_statements(a: Assessment) -> list:
    rej = set(a.rejected)
    return [g for g in a.accepted if g in rej]


def _drop_zero_if_pointed(gens: Sequence[Gamble], space: Space) -> tuple:
    nonzero = tuple(g for g in gens if not g.is_zero())
    return nonzero


def remove_confusion(a, strategy: str):
    """Remove confusing statements.

    Raw assessments: ``drop_from_accepted``, ``drop_from_rejected``, ``drop_from_both``.
    Closed assessments: ``drop_from_rejected`` or ``drop_from_both_then_reclose``.
    """
    if isinstance(a, Assessment):
        bad = set(confusion_statements(a))
        if strategy == "drop_from_accepted":
            return Assessment(a.space, [g for g in a.accepted if g not in bad], a.rejected)
        if strategy == "drop_from_rejected":
            return Assessment(a.space, a.accepted, [g for g in a.rejected if g not in bad])
        if strategy == "drop_from_both":
            return Assessment(a.space, [g for g in a.accepted if g not in bad], [g for g in a.rejected if g not in bad])
        raise ValueError(f"unknown strategy {strategy!r}")
    if isinstance(a, ClosedAssessment):
        if strategy not in ("drop_from_rejected", "drop_from_both_then_reclose"):
            raise StrategyNotSound(f"{strategy!r} does not keep a closed assessment closed")
        bad = [r for r in a.rejected if a.accepts(r)]
        kept = [r for r in a.rejected if r not in bad]
        if strategy == "drop_from_rejected" or not bad:
            return ClosedAssessment(a.space, a.accepted_gens, kept, a.background)
        # posi of a cone with finitely many points removed is the cone again,
        # except that a removed origin stays out when the cone has no line through it
        gens = a.accepted_gens
        zero = a.space.zero()
        if zero in bad and a.background is None:
            nonzero = _drop_zero_if_pointed(gens, a.space)
            if not (nonzero and posi_certificate(zero, list(nonzero)) is not None):
                gens = nonzero
        return ClosedAssessment(a.space, gens, kept, a.background)
    raise TypeError(f"cannot remove confusion from {type(a).__name__}")


# --------------------------------------------------------------------------
# deductive closure and reckoning


class Closability(NamedTuple):
    closable: bool
    witness: Optional[Gamble]
    certificate: Optional[tuple]

    def __bool__(self):
        return self.closable


def is_deductively_closable(a: Assessment) -> Closability:
    """0 ∉ A≺ − posi A⪰, decided one rejected gamble at a time."""
    for r in a.rejected:
        lam = posi_certificate(r, list(a.accepted))
        if lam is not None:
            return Closability(False, r, lam)
    return Closability(True, None, None)


def deductive_extension(a, bg: Optional[BackgroundModel] = None) -> ClosedAssessment:
    """ext_D: close the accepted set under positive combinations."""
    if isinstance(a, Assessment):
        return ClosedAssessment(a.space, a.accepted, a.rejected, bg)
    if isinstance(a, ClosedAssessment) and bg is None:
        return a
    acc = a.accepted_region
    rej = a.rejected_region
    if bg is not None:
        acc = acc.union(bg.accepted_region)
        rej = rej.union(bg.rejected_region)
    gens = getattr(a, "accepted_gens", ())
    rejected = getattr(a, "rejected", getattr(a, "rejected_gens", ()))
    return ClosedAssessment(a.space, gens, rejected, bg, acc.posi_hull(), rej)


def _reckon(space, acc: Region, rej: Region, acc_gens=None) -> Region:
    """shull(R) ∪ (shull(R) − A), with ray-minus-cone pieces where possible."""
    pieces = []
    single = acc_gens is not None and len(acc.pieces) == 1 and acc.pieces[0].kind == "PuncturedCone"
    for p in rej.pieces:
        if single and p.kind == "Point":
            pieces.append(Piece.ray_minus_cone(p.offset, [g.values for g in acc_gens]))
            continue
        h = p.shull()
        pieces.append(h)
        pieces.extend(h.plus(q.negate()) for q in acc.pieces)
    return Region(space, pieces).simplified()


def reckoning_extension(d) -> Model:
    """ext_M of a confusion-free closed assessment."""
    w = d.confusion_witness()
    if w is not None:
        raise ConfusedInput(f"closed assessment is confused at {w}", witness=w)
    gens = getattr(d, "accepted_gens", ())
    plain = isinstance(d, ClosedAssessment) and d.background is None
    rej = _reckon(d.space, d.accepted_region, d.rejected_region, gens if plain else None)
    rejected = getattr(d, "rejected", getattr(d, "rejected_gens", ()))
    return Model(d.space, d.accepted_region, rej, gens, ray_dedupe(rejected), getattr(d, "background", None),
                 verify=False)


def limbo_contains(d, f: Gamble) -> bool:
    """f is in the limbo of a closed assessment."""
    if d.rejects(f):
        return False
    acc = d.accepted_region
    live = []
    for p in d.rejected_region.pieces:
        if any(piece_included(p, q) for q in acc.pieces):
            continue  # rejected and accepted: no reckoning with it
        if first_common_point(Region(d.space, [p]), acc) is not None:
            raise UnsupportedRegionAlgebra("rejected piece partly accepted; limbo needs a set difference")
        live.append(p)
    h = Region(d.space, live).shull()
    return h.contains(f) or h.minus(acc).contains(f)


# --------------------------------------------------------------------------
# status of a gamble


@dataclass(frozen=True)
class StatusRecord:
    accepted: bool
    rejected: bool
    confusing: bool
    unresolved: bool
    indifferent: bool
    favourable: bool
    indeterminate: bool
    nine_class: Optional[int]

    @property
    def status(self) -> str:
        if self.confusing:
            return "confusing"
        return "accepted" if self.accepted else "rejected" if self.rejected else "unresolved"


NINE_CLASS_NAMES = (
    "indifferent", "accepted-unresolved-negation", "favourable",
    "unresolved-accepted-negation", "indeterminate", "unresolved-rejected-negation",
    "unfavourable", "rejected-unresolved-negation", "rejected-both",
)


def _cell(acc: bool, rej: bool) -> int:
    return 0 if acc else 2 if rej else 1


def classify(m, f: Gamble) -> StatusRecord:
    """Flags for f and the 3×3 cell of (status f, status −f); cell is None under confusion."""
    acc, rej = m.accepts(f), m.rejects(f)
    nacc, nrej = m.accepts(-f), m.rejects(-f)
    confusing = acc and rej
    nine = None
    if not (confusing or (nacc and nrej)):
        nine = 3 * _cell(acc, rej) + _cell(nacc, nrej)
    return StatusRecord(
        accepted=acc, rejected=rej, confusing=confusing, unresolved=not acc and not rej,
        indifferent=acc and nacc, favourable=acc and nrej, indeterminate=not acc and not nacc,
        nine_class=nine,
    )


# --------------------------------------------------------------------------
# background models, natural extension, coherence


def _statements(x):
    """(accepted gens, rejected gens) of any assessment-like object."""
    if isinstance(x, Assessment):
        return list(x.accepted), list(x.rejected)
    return list(getattr(x, "accepted_gens", ())), list(getattr(x, "rejected_gens", getattr(x, "rejected", ())))


def _union_regions(x, s: Optional[BackgroundModel]):
    acc, rej = x.accepted_region, x.rejected_region
    if s is not None:
        acc = acc.union(s.accepted_region)
        rej = rej.union(s.rejected_region)
    return acc, rej


def natural_extension(a, s: Optional[BackgroundModel]) -> Model:
    """cls_ncM(A ∪ S); raises NoRespect when A ∪ S is not closable."""
    acc, rej = _union_regions(a, s)
    if isinstance(a, Assessment):
        # closability is decided on the raw statements first: one LP per rejected gamble
        acc_hull = Region.posi(a.space, a.accepted).union(s.accepted_region if s else Region.empty(a.space)).posi_hull()
    else:
        acc_hull = acc.posi_hull()
    w = first_common_point(acc_hull, rej)
    if w is not None:
        raise NoRespect(f"assessment and background jointly confuse {w}", witness=w)
    gens, rgens = _statements(a)
    single = s is None and isinstance(a, Assessment)
    rej_region = _reckon(a.space, acc_hull, rej, ray_dedupe(gens) if single else None)
    return Model(a.space, acc_hull, rej_region, ray_dedupe(gens), ray_dedupe(rgens), s, verify=False)


def at_most_as_resolved(a, b, rng=None, samples: int = 24) -> Inclusion:
    """a ⊆ b component-wise (b may be TOP)."""
    if b is TOP:
        return Inclusion(True, True, None)
    if a is TOP:
        return Inclusion(False, True, None)
    rng = rng or random.Random(DEFAULT_SEED)
    inc = region_includes(b.accepted_region, a.accepted_region, rng, samples)
    if not inc.holds:
        return inc
    inc2 = region_includes(b.rejected_region, a.rejected_region, rng, samples)
    if not inc2.holds:
        return inc2
    return Inclusion(True, inc.certified and inc2.certified, None)


class Coherence(NamedTuple):
    coherent: bool
    reason: str
    witness: Optional[Gamble]

    def __bool__(self):
        return self.coherent


def is_coherent(a, s: Optional[BackgroundModel], samples: int = 256, seed: int = DEFAULT_SEED) -> Coherence:
    """a equals its natural extension (generator-level plus sampled points)."""
    try:
        ne = natural_extension(a, s)
    except NoRespect as exc:
        return Coherence(False, "does not respect the background", exc.witness)
    rng = random.Random(seed)
    per_piece = max(4, samples // max(1, len(ne.accepted_region.pieces) + len(ne.rejected_region.pieces)))
    inc = at_most_as_resolved(ne, a, rng, per_piece)
    if not inc.holds:
        return Coherence(False, "natural extension adds statements", inc.witness)
    back = at_most_as_resolved(a, ne, rng, per_piece)
    if not back.holds:
        return Coherence(False, "assessment exceeds its natural extension", back.witness)
    return Coherence(True, "fixed point", None)


# --------------------------------------------------------------------------
# order-theoretic operations


def combine(op: str, items: Sequence, bg: Optional[BackgroundModel] = None):
    """``union``, ``intersect``, ``deductive_union`` or ``reckoning_union`` of assessments/models."""
    if not items:
        raise ValueError("combine needs at least one operand")
    space = items[0].space
    if op in ("union", "deductive_union", "reckoning_union"):
        if all(isinstance(x, Assessment) for x in items):
            u = items[0]
            for x in items[1:]:
                u = u.union(x)
        else:
            acc = Region.empty(space).union(*[x.accepted_region for x in items])
            rej = Region.empty(space).union(*[x.rejected_region for x in items])
            gens = [g for x in items for g in _statements(x)[0]]
            rgens = [g for x in items for g in _statements(x)[1]]
            u = ClosedAssessment(space, gens, rgens, None, acc, rej)
        if op == "union":
            return u
        if op == "deductive_union":
            return deductive_extension(u)
        out = closure(u, "ncM")
        if out is TOP:
            raise NoRespect("the family has no common dominating model")
        return out
    if op == "intersect":
        acc, rej = items[0].accepted_region, items[0].rejected_region
        for x in items[1:]:
            acc = acc.meet(x.accepted_region)
            rej = rej.meet(x.rejected_region)
        acc, rej = acc.simplified(), rej.simplified()
        if all(isinstance(x, Model) for x in items):
            return Model(space, acc, rej, origin="intersection", verify=False)
        return ClosedAssessment(space, (), (), None, acc, rej)
    raise UnsupportedRegionAlgebra(f"unknown combination {op!r}")


def closure(a, structure: str):
    """cls_D, cls_ncD or cls_ncM; TOP when no confusion-free closure exists."""
    if a is TOP:
        return TOP
    d = deductive_extension(a)
    if structure == "D":
        return d
    if structure not in ("ncD", "ncM"):
        raise ValueError(f"unknown structure {structure!r}")
    if not d.is_confusion_free():
        return TOP
    if structure == "ncD":
        return d
    if isinstance(a, Model) and a.origin != "candidate":
        return a
    return reckoning_extension(d)


def maximal_completion(a, queries: Sequence[Gamble], policy: str = "accept_first",
                       bg: Optional[BackgroundModel] = None) -> Model:
    """Resolve every query in order, preferring acceptance or rejection per ``policy``."""
    if policy not in ("accept_first", "reject_first"):
        raise ValueError(f"unknown policy {policy!r}")
    bg = bg if bg is not None else getattr(a, "background", None)
    acc, rej = _statements(a)

    def build(acc, rej):
        return natural_extension(Assessment(a.space, acc, rej), bg)

    try:
        model = build(acc, rej)
    except NoRespect as exc:
        raise NotClosable("input assessment is not closable", witness=exc.witness) from exc
    for f in queries:
        if model.accepts(f) or model.rejects(f):
            continue
        order = ("acc", "rej") if policy == "accept_first" else ("rej", "acc")
        for side in order:
            try:
                if side == "acc":
                    model = build(acc + [f], rej)
                    acc = acc + [f]
                else:
                    model = build(acc, rej + [f])
                    rej = rej + [f]
                break
            except NoRespect:
                continue
        else:  # pragma: no cover - an unresolved gamble can always be resolved
            raise NotClosable(f"query {f} cannot be resolved either way", witness=f)
    return model


# --------------------------------------------------------------------------
# characterisation of models


def check_model_axioms(m, s: Optional[BackgroundModel] = None, samples: int = 24,
                       seed: int = DEFAULT_SEED) -> Report:
    """No Confusion and AR1–AR4 for a (possibly external) candidate model."""
    rng = random.Random(seed)
    rep = Report("model axioms")
    space = m.space
    zero = space.zero()
    w = m.confusion_witness()
    rep.add("NC", w is None, w)
    if s is not None:
        inc = region_includes(m.accepted_region, s.accepted_region, rng, samples)
        inc2 = region_includes(m.rejected_region, s.rejected_region, rng, samples) if inc.holds else inc
        ok = inc.holds and inc2.holds
        rep.add("AR1", ok, None if ok else (inc.witness or inc2.witness),
                "exact" if ok and inc.certified and inc2.certified else "sampled")
    else:
        rep.add("AR1", True, detail="no background")
    rep.add("AR2", not m.rejects(zero), zero if m.rejects(zero) else None)
    acc = m.accepted_region
    if len(acc.pieces) <= 1 and all(p.homogeneous for p in acc.pieces):
        rep.add("AR3", True, method="structural")
    else:
        inc = region_includes(acc, acc.posi_hull(), rng, samples)
        rep.add("AR3", inc.holds, inc.witness, "exact" if inc.certified else "sampled")
    # only rejections that are not also accepted take part in reckoning
    live = [p for p in m.rejected_region.pieces if not any(piece_included(p, q) for q in acc.pieces)]
    limbo = Region(space, live).shull().minus(acc)
    inc = region_includes(m.rejected_region, limbo, rng, samples)
    rep.add("AR4", inc.holds, inc.witness, "exact" if inc.certified else "sampled")
    return rep
