"""Linear and lower previsions, and their translation to and from models.

A lower prevision assigns a supremum buying price to finitely many gambles;
its marginal gambles f − P(f) drive every computation here.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .core import Gamble, Piece, Region, Space, nullspace, piece_included
from .engine import DEFAULT_SEED, BackgroundModel, Model, _as_gamble
from .errors import ConditionViolated, SureLoss, Unbounded
from .ratlp import Constraint, LinearProgram, as_rational, solve_lp
from .report import Report

__all__ = [
    "AslVerdict",
    "LinearPrevision",
    "LowerPrevision",
    "avoids_sure_loss",
    "disagreement_witness",
    "is_coherent_lpr",
    "linear_prevision_model",
    "linear_space_properties",
    "marginal_gambles",
    "model_to_lower_prevision",
    "natural_extension_value",
    "prevision_to_model",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class LowerPrevision:
    """Finitely many (gamble, lower prevision) entries on one space."""

    def __init__(self, space: Space, entries):
        self.space = space
        seen = {}
        out = []
        for g, v in entries:
            g = _as_gamble(space, g)
            v = as_rational(v)
            if g in seen:
                raise ValueError(f"gamble {g} assessed twice")
            seen[g] = v
            out.append((g, v))
        self.entries = tuple(out)

    @property
    def gambles(self) -> tuple:
        return tuple(g for g, _ in self.entries)

    def __getitem__(self, f: Gamble) -> Fraction:
        for g, v in self.entries:
            if g == f:
                return v
        raise KeyError(f)

    def __repr__(self):
        return "LowerPrevision(" + ", ".join(f"{g}:{v}" for g, v in self.entries) + ")"

    @staticmethod
    def vacuous(space: Space, gambles) -> "LowerPrevision":
        gs = [_as_gamble(space, g) for g in gambles]
        return LowerPrevision(space, [(g, g.min()) for g in gs])


class LinearPrevision:
    """A probability mass function; the prevision of f is ⟨mass, f⟩."""

    def __init__(self, space: Space, mass):
        m = tuple(as_rational(x) for x in mass)
        if len(m) != space.dim:
            raise ValueError(f"mass vector of length {len(m)} on a space of {space.dim} atoms")
        if any(x < 0 for x in m) or sum(m) != 1:
            raise ValueError("mass must be nonnegative and sum to one")
        self.space = space
        self.mass = m

    def __call__(self, f: Gamble) -> Fraction:
        return sum((a * b for a, b in zip(self.mass, f.values)), ZERO)

    def __repr__(self):
        return f"LinearPrevision({', '.join(map(str, self.mass))})"

    def on(self, gambles) -> LowerPrevision:
        gs = [_as_gamble(self.space, g) for g in gambles]
        return LowerPrevision(self.space, [(g, self(g)) for g in gs])


def marginal_gambles(lp: LowerPrevision) -> tuple:
    """f − P(f) for every entry."""
    return tuple(g.shift(-v) for g, v in lp.entries)


class AslVerdict(NamedTuple):
    avoids: bool
    value: Fraction  # min over the simplex of λ of max_ω Σ λ_i m_i(ω)
    certificate: Optional[tuple]  # λ when sure loss is incurred
    witness: Optional[Gamble]  # Σ λ_i m_i, uniformly negative

    def __bool__(self):
        return self.avoids


def avoids_sure_loss(lp: LowerPrevision) -> AslVerdict:
    """Minimise t subject to Σ λ_i m_i ≤ t pointwise, Σ λ = 1, λ ≥ 0."""
    marg = marginal_gambles(lp)
    if not marg:
        raise ValueError("a lower prevision without entries cannot incur a sure loss")
    k = len(marg)
    cons = []
    for w in range(lp.space.dim):
        cons.append(Constraint([m.values[w] for m in marg] + [-ONE], "<=", 0))
    cons.append(Constraint([ONE] * k + [ZERO], "=", 1))
    out = solve_lp(LinearProgram([ZERO] * k + [-ONE], cons, [True] * k + [False]))
    t = -out.value
    lam = out.witness[:k]
    if t >= 0:
        return AslVerdict(True, t, None, None)
    g = lp.space.zero()
    for c, m in zip(lam, marg):
        if c:
            g = g + m * c
    return AslVerdict(False, t, lam, g)


def _require_asl(lp: LowerPrevision):
    v = avoids_sure_loss(lp)
    if not v:
        raise SureLoss(f"sure loss {v.witness}", witness=v.witness, certificate=v.certificate)


def natural_extension_value(lp: LowerPrevision, f) -> Fraction:
    """sup over g in posi(marg) of inf(f − g): maximise t with f − Σ λ m ≥ t."""
    f = _as_gamble(lp.space, f)
    _require_asl(lp)
    marg = marginal_gambles(lp)
    k = len(marg)
    cons = [Constraint([m.values[w] for m in marg] + [ONE], "<=", f.values[w]) for w in range(lp.space.dim)]
    out = solve_lp(LinearProgram([ZERO] * k + [ONE], cons, [True] * k + [False]))
    if not out.is_optimal:  # pragma: no cover - excluded by avoiding sure loss
        raise SureLoss("natural extension is unbounded")
    return out.value


def is_coherent_lpr(lp: LowerPrevision) -> bool:
    """Avoids sure loss and every entry is a fixed point of natural extension."""
    if not lp.entries or not avoids_sure_loss(lp):
        return False
    if any(natural_extension_value(lp, g) != v for g, v in lp.entries):
        return False
    space = lp.space
    dom = set(lp.gambles)
    if all(u in dom for u in space.units()) and space.constant(1) in dom:
        if not linear_space_properties(lp).ok:  # pragma: no cover - follows from the fixed points
            return False
    return True


def linear_space_properties(lp: LowerPrevision, sample: Sequence[Gamble] = (), seed: int = DEFAULT_SEED) -> Report:
    """Sure gains, positive homogeneity and superadditivity of the natural extension."""
    rng = random.Random(seed)
    space = lp.space
    pts = list(lp.gambles) + [_as_gamble(space, g) for g in sample]
    if len(pts) < 4:
        pts += [space.gamble([rng.randint(-3, 3) for _ in range(space.dim)]) for _ in range(4)]
    val = {}

    def ne(f):
        if f not in val:
            val[f] = natural_extension_value(lp, f)
        return val[f]

    rep = Report("linear-space coherence")
    bad = next((f for f in pts if ne(f) < f.min()), None)
    rep.add("accepting sure gains", bad is None, bad, "sampled")
    bad = None
    for f in pts:
        for lam in (Fraction(0), Fraction(1, 2), Fraction(3)):
            if ne(f * lam) != lam * ne(f):
                bad = (f, lam)
                break
        if bad:
            break
    rep.add("positive homogeneity", bad is None, bad, "sampled")
    bad = None
    for i, f in enumerate(pts):
        for g in pts[i:]:
            if ne(f + g) < ne(f) + ne(g):
                bad = (f, g)
                break
        if bad:
            break
    rep.add("superadditivity", bad is None, bad, "sampled")
    return rep


# --------------------------------------------------------------------------
# models


def _uniform(space: Space) -> Region:
    return Region(space, [Piece.orthant("uniform", space.dim)])


def _check_compatible(s: BackgroundModel):
    if s.name in ("uniform", "nonneg", "positive"):
        return
    up = Piece.orthant("uniform", s.space.dim)
    ok = any(piece_included(up, q) for q in s.accepted_region.pieces) and any(
        piece_included(up.negate(), q) for q in s.rejected_region.pieces)
    if not ok:
        raise ConditionViolated(f"background {s.name!r} does not contain the uniformly positive/negative model")


def prevision_to_model(lp: LowerPrevision, s: BackgroundModel, interpretation: str = "second") -> Model:
    """⟨S⪰ ∪ (posi(marg) + L⋗), S≺ ∪ (L⋖ − posi(marg))⟩.

    With ``interpretation="first"`` the marginal gambles themselves are
    accepted too (willingness to buy at the stated price).
    """
    _check_compatible(s)
    _require_asl(lp)
    space = lp.space
    marg = [m for m in marginal_gambles(lp)]
    up = _uniform(space)
    acc = s.accepted_region.union(up)
    rej = s.rejected_region.union(up.negate())
    if interpretation == "second":
        if marg:
            pm = Region.posi(space, marg)
            acc = acc.union(pm.plus(up))
            rej = rej.union(up.negate().minus(pm))
    elif interpretation == "first":
        acc = acc.union(Region.points(space, marg)).posi_hull()
        rej = rej.union(rej.minus(acc))
    else:
        raise ValueError(f"unknown interpretation {interpretation!r}")
    m = Model(space, acc.simplified(), rej.simplified(), marg, (), s, f"prevision/{interpretation}", verify=False)
    if interpretation == "first":
        w = m.confusion_witness()
        if w is not None:
            raise SureLoss(f"accepting the marginal gambles confuses {w}", witness=w)
    return m


def _alpha_program(p: Piece, f: Gamble, strict: bool):
    """Variables (x, α[, t]): f − α·1 = offset + Σ x_j col_j."""
    n = len(p.cols)
    width = n + 1 + (1 if strict else 0)
    cons = []
    for i in range(p.dim):
        row = [c[i] for c in p.cols] + [ONE] + ([ZERO] if strict else [])
        cons.append(Constraint(row, "=", f.values[i] - p.offset[i]))
    for a, b in p.links:
        cons.append(Constraint(list(a) + [ZERO] + ([ZERO] if strict else []), "=", b))
    mask = [not fr for fr in p.free] + [False] + ([False] if strict else [])
    obj = [ZERO] * width
    if strict:
        for g in p.strict:
            row = [ZERO] * width
            for j in g:
                row[j] = ONE
            row[n + 1] = -ONE
            cons.append(Constraint(row, ">=", 0))
        cons.append(Constraint([ZERO] * (n + 1) + [ONE], "<=", 1))
        obj[n + 1] = ONE
    else:
        obj[n] = ONE
    return LinearProgram(obj, cons, mask)


def model_to_lower_prevision(m, f) -> Optional[Fraction]:
    """sup{α : f − α·1 ∈ M⪰}, piece by piece; None when no α qualifies."""
    f = _as_gamble(m.space, f)
    best = None
    for p in m.accepted_region.pieces:
        if p.strict:
            out = solve_lp(_alpha_program(p, f, True))
            if out.is_infeasible or out.value <= 0:
                continue
        out = solve_lp(_alpha_program(p, f, False))
        if out.is_infeasible:
            continue
        if out.is_unbounded:
            raise Unbounded(f"f − α·1 stays acceptable for every α; {f} has no finite lower prevision")
        if best is None or out.value > best:
            best = out.value
    return best


def linear_prevision_model(p: LinearPrevision, interpretation: str = "second") -> Model:
    """⟨L>P, L<P⟩, or ⟨L=P ∪ L>P, L<P⟩ under the first interpretation."""
    space = p.space
    pos = Region(space, [Piece.halfspace(p.mass, True)])
    neg = pos.negate()
    if interpretation == "second":
        acc = pos
        ind = Region.empty(space)
    elif interpretation == "first":
        acc = Region(space, [Piece.halfspace(p.mass, False)])
        ker = nullspace(p.mass, space.dim)
        ind = Region(space, [Piece.span(ker, space.dim) if ker else Piece.cone([], space.dim)])
    else:
        raise ValueError(f"unknown interpretation {interpretation!r}")
    return Model(space, acc, neg, (), (), None, f"linear/{interpretation}", verify=False,
                 indifferent_region=ind, favourable_region=pos)


def disagreement_witness(p: LinearPrevision, q: LinearPrevision) -> Optional[Gamble]:
    """A gamble favourable under p and rejected under q, or None when p = q.

    Shift f − p(f) for an f with p(f) ≠ q(f) by half its q-value so that its
    p-value becomes positive and its q-value negative.
    """
    if p.mass == q.mass:
        return None
    space = p.space
    f = next(u for u in space.units() if p(u) != q(u))
    g = f.shift(-p(f))
    if q(g) > 0:
        g = -g
    h = g.shift(-q(g) / 2)
    return h
