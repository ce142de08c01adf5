"""Gambles on a finite space and symbolic regions of gambles.

A region is a finite union of convex pieces.  Every piece is stored in one
lifted form::

    { offset + sum_j x_j * col_j  :  x_j >= 0 unless col j is free,
                                     sum_{j in G} x_j > 0 for each strict group G,
                                     linking equalities on x }

Rays, posi, cones, spans, ray-minus-cone sets, half-spaces and the orthants
are all named constructors of this one shape, which keeps negation,
Minkowski sums, intersections and positive scalar hulls closed-form and makes
membership a single LP per piece.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, NamedTuple, Optional, Sequence

from .ratlp import Constraint, LinearProgram, LpInputError, as_rational, feasible, solve_lp

__all__ = [
    "Gamble",
    "Piece",
    "Region",
    "Space",
    "SpaceMismatch",
    "UnsupportedRegionAlgebra",
    "Inclusion",
    "VectorOrder",
    "first_common_point",
    "lineality_basis",
    "member_posi",
    "member_region",
    "piece_included",
    "rank",
    "region_algebra",
    "region_includes",
    "span_basis",
    "vector_order",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class SpaceMismatch(LpInputError):
    """Gambles or regions from different spaces were combined."""


class UnsupportedRegionAlgebra(ValueError):
    """The requested set operation has no finite symbolic form here."""


@dataclass(frozen=True)
class Space:
    atoms: tuple

    def __init__(self, atoms: Iterable[str]):
        atoms = tuple(str(a) for a in atoms)
        if not atoms:
            raise LpInputError("a space needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise LpInputError(f"duplicate atom labels in {atoms}")
        object.__setattr__(self, "atoms", atoms)

    @property
    def dim(self) -> int:
        return len(self.atoms)

    def gamble(self, values) -> "Gamble":
        return Gamble(self, values)

    def zero(self) -> "Gamble":
        return Gamble(self, (ZERO,) * self.dim)

    def constant(self, c) -> "Gamble":
        return Gamble(self, (as_rational(c),) * self.dim)

    def indicator(self, atom) -> "Gamble":
        k = atom if isinstance(atom, int) else self.atoms.index(atom)
        return Gamble(self, tuple(ONE if i == k else ZERO for i in range(self.dim)))

    def units(self) -> list:
        return [self.indicator(i) for i in range(self.dim)]


class Gamble:
    """A rational vector indexed by the atoms of a space."""

    __slots__ = ("space", "values", "_hash")

    def __init__(self, space: Space, values):
        vals = tuple(as_rational(v) for v in values)
        if len(vals) != space.dim:
            raise SpaceMismatch(f"{len(vals)} values for a space of {space.dim} atoms")
        self.space = space
        self.values = vals
        self._hash = hash((space.atoms, vals))

    @classmethod
    def raw(cls, space: Space, values: tuple) -> "Gamble":
        """Construct from a tuple of Fractions without coercion or checks."""
        g = object.__new__(cls)
        g.space = space
        g.values = values
        g._hash = hash((space.atoms, values))
        return g

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Gamble) and self.values == other.values and self.space == other.space

    def __repr__(self):
        return "Gamble(" + ", ".join(str(v) for v in self.values) + ")"

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def _check(self, other: "Gamble"):
        if not isinstance(other, Gamble):
            raise TypeError(f"expected a Gamble, got {type(other).__name__}")
        if other.space != self.space:
            raise SpaceMismatch("gambles live on different spaces")

    def __add__(self, other):
        self._check(other)
        return Gamble.raw(self.space, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        self._check(other)
        return Gamble.raw(self.space, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self):
        return Gamble.raw(self.space, tuple(-a for a in self.values))

    def __mul__(self, k):
        k = as_rational(k)
        return Gamble.raw(self.space, tuple(k * a for a in self.values))

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = as_rational(k)
        return Gamble(self.space, tuple(a / k for a in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)

    def min(self) -> Fraction:
        return min(self.values)

    def max(self) -> Fraction:
        return max(self.values)

    def dot(self, other) -> Fraction:
        vals = other.values if isinstance(other, Gamble) else tuple(other)
        return sum((a * b for a, b in zip(self.values, vals)), ZERO)

    def shift(self, c) -> "Gamble":
        c = as_rational(c)
        return Gamble(self.space, tuple(a + c for a in self.values))

    def normalized(self) -> "Gamble":
        """Positive rescaling with first nonzero coordinate of absolute value 1."""
        for v in self.values:
            if v:
                return self / abs(v)
        return self


class VectorOrder(NamedTuple):
    geq: bool
    gt: bool
    uniform_gt: bool


def vector_order(f: Gamble, g: Gamble) -> VectorOrder:
    d = f - g
    geq = d.min() >= 0
    return VectorOrder(geq, geq and not d.is_zero(), d.min() > 0)


# --------------------------------------------------------------------------
# exact linear algebra helpers


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(map(as_rational, v)) for v in vectors]
    if not rows:
        return 0
    r = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                k = rows[i][c] / p
                rows[i] = [a - k * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def span_basis(vectors: Sequence[Gamble]) -> list:
    """Greedy independent subset of ``vectors`` spanning the same space."""
    basis = []
    for v in vectors:
        if v.is_zero():
            continue
        if rank([b.values for b in basis] + [v.values]) > len(basis):
            basis.append(v)
    return basis


def nullspace(normal: Sequence[Fraction], dim: int) -> list:
    """Basis of {x : <normal, x> = 0} as coordinate tuples."""
    normal = [as_rational(v) for v in normal]
    k = next((i for i, v in enumerate(normal) if v), None)
    if k is None:
        return [tuple(ONE if i == j else ZERO for i in range(dim)) for j in range(dim)]
    out = []
    for j in range(dim):
        if j == k:
            continue
        v = [ZERO] * dim
        v[j] = ONE
        v[k] = -normal[j] / normal[k]
        out.append(tuple(v))
    return out


# --------------------------------------------------------------------------
# positive linear hull membership


def _combination_lp(f: Sequence[Fraction], gens: Sequence[Sequence[Fraction]], extra=()):
    n = len(gens)
    cons = [Constraint([g[i] for g in gens], "=", f[i]) for i in range(len(f))]
    cons.extend(extra)
    return LinearProgram([0] * n, cons)


def member_posi(f: Gamble, gens: Sequence[Gamble]) -> bool:
    """f is a positive combination of a nonempty subset of ``gens``."""
    for g in gens:
        f._check(g)
    if not gens:
        return False
    vecs = [g.values for g in gens]
    if f.is_zero():
        extra = [Constraint([1] * len(vecs), "=", 1)]
        return feasible(_combination_lp(f.values, vecs, extra))[0]
    return feasible(_combination_lp(f.values, vecs))[0]


def posi_certificate(f: Gamble, gens: Sequence[Gamble]) -> Optional[tuple]:
    """Nonnegative coefficients witnessing posi membership, or None."""
    if not gens:
        return None
    vecs = [g.values for g in gens]
    extra = [Constraint([1] * len(vecs), "=", 1)] if f.is_zero() else []
    ok, lam = feasible(_combination_lp(f.values, vecs, extra))
    return lam if ok else None


def lineality_basis(gens: Sequence[Gamble]) -> list:
    """Basis of posi(gens) ∩ -posi(gens)."""
    if not gens:
        return []
    qualifying = [g for g in gens if g.is_zero() or _in_cone((-g).values, [h.values for h in gens])]
    return span_basis(qualifying)


def _in_cone(f, gens) -> bool:
    if not any(f):
        return True
    return feasible(_combination_lp(f, gens))[0]


# --------------------------------------------------------------------------
# pieces


def _vec(values, dim) -> tuple:
    if isinstance(values, Gamble):
        values = values.values
    v = tuple(as_rational(x) for x in values)
    if len(v) != dim:
        raise SpaceMismatch(f"vector of length {len(v)} in dimension {dim}")
    return v


class Piece:
    """One convex piece in lifted form; see the module docstring."""

    __slots__ = ("kind", "dim", "offset", "cols", "free", "strict", "links", "gens", "_key", "_hash")

    def __init__(self, kind, dim, offset=None, cols=(), free=None, strict=(), links=(), gens=()):
        self.kind = kind
        self.dim = dim
        self.offset = _vec(offset, dim) if offset is not None else (ZERO,) * dim
        self.cols = tuple(_vec(c, dim) for c in cols)
        self.free = tuple(free) if free is not None else (False,) * len(self.cols)
        self.strict = tuple(tuple(sorted(g)) for g in strict)
        self.links = tuple((tuple(map(as_rational, a)), as_rational(b)) for a, b in links)
        self.gens = tuple(gens)
        if len(self.free) != len(self.cols):
            raise LpInputError("free mask does not match the column count")
        for a, _ in self.links:
            if len(a) != len(self.cols):
                raise LpInputError("link row does not match the column count")
        self._key = (self.dim, self.offset, self.cols, self.free, self.strict, self.links)
        self._hash = hash(self._key)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Piece) and self._key == other._key

    def __repr__(self):
        if self.gens:
            return f"{self.kind}({', '.join(_fmt_vec(g) for g in self.gens)})"
        return f"{self.kind}<{len(self.cols)} cols>"

    @property
    def homogeneous(self) -> bool:
        return not any(self.offset) and all(b == 0 for _, b in self.links)

    def contains(self, f) -> bool:
        return _piece_contains(self, _vec(f, self.dim))

    def witness(self, f) -> Optional[tuple]:
        """Coefficients x certifying membership of ``f``, or None."""
        return _piece_witness(self, _vec(f, self.dim))

    def is_empty(self) -> bool:
        return _piece_empty(self)

    def some_point(self) -> Optional[tuple]:
        x = _piece_anchor(self)
        return None if x is None else _project(self, x)

    def negate(self) -> "Piece":
        return Piece(
            _negated_kind(self.kind), self.dim, tuple(-v for v in self.offset),
            [tuple(-v for v in c) for c in self.cols], self.free, self.strict, self.links,
            tuple(tuple(-v for v in g) for g in self.gens),
        )

    def plus(self, other: "Piece") -> "Piece":
        """Minkowski sum."""
        _same_dim(self, other)
        n1, n2 = len(self.cols), len(other.cols)
        links = [(a + (ZERO,) * n2, b) for a, b in self.links]
        links += [((ZERO,) * n1 + a, b) for a, b in other.links]
        return Piece(
            "Sum", self.dim, tuple(a + b for a, b in zip(self.offset, other.offset)),
            self.cols + other.cols, self.free + other.free,
            self.strict + tuple(tuple(j + n1 for j in g) for g in other.strict), links,
        )

    def meet(self, other: "Piece") -> "Piece":
        """Intersection: other's columns only feed linking equalities."""
        _same_dim(self, other)
        n1, n2 = len(self.cols), len(other.cols)
        links = [(a + (ZERO,) * n2, b) for a, b in self.links]
        links += [((ZERO,) * n1 + a, b) for a, b in other.links]
        for i in range(self.dim):
            row = tuple(c[i] for c in self.cols) + tuple(-c[i] for c in other.cols)
            links.append((row, other.offset[i] - self.offset[i]))
        zero = (ZERO,) * self.dim
        return Piece(
            "Meet", self.dim, self.offset, self.cols + (zero,) * n2, self.free + other.free,
            self.strict + tuple(tuple(j + n1 for j in g) for g in other.strict), links,
        )

    def shull(self) -> "Piece":
        """Positive scalar hull {λ f : λ > 0, f in piece}."""
        if self.homogeneous:
            return self
        if self.kind == "Point":
            return Piece.ray(self.offset)
        n = len(self.cols)
        links = [(a + (-b,), ZERO) for a, b in self.links]
        return Piece(
            "Shull", self.dim, None, self.cols + (self.offset,), self.free + (False,),
            self.strict + ((n,),), links,
        )

    def sample(self, rng: random.Random, count: int) -> list:
        """Up to ``count`` points of the piece (coordinate tuples)."""
        return _piece_sample(self, rng, count)

    # named constructors ---------------------------------------------------

    @staticmethod
    def point(g) -> "Piece":
        v = _vec(g, len(g))
        return Piece("Point", len(v), v, gens=(v,))

    @staticmethod
    def cone(gens, dim=None) -> "Piece":
        vs = [_vec(g, len(g)) for g in gens]
        d = dim if dim is not None else len(vs[0])
        return Piece("Cone", d, None, vs, gens=tuple(vs))

    @staticmethod
    def posi(gens, dim=None) -> "Piece":
        """Punctured cone: positive combinations of a nonempty subset."""
        vs = [_vec(g, len(g)) for g in gens]
        d = dim if dim is not None else len(vs[0])
        return Piece("PuncturedCone", d, None, vs, strict=(tuple(range(len(vs))),), gens=tuple(vs))

    @staticmethod
    def ray(g) -> "Piece":
        v = _vec(g, len(g))
        return Piece("Ray", len(v), None, [v], strict=((0,),), gens=(v,))

    @staticmethod
    def ray_minus_cone(r, gens) -> "Piece":
        """{μ r - Σ λ_g g : μ > 0, λ >= 0}."""
        rv = _vec(r, len(r))
        vs = [_vec(g, len(rv)) for g in gens]
        cols = [rv] + [tuple(-x for x in g) for g in vs]
        return Piece("RayMinusCone", len(rv), None, cols, strict=((0,),), gens=(rv,) + tuple(vs))

    @staticmethod
    def span(gens, dim=None) -> "Piece":
        vs = [_vec(g, len(g)) for g in gens]
        d = dim if dim is not None else len(vs[0])
        return Piece("Span", d, None, vs, free=[True] * len(vs), gens=tuple(vs))

    @staticmethod
    def halfspace(normal, strict: bool) -> "Piece":
        n = _vec(normal, len(normal))
        d = len(n)
        ker = nullspace(n, d)
        if not any(n):
            if strict:
                return Piece("HalfSpaceOpen", d, None, [(ZERO,) * d], strict=((0,),), gens=(n,))
            return Piece("HalfSpaceClosed", d, None, ker, free=[True] * len(ker), gens=(n,))
        cols = ker + [n]
        return Piece(
            "HalfSpaceOpen" if strict else "HalfSpaceClosed", d, None, cols,
            free=[True] * len(ker) + [False], strict=((len(ker),),) if strict else (), gens=(n,),
        )

    @staticmethod
    def orthant(kind: str, dim: int) -> "Piece":
        """``nonneg`` (L≥), ``positive`` (L> = L≥ minus 0), ``uniform`` (L⋗)."""
        units = [tuple(ONE if i == j else ZERO for i in range(dim)) for j in range(dim)]
        if kind == "nonneg":
            return Piece("OrthantNonneg", dim, None, units)
        if kind == "positive":
            return Piece("OrthantNonnegPunctured", dim, None, units, strict=(tuple(range(dim)),))
        if kind == "uniform":
            return Piece("OrthantUniformPos", dim, None, [(ONE,) * dim] + units, strict=((0,),))
        raise UnsupportedRegionAlgebra(f"unknown orthant {kind!r}")


_NEG_KINDS = {
    "OrthantNonneg": "NegOrthantNonneg",
    "OrthantNonnegPunctured": "NegOrthantNonnegPunctured",
    "OrthantUniformPos": "NegOrthantUniformPos",
}
_NEG_KINDS.update({v: k for k, v in list(_NEG_KINDS.items())})


def _negated_kind(kind: str) -> str:
    # generator-labelled kinds stay the same kind with negated generators
    return _NEG_KINDS.get(kind, kind)


def _same_dim(p: Piece, q: Piece):
    if p.dim != q.dim:
        raise SpaceMismatch("pieces of different dimension")


def _fmt_vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _piece_program(p: Piece, f):
    """LP over (x, t): maximise t with every strict group sum >= t, t <= 1."""
    n = len(p.cols)
    has_t = bool(p.strict)
    width = n + (1 if has_t else 0)
    cons = []
    for i in range(p.dim):
        row = [c[i] for c in p.cols]
        if has_t:
            row.append(ZERO)
        cons.append(Constraint(row, "=", f[i] - p.offset[i]))
    for a, b in p.links:
        cons.append(Constraint(list(a) + ([ZERO] if has_t else []), "=", b))
    mask = [not fr for fr in p.free]
    obj = [ZERO] * width
    if has_t:
        for g in p.strict:
            row = [ZERO] * width
            for j in g:
                row[j] = ONE
            row[n] = -ONE
            cons.append(Constraint(row, ">=", 0))
        cons.append(Constraint([ZERO] * n + [ONE], "<=", 1))
        mask.append(False)
        obj[n] = ONE
    return LinearProgram(obj, cons, mask)


@lru_cache(maxsize=200_000)
def _piece_witness(p: Piece, f) -> Optional[tuple]:
    if not p.cols:
        ok = f == p.offset and all(b == 0 for _, b in p.links) and not p.strict
        return () if ok else None
    out = solve_lp(_piece_program(p, f))
    if out.is_infeasible:
        return None
    if p.strict:
        if out.value <= 0:
            return None
        return out.witness[: len(p.cols)]
    return out.witness


def _piece_contains(p: Piece, f) -> bool:
    return _piece_witness(p, f) is not None


@lru_cache(maxsize=20_000)
def _piece_anchor(p: Piece) -> Optional[tuple]:
    """Some coefficient vector satisfying links and strictness, or None if empty."""
    n = len(p.cols)
    if n == 0:
        ok = all(b == 0 for _, b in p.links) and not p.strict
        return () if ok else None
    has_t = bool(p.strict)
    width = n + (1 if has_t else 0)
    cons = [Constraint(list(a) + ([ZERO] if has_t else []), "=", b) for a, b in p.links]
    mask = [not fr for fr in p.free]
    obj = [ZERO] * width
    if has_t:
        for g in p.strict:
            row = [ZERO] * width
            for j in g:
                row[j] = ONE
            row[n] = -ONE
            cons.append(Constraint(row, ">=", 0))
        cons.append(Constraint([ZERO] * n + [ONE], "<=", 1))
        mask.append(False)
        obj[n] = ONE
    out = solve_lp(LinearProgram(obj, cons, mask))
    if out.is_infeasible or (has_t and out.value <= 0):
        return None
    return out.witness[:n]


def _piece_empty(p: Piece) -> bool:
    return _piece_anchor(p) is None


def _project(p: Piece, x) -> tuple:
    v = list(p.offset)
    for xj, c in zip(x, p.cols):
        if xj:
            for i in range(p.dim):
                v[i] += xj * c[i]
    return tuple(v)


_SAMPLE_VALUES = [Fraction(k, d) for d in (1, 2, 3) for k in range(0, 4)]


def _piece_sample(p: Piece, rng: random.Random, count: int) -> list:
    if _piece_empty(p):
        return []
    n = len(p.cols)
    if not p.links:
        pts = []
        for _ in range(count):
            x = []
            for j in range(n):
                v = rng.choice(_SAMPLE_VALUES)
                if p.free[j] and rng.random() < 0.5:
                    v = -v
                x.append(v)
            for g in p.strict:
                if sum(x[j] for j in g) <= 0:
                    j = rng.choice([j for j in g if not p.free[j]] or list(g))
                    x[j] = abs(x[j]) + 1 - sum(x[k] for k in g)
            pts.append(_project(p, x))
        return pts
    # linked pieces: blend the anchor with random vertices, or with points far
    # along a recession ray when the random objective is unbounded
    x0 = _piece_anchor(p)
    pts = [_project(p, x0)]
    cons = [Constraint(a, "=", b) for a, b in p.links]
    mask = [not fr for fr in p.free]
    for _ in range(count - 1):
        obj = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
        out = solve_lp(LinearProgram(obj, cons, mask))
        w = Fraction(rng.randint(1, 4), 5)
        if out.is_optimal:
            y = out.witness
        elif out.is_unbounded:
            k = Fraction(rng.randint(1, 6), rng.randint(1, 3))
            y = [u + k * r for u, r in zip(out.witness, out.ray)]
        else:  # pragma: no cover - the anchor proves feasibility
            continue
        x = [w * a + (1 - w) * b for a, b in zip(x0, y)]
        pts.append(_project(p, x))
    return pts


# --------------------------------------------------------------------------
# regions


class Region:
    """A finite union of pieces over one space."""

    __slots__ = ("space", "pieces")

    def __init__(self, space: Space, pieces: Iterable[Piece] = ()):
        ps = []
        seen = set()
        for p in pieces:
            if p.dim != space.dim:
                raise SpaceMismatch("piece dimension differs from the space")
            if p not in seen:
                seen.add(p)
                ps.append(p)
        self.space = space
        self.pieces = tuple(ps)

    def __repr__(self):
        return "Region[" + " ∪ ".join(map(repr, self.pieces)) + "]"

    def __eq__(self, other):
        return isinstance(other, Region) and self.space == other.space and set(self.pieces) == set(other.pieces)

    def __hash__(self):
        return hash((self.space, frozenset(self.pieces)))

    @staticmethod
    def empty(space: Space) -> "Region":
        return Region(space, ())

    @staticmethod
    def points(space: Space, gambles: Iterable[Gamble]) -> "Region":
        return Region(space, [Piece.point(g.values) for g in gambles])

    @staticmethod
    def posi(space: Space, gambles: Sequence[Gamble]) -> "Region":
        if not gambles:
            return Region(space, ())
        return Region(space, [Piece.posi([g.values for g in gambles])])

    @staticmethod
    def cone(space: Space, gambles: Sequence[Gamble]) -> "Region":
        return Region(space, [Piece.cone([g.values for g in gambles], space.dim)])

    @staticmethod
    def span(space: Space, gambles: Sequence[Gamble]) -> "Region":
        return Region(space, [Piece.span([g.values for g in gambles], space.dim)])

    def is_empty(self) -> bool:
        return all(p.is_empty() for p in self.pieces)

    def contains(self, f: Gamble) -> bool:
        if f.space != self.space:
            raise SpaceMismatch("gamble and region live on different spaces")
        return any(_piece_contains(p, f.values) for p in self.pieces)

    __contains__ = contains

    def containing_piece(self, f: Gamble) -> Optional[Piece]:
        for p in self.pieces:
            if _piece_contains(p, f.values):
                return p
        return None

    def _check(self, other: "Region"):
        if other.space != self.space:
            raise SpaceMismatch("regions live on different spaces")

    def negate(self) -> "Region":
        return Region(self.space, [p.negate() for p in self.pieces])

    def union(self, *others: "Region") -> "Region":
        ps = list(self.pieces)
        for o in others:
            self._check(o)
            ps.extend(o.pieces)
        return Region(self.space, ps)

    def plus(self, other: "Region") -> "Region":
        self._check(other)
        return Region(self.space, [p.plus(q) for p in self.pieces for q in other.pieces])

    def minus(self, other: "Region") -> "Region":
        return self.plus(other.negate())

    def meet(self, other: "Region") -> "Region":
        self._check(other)
        return Region(self.space, [p.meet(q) for p in self.pieces for q in other.pieces])

    def shull(self) -> "Region":
        return Region(self.space, [p.shull() for p in self.pieces])

    def posi_hull(self) -> "Region":
        """posi of the union: sums of the scalar hulls over nonempty piece subsets.

        Point pieces are first gathered into a single posi piece.
        """
        points = [p.offset for p in self.pieces if p.kind == "Point" and not p.cols]
        others = [p for p in self.pieces if not (p.kind == "Point" and not p.cols)]
        hulls = [Piece.posi(points, self.space.dim)] if points else []
        hulls += [p.shull() for p in others if not p.is_empty()]
        hulls = Region(self.space, hulls).simplified().pieces
        out = []
        for k in range(1, len(hulls) + 1):
            for combo in combinations(hulls, k):
                acc = combo[0]
                for q in combo[1:]:
                    acc = acc.plus(q)
                out.append(acc)
        return Region(self.space, out).simplified()

    def simplified(self) -> "Region":
        """Drop empty pieces and pieces certified inside another piece."""
        ps = [p for p in self.pieces if not p.is_empty()]
        dropped = set()
        for i, p in enumerate(ps):
            for j, q in enumerate(ps):
                if i != j and j not in dropped and piece_included(p, q):
                    dropped.add(i)
                    break
        return Region(self.space, [p for i, p in enumerate(ps) if i not in dropped])

    def nonempty_pieces(self) -> "Region":
        return Region(self.space, [p for p in self.pieces if not p.is_empty()])

    def sample(self, rng: random.Random, per_piece: int) -> list:
        out = []
        for p in self.pieces:
            out.extend(Gamble(self.space, v) for v in p.sample(rng, per_piece))
        return out


def member_region(f: Gamble, r: Region) -> bool:
    return r.contains(f)


def region_algebra(op: str, *operands: Region) -> Region:
    """Symbolic set algebra: ``negate``, ``minkowski_sum``, ``union``, ``intersect``, ``shull``, ``posi``."""
    if not operands:
        raise UnsupportedRegionAlgebra("no operands")
    first = operands[0]
    if op == "negate":
        if len(operands) != 1:
            raise UnsupportedRegionAlgebra("negate takes one operand")
        return first.negate()
    if op == "minkowski_sum":
        acc = first
        for o in operands[1:]:
            acc = acc.plus(o)
        return acc
    if op == "union":
        return first.union(*operands[1:])
    if op == "intersect":
        acc = first
        for o in operands[1:]:
            acc = acc.meet(o)
        return acc
    if op == "shull":
        return first.shull()
    if op == "posi":
        return first.union(*operands[1:]).posi_hull()
    raise UnsupportedRegionAlgebra(f"no symbolic form for {op!r}")


# --------------------------------------------------------------------------
# inclusion between regions


class Inclusion(NamedTuple):
    holds: bool
    certified: bool
    witness: Optional[Gamble]

    def __bool__(self):
        return self.holds


def _blocks(p: Piece, coarse: bool):
    """Split a link-free homogeneous piece into (strict, generators) blocks.

    Fine splitting (``coarse=False``) gives every closed column its own block
    and a free column the pair ±col.  Coarse splitting merges all closed
    columns into one block, which is the better shape for a target.
    """
    grouped = set()
    for g in p.strict:
        if grouped.intersection(g) or any(p.free[j] for j in g):
            return None
        grouped.update(g)
    out = [(True, tuple(p.cols[j] for j in g)) for g in p.strict]
    rest = []
    for j, c in enumerate(p.cols):
        if j in grouped:
            continue
        gens = (c, tuple(-v for v in c)) if p.free[j] else (c,)
        if coarse:
            rest.extend(gens)
        else:
            out.append((False, gens))
    if coarse and rest:
        out.append((False, tuple(rest)))
    return out


def _block_piece(strict: bool, gens, dim) -> Piece:
    if strict:
        return Piece("PuncturedCone", dim, None, gens, strict=(tuple(range(len(gens))),))
    return Piece("Cone", dim, None, gens)


def _in_or_zero(v, q: Piece) -> bool:
    return not any(v) or _piece_contains(q, v)


def piece_included(p: Piece, q: Piece) -> bool:
    """Sound but incomplete test of p ⊆ q.  False means "not certified"."""
    if p == q:
        return True
    if p.kind == "Point" and not p.cols:
        return _piece_contains(q, p.offset)
    if p.links or not p.homogeneous:
        return False
    fine = _blocks(p, coarse=False)
    if fine is None:
        return False
    p_has_zero = _piece_contains(p, (ZERO,) * p.dim)
    # whole-target rule: q is a convex cone
    if q.homogeneous:
        if all(all(_in_or_zero(v, q) for v in gens) for _, gens in fine):
            if not p_has_zero or _piece_contains(q, (ZERO,) * q.dim):
                return True
    # block-matching rule
    if q.links or not q.homogeneous:
        return False
    coarse = _blocks(q, coarse=True)
    if coarse is None:
        return False
    qpieces = [_block_piece(s, gens, q.dim) for s, gens in coarse]
    options = []
    for s, gens in fine:
        opts = [j for j, qp in enumerate(qpieces) if all(_in_or_zero(v, qp) for v in gens)]
        if not opts:
            return False
        options.append(opts)
    # each strict target block needs a strict source block sitting inside it exactly
    exact = {}
    for k, (s, gens) in enumerate(fine):
        if s:
            exact[k] = [j for j in options[k] if coarse[j][0] and all(_piece_contains(qpieces[j], v) for v in gens)]
    need = [j for j, (s, _) in enumerate(coarse) if s]
    match = {}

    def augment(j, seen):
        for k, js in exact.items():
            if j in js and k not in seen:
                seen.add(k)
                if k not in match or augment(match[k], seen):
                    match[k] = j
                    return True
        return False

    return all(augment(j, set()) for j in need)


def region_includes(outer: Region, inner: Region, rng: Optional[random.Random] = None,
                    samples: int = 24) -> Inclusion:
    """Does ``inner`` ⊆ ``outer`` hold?

    Pieces of ``inner`` certified inside a single piece of ``outer`` are exact;
    the rest are probed with sampled points, and any point found outside is
    returned as a witness.
    """
    if inner.space != outer.space:
        raise SpaceMismatch("regions live on different spaces")
    rng = rng or random.Random(0)
    certified = True
    for p in inner.pieces:
        if p.is_empty():
            continue
        if any(piece_included(p, q) for q in outer.pieces):
            continue
        certified = False
        anchor = p.some_point()
        pts = [anchor] + p.sample(rng, samples)
        for v in pts:
            g = Gamble(outer.space, v)
            if not outer.contains(g):
                return Inclusion(False, True, g)
    return Inclusion(True, certified, None)


def first_common_point(a: Region, b: Region) -> Optional[Gamble]:
    """A gamble in both regions, or None when they are disjoint (exact)."""
    if a.space != b.space:
        raise SpaceMismatch("regions live on different spaces")
    for p in a.pieces:
        for q in b.pieces:
            m = p.meet(q)
            v = m.some_point()
            if v is not None:
                return Gamble(a.space, v)
    return None
