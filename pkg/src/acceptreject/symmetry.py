"""Symmetry judgements: transformation monoids, their indifference span and background model.

A transformation T maps atoms to atoms; the transformed gamble is f∘T.
Indifference between every f and f∘T makes every f − f∘T indifferent.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import permutations, product
from typing import Iterable, Optional, Sequence

from .core import Gamble, Piece, Region, Space, span_basis
from .errors import CapExceeded, Confused
from .frameworks import FiBackground, check_characterisation, favourability_extension
from .ratlp import Constraint, LinearProgram, solve_lp
from .report import Report

__all__ = [
    "PermutationGroup",
    "Transformation",
    "TransformationMonoid",
    "index_permutation_group",
    "indifference_span",
    "invariant_atoms",
    "monoid_closure",
    "project_avg",
    "representation_check",
    "sequence_space",
    "sym_extension",
    "symmetry_background",
    "transformed_gamble",
    "validity_certificate",
]

DEFAULT_CAP = 10_000
ZERO = Fraction(0)
ONE = Fraction(1)


class Transformation:
    """A total map on atom indices."""

    __slots__ = ("mapping",)

    def __init__(self, mapping: Sequence[int]):
        m = tuple(int(i) for i in mapping)
        if any(not 0 <= i < len(m) for i in m):
            raise ValueError(f"transformation {m} leaves the space")
        self.mapping = m

    @staticmethod
    def identity(n: int) -> "Transformation":
        return Transformation(range(n))

    def __len__(self):
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def after(self, other: "Transformation") -> "Transformation":
        """self ∘ other."""
        return Transformation([self.mapping[j] for j in other.mapping])

    def is_bijective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

    def inverse(self) -> "Transformation":
        if not self.is_bijective():
            raise ValueError("only permutations have inverses")
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Transformation(inv)

    def __eq__(self, other):
        return isinstance(other, Transformation) and self.mapping == other.mapping

    def __hash__(self):
        return hash(self.mapping)

    def __repr__(self):
        return f"T{self.mapping}"


def transformed_gamble(t: Transformation, f: Gamble) -> Gamble:
    """(Tᵗf)(ω) = f(Tω)."""
    if len(t) != f.space.dim:
        raise ValueError("transformation and gamble live on different spaces")
    return Gamble.raw(f.space, tuple(f.values[j] for j in t.mapping))


class TransformationMonoid:
    """A finite set of transformations closed under composition, identity included."""

    def __init__(self, elements: Iterable[Transformation], check: bool = True):
        els = list(dict.fromkeys(elements))
        if not els:
            raise ValueError("a monoid needs at least its identity")
        n = len(els[0])
        if check:
            s = set(els)
            if Transformation.identity(n) not in s:
                raise ValueError("monoid lacks the identity")
            for a, b in product(els, repeat=2):
                if a.after(b) not in s:
                    raise ValueError(f"{a} ∘ {b} falls outside the set")
        self.size = n
        self.elements = tuple(els)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, t):
        return t in self.elements


def monoid_closure(generators: Sequence[Transformation], cap: int = DEFAULT_CAP, size: Optional[int] = None):
    """All products of the generators, identity included."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    gens = list(generators)
    n = size if size is not None else (len(gens[0]) if gens else None)
    if n is None:
        raise ValueError("an empty generator list needs the space size")
    ident = Transformation.identity(n)
    seen = {ident: None}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x.after(g)
            if y not in seen:
                seen[y] = None
                if len(seen) > cap:
                    raise CapExceeded(f"monoid has more than {cap} elements")
                queue.append(y)
    els = list(seen)
    if all(t.is_bijective() for t in els):
        return PermutationGroup(els, check=False)
    return TransformationMonoid(els, check=False)


class PermutationGroup(TransformationMonoid):
    """A finite group of permutations of the atoms."""

    def __init__(self, elements: Iterable[Transformation], check: bool = True):
        super().__init__(elements, check)
        if check:
            if not all(t.is_bijective() for t in self.elements):
                raise ValueError("a permutation group holds bijections only")
            s = set(self.elements)
            if any(t.inverse() not in s for t in self.elements):
                raise ValueError("group is not closed under inverses")

    @staticmethod
    def generated(generators: Sequence[Transformation], cap: int = DEFAULT_CAP) -> "PermutationGroup":
        g = monoid_closure(generators, cap)
        if not isinstance(g, PermutationGroup):
            raise ValueError("generators are not all permutations")
        return g


# --------------------------------------------------------------------------
# indifference and the background model


def _space(m: TransformationMonoid, space: Optional[Space]) -> Space:
    if space is None:
        return Space(str(i) for i in range(m.size))
    if m.size != space.dim:
        raise ValueError("monoid and space differ in size")
    return space


def indifference_span(m: TransformationMonoid, space: Optional[Space] = None) -> list:
    """A basis of lhull{f − Tᵗf}, from the unit gambles."""
    space = _space(m, space)
    vecs = []
    for t in m:
        for u in space.units():
            d = u - transformed_gamble(t, u)
            if not d.is_zero():
                vecs.append(d)
    return span_basis(vecs)


def validity_certificate(basis: Sequence[Gamble], space: Space) -> Optional[Gamble]:
    """A nonzero f ≤ 0 in the span, or None when there is none.

    Among the f with Σf = −1 the LP picks one whose largest value is as
    negative as possible.
    """
    if not basis:
        return None
    k, n = len(basis), space.dim
    # variables: span coefficients c (free), then the slack s
    cons = []
    for w in range(n):
        coeffs = [b.values[w] for b in basis]
        cons.append(Constraint(coeffs + [ZERO], "<=", 0))
        cons.append(Constraint(coeffs + [ONE], "<=", 0))
    cons.append(Constraint([sum(b.values) for b in basis] + [ZERO], "=", -1))
    out = solve_lp(LinearProgram([ZERO] * k + [ONE], cons, [False] * (k + 1)))
    if out.is_infeasible:
        return None
    f = space.zero()
    for c, b in zip(out.witness[:k], basis):
        if c:
            f = f + b * c
    return f


def _basis_span(space: Space, basis) -> Region:
    if not basis:
        return Region(space, [Piece.cone([], space.dim)])
    return Region.span(space, list(basis))


def symmetry_background(m: TransformationMonoid, space: Optional[Space] = None) -> FiBackground:
    """⟨L_T ∪ (L_T + L>), L_T + L<⟩; Confused when L_T holds a nonzero f ≤ 0."""
    space = _space(m, space)
    basis = indifference_span(m, space)
    cert = validity_certificate(basis, space)
    if cert is not None:
        shown = cert.normalized()
        raise Confused(f"indifferent gamble {shown} is nonpositive", witness=shown, certificate=cert)
    ind = _basis_span(space, basis)
    pos = Region(space, [Piece.orthant("positive", space.dim)])
    fav = ind.plus(pos) if basis else pos
    return FiBackground.make(space, ind, fav, "symmetry")


def sym_extension(fav, m: TransformationMonoid, space: Optional[Space] = None, verify: bool = True):
    """Favourability natural extension over the symmetry background.

    With ``verify`` the output is checked against the favourability
    characterisation over S_T, and a failure is raised as an error.
    """
    s = symmetry_background(m, space)
    out = favourability_extension(fav, s)
    if verify:
        rep = check_characterisation(out, s, "F")
        if not rep.ok:  # pragma: no cover - the construction satisfies it
            raise RuntimeError("symmetric extension fails its characterisation:\n" + rep.summary())
    return out


# --------------------------------------------------------------------------
# permutation groups


def invariant_atoms(g: PermutationGroup, space: Optional[Space] = None) -> list:
    """Orbits of the atoms, as tuples of atom labels in order of first appearance."""
    space = _space(g, space)
    seen = set()
    out = []
    for i in range(space.dim):
        if i in seen:
            continue
        orbit = sorted({t(i) for t in g})
        seen.update(orbit)
        out.append(tuple(space.atoms[j] for j in orbit))
    return out


def project_avg(g: PermutationGroup, f) -> Gamble:
    """The mean of πᵗf over the group."""
    n = len(g)
    acc = [ZERO] * f.space.dim
    for t in g:
        for i, j in enumerate(t.mapping):
            acc[i] += f.values[j]
    return Gamble.raw(f.space, tuple(Fraction(v, n) for v in acc))


def _favourable(m, f: Gamble) -> bool:
    fav = getattr(m, "favourable_region", None)
    if fav is not None:
        return fav.contains(f)
    return m.accepts(f) and m.rejects(-f)


def representation_check(m, g: PermutationGroup, sample: Sequence[Gamble]) -> Report:
    """f favourable ⇔ avg f favourable, on every sampled gamble."""
    rep = Report("representation by averaging")
    bad = []
    for f in sample:
        if _favourable(m, f) != _favourable(m, project_avg(g, f)):
            bad.append(f)
    rep.add("favourable iff its average is", not bad, bad[0] if bad else None, "sampled",
            f"{len(sample)} gambles, {len(bad)} counterexamples")
    return rep


# --------------------------------------------------------------------------
# sequences


def sequence_space(values: Sequence[str], n: int) -> Space:
    """Ω = Xⁿ with atoms labelled by concatenated values."""
    return Space(["".join(w) for w in product(values, repeat=n)])


def index_permutation_group(values: Sequence[str], n: int) -> PermutationGroup:
    """Index permutations of length-n sequences, acting on ``sequence_space(values, n)``."""
    words = list(product(values, repeat=n))
    index = {w: i for i, w in enumerate(words)}
    gens = []
    for perm in permutations(range(n)):
        gens.append(Transformation([index[tuple(w[p] for p in perm)] for w in words]))
    return PermutationGroup(gens)
