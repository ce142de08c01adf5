"""Gamble relations induced by a model: f ⪰ g iff f−g ∈ M⪰, f ≺ g iff f−g ∈ M≺."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .core import Gamble
from .report import Report

__all__ = ["RelationVerdict", "check_monotonicity", "default_sample", "relate", "verify_relation_axioms"]


@dataclass(frozen=True)
class RelationVerdict:
    accept_exchange: bool  # f ⪰ g
    unpreferred: bool  # f ≺ g
    indifferent: bool  # f ≃ g
    preferred: bool  # f ≻ g
    uncomparable: bool  # f ∥ g


class _Oracle:
    """Memoised membership of differences in a model."""

    def __init__(self, m):
        self.m = m
        self.cache = {}

    def status(self, d: Gamble):
        s = self.cache.get(d)
        if s is None:
            s = (self.m.accepts(d), self.m.rejects(d))
            self.cache[d] = s
        return s

    def acc(self, f, g):
        return self.status(f - g)[0]

    def rej(self, f, g):
        return self.status(f - g)[1]

    def verdict(self, f, g) -> RelationVerdict:
        a, r = self.status(f - g)
        na, nr = self.status(g - f)
        return RelationVerdict(a, r, a and na, a and nr, not a and not na)


def relate(m, f: Gamble, g: Gamble) -> RelationVerdict:
    return _Oracle(m).verdict(f, g)


def default_sample(m, extra: Sequence[Gamble] = ()) -> list:
    """Model generators, their negations and pairwise sums, then ``extra``."""
    gens = list(getattr(m, "accepted_gens", ())) + list(getattr(m, "rejected_gens", ()))
    out = []
    for g in gens:
        out += [g, -g]
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            out.append(g + h)
    out += list(extra)
    seen, uniq = set(), []
    for g in out:
        if g not in seen:
            seen.add(g)
            uniq.append(g)
    return uniq


def verify_relation_axioms(m, sample: Sequence[Gamble], mixtures: Sequence = (Fraction(1, 2), Fraction(1))) -> Report:
    """AD1–AD6 and the derived preference properties over all pairs/triples of ``sample``."""
    o = _Oracle(m)
    rep = Report("relation axioms")
    mus = [Fraction(x) for x in mixtures]
    if any(not (0 < mu <= 1) for mu in mus):
        raise ValueError("mixture coefficients must lie in (0, 1]")
    fails = {}

    def fail(name, witness):
        fails.setdefault(name, witness)

    n = len(sample)
    acc = [[False] * n for _ in range(n)]
    rej = [[False] * n for _ in range(n)]
    for i, f in enumerate(sample):
        for j, g in enumerate(sample):
            acc[i][j], rej[i][j] = o.status(f - g)
    fv = [[acc[i][j] and rej[j][i] for j in range(n)] for i in range(n)]
    zero = sample[0].space.zero() if n else None
    space = sample[0].space if n else None
    diff = [[tuple(a - b for a, b in zip(f.values, g.values)) for g in sample] for f in sample]

    for i, f in enumerate(sample):
        if not acc[i][i]:
            fail("AD1 accept reflexivity", (f,))
        if rej[i][i]:
            fail("AD2 reject irreflexivity", (f,))
        if fv[i][i]:
            fail("favour irreflexivity", (f,))
    for i, j in product(range(n), repeat=2):
        v = o.verdict(sample[i], sample[j])
        if v.preferred and not v.accept_exchange:
            fail("weakening", (sample[i], sample[j]))
        if v != o.verdict(sample[i] - sample[j], zero):
            fail("cancellation", (sample[i], sample[j]))
        for mu in mus:
            # (μf + (1−μ)h) − (μg + (1−μ)h) is exactly μ(f − g)
            d = tuple(mu * x for x in diff[i][j])
            ma, mr = o.status(Gamble.raw(space, d))
            _, nr = o.status(Gamble.raw(space, tuple(-x for x in d)))
            if acc[i][j] != ma:
                fail("AD5 accept mixture independence", (sample[i], sample[j], sample[0], mu))
            if rej[i][j] != mr:
                fail("AD6 reject mixture independence", (sample[i], sample[j], sample[0], mu))
            # the reversed mixture difference is −d
            if fv[i][j] != (ma and nr):
                fail("favour mixture independence", (sample[i], sample[j], sample[0], mu))
    for i, j, k in product(range(n), repeat=3):
        f, g, h = sample[i], sample[j], sample[k]
        if acc[i][j] and acc[j][k] and not acc[i][k]:
            fail("AD3 accept transitivity", (f, g, h))
        if rej[i][j] and acc[k][j] and not rej[i][k]:
            fail("AD4 mixed transitivity", (f, g, h))
        if fv[i][j] and fv[j][k] and not fv[i][k]:
            fail("favour transitivity", (f, g, h))
        if fv[i][j] and acc[j][k] and not fv[i][k]:
            fail("favour mixed transitivity", (f, g, h))
    names = [
        "AD1 accept reflexivity", "AD2 reject irreflexivity", "AD3 accept transitivity",
        "AD4 mixed transitivity", "AD5 accept mixture independence", "AD6 reject mixture independence",
        "weakening", "favour irreflexivity", "favour transitivity", "favour mixed transitivity",
        "favour mixture independence", "cancellation",
    ]
    for n in names:
        rep.add(n, n not in fails, fails.get(n), "sampled")
    return rep


def check_monotonicity(m, s, sample: Sequence[Gamble]) -> Report:
    """f ⊵ g ⇒ f ⪰ g and f ◁ g ⇒ f ≺ g, with ⊵ and ◁ read off the background."""
    o = _Oracle(m)
    bg = _Oracle(s)
    rep = Report("monotonicity")
    acc_fail = rej_fail = None
    for f, g in product(sample, repeat=2):
        a, r = bg.status(f - g)
        if a and not o.acc(f, g) and acc_fail is None:
            acc_fail = (f, g)
        if r and not o.rej(f, g) and rej_fail is None:
            rej_fail = (f, g)
    rep.add("accept monotonicity", acc_fail is None, acc_fail, "sampled")
    rep.add("reject monotonicity", rej_fail is None, rej_fail, "sampled")
    return rep
