"""Exact rational linear programming.

A small dense-tableau primal simplex over ``fractions.Fraction`` with Bland's
anti-cycling rule.  Programs are always maximisation problems; free variables
are split into nonnegative pairs before solving.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence

__all__ = [
    "Constraint",
    "LinearProgram",
    "LpInputError",
    "LpOutcome",
    "as_rational",
    "feasible",
    "solve_lp",
]

try:  # exact C rationals inside the tableau; Fractions at the interface
    from gmpy2 import mpq as _q
except ImportError:  # pragma: no cover
    _q = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
QZERO = _q(0)
QONE = _q(1)

RELATIONS = ("<=", "=", ">=")


class LpInputError(ValueError):
    """Malformed linear program (dimension mismatch, bad relation, float input)."""


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise LpInputError("booleans are not rationals")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise LpInputError(f"not a rational: {x!r}") from exc
    raise LpInputError(f"refusing non-rational value {x!r} of type {type(x).__name__}")


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    rhs: Fraction

    def __init__(self, coeffs, relation, rhs):
        if relation not in RELATIONS:
            raise LpInputError(f"unknown relation {relation!r}")
        object.__setattr__(self, "coeffs", tuple(as_rational(c) for c in coeffs))
        object.__setattr__(self, "relation", relation)
        object.__setattr__(self, "rhs", as_rational(rhs))

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = sum((c * v for c, v in zip(self.coeffs, x) if c), ZERO)
        if self.relation == "<=":
            return lhs <= self.rhs
        if self.relation == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective·x subject to constraints; ``nonneg[j]`` pins x_j >= 0."""

    objective: tuple
    constraints: tuple
    nonneg: tuple

    def __init__(self, objective, constraints=(), nonneg=None):
        obj = tuple(as_rational(c) for c in objective)
        cons = tuple(c if isinstance(c, Constraint) else Constraint(*c) for c in constraints)
        n = len(obj)
        mask = tuple(bool(b) for b in nonneg) if nonneg is not None else (True,) * n
        if len(mask) != n:
            raise LpInputError(f"nonneg mask has length {len(mask)}, expected {n}")
        for i, c in enumerate(cons):
            if len(c.coeffs) != n:
                raise LpInputError(f"constraint {i} has {len(c.coeffs)} coefficients, expected {n}")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "nonneg", mask)

    @property
    def variables(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.variables:
            return False
        if any(b and v < 0 for b, v in zip(self.nonneg, x)):
            return False
        return all(c.holds(x) for c in self.constraints)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x) if c), ZERO)


@dataclass(frozen=True)
class LpOutcome:
    status: str  # "infeasible" | "optimal" | "unbounded"
    value: Optional[Fraction] = None
    witness: Optional[tuple] = None
    ray: Optional[tuple] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"

    @property
    def is_infeasible(self) -> bool:
        return self.status == "infeasible"

    @property
    def is_unbounded(self) -> bool:
        return self.status == "unbounded"


class _Tableau:
    """Rows ``a[i]`` (last entry is the rhs) and a basis index per row.

    While a phase runs, ``z`` holds the reduced costs and is pivoted along
    with the rows.
    """

    def __init__(self, rows, basis):
        self.a = rows
        self.basis = basis
        self.z = None

    def pivot(self, r: int, c: int) -> None:
        a = self.a
        prow = a[r]
        piv = prow[c]
        if piv != QONE:
            inv = QONE / piv
            prow = [v * inv if v else v for v in prow]
            a[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(a):
            if i == r:
                continue
            k = row[c]
            if k:
                for j in nz:
                    row[j] -= k * prow[j]
        z = self.z
        if z is not None:
            k = z[c]
            if k:
                for j in nz:
                    z[j] -= k * prow[j]
        self.basis[r] = c

    def run(self, cost, allowed):
        """Maximise ``cost`` over the columns in ``allowed``; Bland's rule.

        Returns ("optimal", None) or ("unbounded", entering column).
        """
        a = self.a
        m = len(a)
        # reduced costs: cost_j - sum_i cost_basis(i) * a_ij
        z = list(cost) + [QZERO]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                for j, v in enumerate(a[i]):
                    if v:
                        z[j] -= cb * v
        self.z = z
        allowed = list(allowed)
        try:
            while True:
                entering = -1
                for j in allowed:
                    if z[j] > 0:
                        entering = j
                        break
                if entering < 0:
                    return "optimal", None
                best = None
                leave = -1
                for i in range(m):
                    aij = a[i][entering]
                    if aij > 0:
                        ratio = a[i][-1] / aij
                        if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                            best = ratio
                            leave = i
                if leave < 0:
                    return "unbounded", entering
                self.pivot(leave, entering)
        finally:
            self.z = None


def solve_lp(p: LinearProgram) -> LpOutcome:
    """Solve ``p`` exactly.  Two-phase simplex, Bland's rule throughout."""
    n = p.variables
    # column map: original var j -> list of (column, sign)
    colmap = []
    ncols = 0
    for j in range(n):
        if p.nonneg[j]:
            colmap.append(((ncols, 1),))
            ncols += 1
        else:
            colmap.append(((ncols, 1), (ncols + 1, -1)))
            ncols += 2
    nstruct = ncols

    rows = []
    slack_basis = []
    for con in p.constraints:
        row = [QZERO] * nstruct
        for j, c in enumerate(con.coeffs):
            if c:
                for col, sign in colmap[j]:
                    row[col] = _q(c) if sign > 0 else -_q(c)
        rhs = _q(con.rhs)
        slack = 0
        if con.relation == "<=":
            slack = 1
        elif con.relation == ">=":
            slack = -1
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
            slack = -slack
        rows.append((row, slack, rhs))

    m = len(rows)
    nslack = sum(1 for _, s, _ in rows if s)
    slack_cols = []
    k = nstruct
    for _, s, _ in rows:
        if s:
            slack_cols.append(k)
            k += 1
        else:
            slack_cols.append(-1)
    # artificials only for rows without a usable +1 slack
    art_rows = [i for i, (_, s, _) in enumerate(rows) if s != 1]
    nart = len(art_rows)
    total = nstruct + nslack + nart
    art_start = nstruct + nslack

    table = []
    basis = []
    art_index = {}
    for t, i in enumerate(art_rows):
        art_index[i] = art_start + t
    for i, (row, s, rhs) in enumerate(rows):
        full = row + [QZERO] * (nslack + nart) + [rhs]
        if s:
            full[slack_cols[i]] = _q(s)
        if i in art_index:
            full[art_index[i]] = QONE
            basis.append(art_index[i])
        else:
            basis.append(slack_cols[i])
        table.append(full)

    tab = _Tableau(table, basis)

    if nart:
        cost1 = [QZERO] * total
        for c in range(art_start, total):
            cost1[c] = -QONE
        tab.run(cost1, range(total))
        infeas = sum((tab.a[i][-1] for i in range(m) if tab.basis[i] >= art_start), QZERO)
        if infeas > 0:
            return LpOutcome("infeasible")
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.a):
            if tab.basis[i] >= art_start:
                row = tab.a[i]
                col = next((j for j in range(art_start) if row[j]), -1)
                if col >= 0:
                    tab.pivot(i, col)
                    i += 1
                else:
                    del tab.a[i]
                    del tab.basis[i]
            else:
                i += 1
        for row in tab.a:
            del row[art_start:total]
        total = art_start

    cost = [QZERO] * total
    for j, c in enumerate(p.objective):
        if c:
            for col, sign in colmap[j]:
                cost[col] = _q(c) if sign > 0 else -_q(c)
    status, entering = tab.run(cost, range(total))

    colval = [QZERO] * total
    for i, b in enumerate(tab.basis):
        colval[b] = tab.a[i][-1]
    x = _collapse(colval, colmap)
    if status == "unbounded":
        direction = [QZERO] * total
        direction[entering] = QONE
        for i, b in enumerate(tab.basis):
            direction[b] = -tab.a[i][entering]
        return LpOutcome("unbounded", witness=x, ray=_collapse(direction, colmap))
    return LpOutcome("optimal", value=p.value(x), witness=x)


def _collapse(colval, colmap):
    out = []
    for cols in colmap:
        v = QZERO
        for col, sign in cols:
            v += colval[col] if sign > 0 else -colval[col]
        out.append(Fraction(int(v.numerator), int(v.denominator)))
    return tuple(out)


def feasible(p: LinearProgram):
    """(True, point) if the constraint set is nonempty, else (False, None)."""
    q = LinearProgram([0] * p.variables, p.constraints, p.nonneg)
    out = solve_lp(q)
    if out.is_infeasible:
        return False, None
    return True, out.witness
