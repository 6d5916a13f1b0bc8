"""Exact rational linear constraint solving.

Systems mix weak (>=) and strict (>) inequalities over named real
variables.  Feasibility and optimization are decided exactly: a two-phase
tableau simplex over rationals (gmpy2.mpq when available, Fraction
otherwise), Dantzig pivoting with a switch to Bland's rule to guarantee
termination.

Strict inequalities are honored by the slack method: each row c.x > b is
rewritten as c.x - delta >= b for a single fresh delta >= 0, delta <= 1,
and delta is maximized; the original system is strictly feasible iff the
optimum has delta > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError, InternalCheckError

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

_ZERO = _Q(0)
_ONE = _Q(1)


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class Relation(Enum):
    GE = ">="
    GT = ">"


class Direction(Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: Relation
    bound: Fraction


@dataclass(frozen=True)
class LinearSystem:
    """Constraints c.x >= b or c.x > b over the named variables.

    Variables listed in `nonneg` carry an implicit x >= 0 and are handled
    natively by the simplex (no free-variable split); all others are free.
    """

    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    objective: Optional[tuple[tuple[Fraction, ...], Direction]] = None
    nonneg: frozenset = frozenset()

    def __post_init__(self):
        if not self.variables:
            raise InputError("system must have at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise InputError("duplicate variable name")
        n = len(self.variables)
        for c in self.constraints:
            if len(c.coeffs) != n:
                raise InputError("constraint width does not match variable count")
        if self.objective is not None and len(self.objective[0]) != n:
            raise InputError("objective width does not match variable count")
        unknown = self.nonneg - set(self.variables)
        if unknown:
            raise InputError(f"nonneg names unknown variables: {sorted(unknown)}")


class Verdict(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPOutcome:
    verdict: Verdict
    point: Optional[dict] = None
    value: Optional[Fraction] = None
    attained: bool = True
    direction: Optional[dict] = None  # improving ray, when UNBOUNDED


def make_system(
    variables: Sequence[str],
    constraints: Sequence[tuple[Sequence[Fraction], Relation, Fraction]],
    objective: Optional[tuple[Sequence[Fraction], Direction]] = None,
    nonneg: Sequence[str] = (),
) -> LinearSystem:
    return LinearSystem(
        variables=tuple(variables),
        constraints=tuple(
            Constraint(tuple(Fraction(x) for x in co), rel, Fraction(b))
            for co, rel, b in constraints
        ),
        objective=None
        if objective is None
        else (tuple(Fraction(x) for x in objective[0]), objective[1]),
        nonneg=frozenset(nonneg),
    )


# ---------------------------------------------------------------------------
# Core simplex on internal nonnegative variables.
#
# Internal problem: maximize c.x subject to rows (a, rel, b) with
# rel in {"<=", ">=", "="}, x >= 0.


class _Simplex:
    def __init__(self, n: int, rows: list[tuple[list, str, object]], c: list):
        # Normalize rows to rhs >= 0, assign slack/surplus/artificial columns.
        self.n_struct = n
        body: list[list] = []
        rhs: list = []
        kinds: list[str] = []
        for a, rel, b in rows:
            a = list(a)
            if b < 0:
                a = [-x for x in a]
                b = -b
                rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
            body.append(a)
            rhs.append(b)
            kinds.append(rel)
        m = len(body)
        self.m = m
        n_slack = sum(1 for k in kinds if k != "=")
        self.ncols = n + n_slack
        art_cols: list[int] = []
        basis: list[int] = []
        T: list[list] = []
        slack_at = n
        art_at = self.ncols
        n_art = sum(1 for k in kinds if k != "<=")
        total = self.ncols + n_art
        for i in range(m):
            row = [_ZERO] * (total + 1)
            for j, x in enumerate(body[i]):
                row[j] = _Q(x)
            if kinds[i] == "<=":
                row[slack_at] = _ONE
                basis.append(slack_at)
                slack_at += 1
            elif kinds[i] == ">=":
                row[slack_at] = -_ONE
                slack_at += 1
                row[art_at] = _ONE
                basis.append(art_at)
                art_cols.append(art_at)
                art_at += 1
            else:
                row[art_at] = _ONE
                basis.append(art_at)
                art_cols.append(art_at)
                art_at += 1
            row[-1] = _Q(rhs[i])
            T.append(row)
        self.T = T
        self.basis = basis
        self.art_cols = set(art_cols)
        self.total = total
        self.c = [_Q(x) for x in c] + [_ZERO] * (total - n)

    def _reduced_costs(self, c: list) -> list:
        # z_j - c_j style: cost row = c_j - sum over basic rows
        T, basis = self.T, self.basis
        costs = list(c) + [_ZERO]
        for i, b in enumerate(basis):
            cb = c[b]
            if cb != 0:
                row = T[i]
                for j in range(self.total + 1):
                    if row[j] != 0:
                        costs[j] -= cb * row[j]
        return costs

    def _pivot(self, r: int, e: int) -> None:
        T = self.T
        prow = T[r]
        piv = prow[e]
        if piv != 1:
            inv = _ONE / piv
            T[r] = prow = [x * inv for x in prow]
        for i in range(self.m):
            if i == r:
                continue
            row = T[i]
            f = row[e]
            if f != 0:
                T[i] = [x - f * y for x, y in zip(row, prow)]
        self.basis[r] = e

    def _run(self, c: list, banned: set) -> str:
        """Maximize c over current tableau.  Returns 'optimal' or 'unbounded'."""
        costs = self._reduced_costs(c)
        iters = 0
        bland_after = 20 * (self.m + self.total + 10)
        while True:
            iters += 1
            bland = iters > bland_after
            e = -1
            best = _ZERO
            for j in range(self.total):
                if j in banned:
                    continue
                cj = costs[j]
                if cj > 0:
                    if bland:
                        e = j
                        break
                    if cj > best:
                        best = cj
                        e = j
            if e < 0:
                return "optimal"
            # ratio test
            r = -1
            best_ratio = None
            for i in range(self.m):
                a = self.T[i][e]
                if a > 0:
                    ratio = self.T[i][-1] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[r])
                    ):
                        best_ratio = ratio
                        r = i
            if r < 0:
                self._unbounded_col = e
                return "unbounded"
            self._pivot(r, e)
            # incremental cost-row update
            ce = costs[e]
            prow = self.T[r]
            costs = [x - ce * y for x, y in zip(costs, prow + [])]
            costs[e] = _ZERO

    def solve(self) -> tuple[str, Optional[object], Optional[list]]:
        """Two phases.  Returns (status, value, point) with point over
        structural columns; status in {'optimal', 'unbounded', 'infeasible'}."""
        if self.art_cols:
            phase1 = [_ZERO] * self.total
            for j in self.art_cols:
                phase1[j] = -_ONE
            status = self._run(phase1, banned=set())
            if status != "optimal":
                raise InternalCheckError("phase 1 cannot be unbounded")
            resid = sum(
                (self.T[i][-1] for i in range(self.m) if self.basis[i] in self.art_cols),
                _ZERO,
            )
            if resid != 0:
                return ("infeasible", None, None)
            self._evict_artificials()
        status = self._run(self.c, banned=self.art_cols)
        point = self._point()
        if status == "unbounded":
            return ("unbounded", None, point)
        value = sum(
            (self.c[j] * x for j, x in enumerate(point) if x != 0), _ZERO
        )
        return ("optimal", value, point)

    def _evict_artificials(self) -> None:
        drop: list[int] = []
        for i in range(self.m):
            if self.basis[i] in self.art_cols:
                row = self.T[i]
                e = next(
                    (j for j in range(self.total) if j not in self.art_cols and row[j] != 0),
                    -1,
                )
                if e >= 0:
                    self._pivot(i, e)
                else:
                    drop.append(i)  # redundant row
        for i in reversed(drop):
            del self.T[i]
            del self.basis[i]
            self.m -= 1

    def _point(self) -> list:
        x = [_ZERO] * self.total
        for i, b in enumerate(self.basis):
            x[b] = self.T[i][-1]
        return x[: self.n_struct]

    def ray(self) -> list:
        """Improving direction over structural columns after 'unbounded'."""
        e = self._unbounded_col
        d = [_ZERO] * self.total
        d[e] = _ONE
        for i, b in enumerate(self.basis):
            d[b] = -self.T[i][e]
        return d[: self.n_struct]


# ---------------------------------------------------------------------------
# Translation between LinearSystem and the internal nonnegative form.


class _Encoding:
    """Maps named (possibly free) variables to internal nonnegative columns."""

    def __init__(self, sys: LinearSystem, extra_delta: bool):
        self.sys = sys
        self.cols: dict[str, tuple[int, Optional[int]]] = {}
        n = 0
        for v in sys.variables:
            if v in sys.nonneg:
                self.cols[v] = (n, None)
                n += 1
            else:
                self.cols[v] = (n, n + 1)
                n += 2
        self.delta_col = None
        if extra_delta:
            self.delta_col = n
            n += 1
        self.n = n

    def row(self, coeffs: Sequence[Fraction], delta_coeff: Fraction = Fraction(0)) -> list:
        out = [Fraction(0)] * self.n
        for v, x in zip(self.sys.variables, coeffs):
            if x == 0:
                continue
            pos, neg = self.cols[v]
            out[pos] = x
            if neg is not None:
                out[neg] = -x
        if self.delta_col is not None:
            out[self.delta_col] = delta_coeff
        return out

    def decode(self, internal: list) -> dict:
        point = {}
        for v in self.sys.variables:
            pos, neg = self.cols[v]
            val = _to_fraction(internal[pos])
            if neg is not None:
                val -= _to_fraction(internal[neg])
            point[v] = val
        return point


def _check_point(sys: LinearSystem, point: dict) -> None:
    for c in sys.constraints:
        lhs = sum(
            (x * point[v] for x, v in zip(c.coeffs, sys.variables) if x != 0),
            Fraction(0),
        )
        ok = lhs >= c.bound if c.rel is Relation.GE else lhs > c.bound
        if not ok:
            raise InternalCheckError(
                f"solver returned a point violating {c.coeffs} {c.rel.value} {c.bound}"
            )
    for v in sys.nonneg:
        if point[v] < 0:
            raise InternalCheckError(f"solver returned negative {v}")


def _solve_weak_max(
    sys: LinearSystem,
    objective: Sequence[Fraction],
    *,
    strict_as_weak: bool = True,
) -> tuple[str, Optional[Fraction], Optional[dict], Optional[dict]]:
    """Maximize objective over the weak relaxation of sys.

    Returns (status, value, point, ray)."""
    enc = _Encoding(sys, extra_delta=False)
    rows = [(enc.row(c.coeffs), ">=", c.bound) for c in sys.constraints]
    sx = _Simplex(enc.n, rows, enc.row(objective))
    status, value, point = sx.solve()
    if status == "infeasible":
        return ("infeasible", None, None, None)
    if status == "unbounded":
        return ("unbounded", None, None, enc.decode(sx.ray()))
    return ("optimal", _to_fraction(value), enc.decode(point), None)


def _strict_feasible(sys: LinearSystem) -> tuple[str, Optional[dict]]:
    """Decide feasibility of sys honoring strictness.

    Returns ('feasible', point) or ('infeasible', None)."""
    enc = _Encoding(sys, extra_delta=True)
    rows = []
    for c in sys.constraints:
        delta = Fraction(-1) if c.rel is Relation.GT else Fraction(0)
        rows.append((enc.row(c.coeffs, delta), ">=", c.bound))
    # 0 <= delta <= 1; maximize delta
    zero = [Fraction(0)] * len(sys.variables)
    rows.append((enc.row(zero, Fraction(-1)), ">=", Fraction(-1)))
    objective = enc.row(zero, Fraction(1))
    sx = _Simplex(enc.n, rows, objective)
    status, value, internal = sx.solve()
    if status == "infeasible":
        return ("infeasible", None)
    if status == "unbounded":
        raise InternalCheckError("delta objective is bounded by construction")
    has_strict = any(c.rel is Relation.GT for c in sys.constraints)
    if has_strict and value == 0:
        return ("infeasible", None)
    point = enc.decode(internal)
    _check_point(sys, point)
    return ("feasible", point)


def feasible(sys: LinearSystem) -> LPOutcome:
    """Exact feasibility of sys, strict rows honored strictly."""
    if sys.objective is not None:
        raise InputError("feasible() takes a system without an objective")
    status, point = _strict_feasible(sys)
    if status == "infeasible":
        return LPOutcome(Verdict.INFEASIBLE)
    return LPOutcome(Verdict.FEASIBLE, point=point)


def optimize(sys: LinearSystem) -> LPOutcome:
    """Exact optimum of the objective over the closure of the feasible set.

    attained=False marks an optimum approached only in the limit of the
    strict constraints (the point is then omitted).  INFEASIBLE when the
    system, with strictness honored, has no solution.
    """
    if sys.objective is None:
        raise InputError("optimize() requires an objective")
    coeffs, direction = sys.objective
    has_strict = any(c.rel is Relation.GT for c in sys.constraints)
    if has_strict:
        status, _ = _strict_feasible(sys)
        if status == "infeasible":
            return LPOutcome(Verdict.INFEASIBLE)
    sign = Fraction(1) if direction is Direction.MAX else Fraction(-1)
    status, value, point, ray = _solve_weak_max(sys, [sign * x for x in coeffs])
    if status == "infeasible":
        return LPOutcome(Verdict.INFEASIBLE)
    if status == "unbounded":
        return LPOutcome(Verdict.UNBOUNDED, direction=ray)
    value = sign * value
    if not has_strict:
        _check_point(sys, point)
        return LPOutcome(Verdict.OPTIMAL, point=point, value=value, attained=True)
    # Does some strictly feasible point attain the closure optimum?
    pinned = LinearSystem(
        variables=sys.variables,
        constraints=sys.constraints
        + (
            Constraint(tuple(coeffs), Relation.GE, value),
            Constraint(tuple(-x for x in coeffs), Relation.GE, -value),
        ),
        nonneg=sys.nonneg,
    )
    status, witness = _strict_feasible(pinned)
    if status == "feasible":
        return LPOutcome(Verdict.OPTIMAL, point=witness, value=value, attained=True)
    return LPOutcome(Verdict.OPTIMAL, point=None, value=value, attained=False)
