"""Recognition of upper probability measures.

A total set function v over a finite ground set equals the upper envelope
of some set of probability measures iff v(empty) = 0, v(ground) = 1, and
for every subset A the maximum of mu(A) over the polytope of probability
measures dominated by v (mu(X) <= v(X) for all X) reaches v(A).  Each
check is one exact LP; on success the per-subset optimal measures are the
witness family.  This finite decision replaces quantification over
arbitrarily large set covers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import lp
from .errors import InputError, ResourceError
from .structure import SetFunction

DEFAULT_GROUND_CAP = 12


@dataclass(frozen=True)
class EnvelopeResult:
    is_upper_probability: bool
    witness: Optional[tuple[dict, ...]] = None  # measures, element -> mass
    failing_set: Optional[frozenset] = None
    failing_reason: Optional[str] = None
    shortfall_value: Optional[Fraction] = None  # dominated max at failing set


def _dominated_system(
    v: SetFunction,
    objective_set: frozenset,
) -> lp.LinearSystem:
    ground = list(v.ground)
    n = len(ground)
    index = {g: i for i, g in enumerate(ground)}
    constraints = []
    one = [Fraction(1)] * n
    # normalization: sum mu = 1 (two weak rows)
    constraints.append((one, lp.Relation.GE, Fraction(1)))
    constraints.append(([-x for x in one], lp.Relation.GE, Fraction(-1)))
    # domination: mu(X) <= v(X) for every proper nonempty X
    for X, bound in v.values.items():
        if not X or X == frozenset(ground):
            continue
        row = [Fraction(0)] * n
        for g in X:
            row[index[g]] = Fraction(-1)
        constraints.append((row, lp.Relation.GE, -bound))
    obj = [Fraction(0)] * n
    for g in objective_set:
        obj[index[g]] = Fraction(1)
    return lp.make_system(
        ground, constraints, objective=(obj, lp.Direction.MAX), nonneg=ground
    )


def dominated_max(v: SetFunction, A) -> tuple[Fraction, dict]:
    """max mu(A) over probability measures dominated by v, with an
    optimal measure."""
    A = frozenset(A)
    if not A <= frozenset(v.ground):
        raise InputError(f"subset {sorted(A)} not within the ground set")
    outcome = lp.optimize(_dominated_system(v, A))
    if outcome.verdict is not lp.Verdict.OPTIMAL:
        raise InputError(
            "the dominated-measure polytope is empty; v admits no probability "
            "measure below it"
        )
    measure = {g: m for g, m in outcome.point.items() if m != 0}
    return outcome.value, measure


def is_upper_probability(
    v: SetFunction,
    ground_cap: int = DEFAULT_GROUND_CAP,
) -> EnvelopeResult:
    """Decide whether v is the upper envelope of some measure set.

    YES comes with witness measures realizing v exactly; NO names a
    specific failing subset (or the normalization failure).
    """
    if len(v.ground) > ground_cap:
        raise ResourceError(
            f"{len(v.ground)} ground elements exceed the cap {ground_cap}"
        )
    empty, full = frozenset(), frozenset(v.ground)
    if v(empty) != 0:
        return EnvelopeResult(False, failing_set=empty,
                              failing_reason="v(empty) != 0")
    if v(full) != 1:
        return EnvelopeResult(False, failing_set=full,
                              failing_reason="v(ground) != 1")
    witnesses: list[dict] = []
    seen: set[tuple] = set()
    for A in v.subsets():
        if not A:
            continue
        try:
            best, measure = dominated_max(v, A)
        except InputError:
            return EnvelopeResult(
                False, failing_set=full,
                failing_reason="no probability measure is dominated by v",
            )
        if best < v(A):
            return EnvelopeResult(
                False,
                failing_set=A,
                failing_reason=f"dominated max {best} < v(A) = {v(A)}",
                shortfall_value=best,
            )
        key = tuple(sorted(measure.items()))
        if key not in seen:
            seen.add(key)
            witnesses.append(measure)
    return EnvelopeResult(True, witness=tuple(witnesses))
