"""Abstract syntax for propositional and likelihood formulas.

Propositional formulas are trees over primitive propositions, the constants
true/false, negation, conjunction and disjunction.  Likelihood formulas are
boolean combinations of basic constraints ``t R b`` where ``t`` is a linear
combination of likelihood terms ``l(phi)`` with exact rational coefficients.

Implication is desugared into ``!a | b`` at construction time, so the AST
core has no implication node.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import InputError, ResourceError

Rational = Union[Fraction, int]

DEFAULT_ATOM_CAP = 16


def atom_cap(default: int = DEFAULT_ATOM_CAP) -> int:
    """Max number of distinct propositions allowed in atom enumeration.

    Overridable via the UPLOGIC_ATOM_CAP environment variable.
    """
    raw = os.environ.get("UPLOGIC_ATOM_CAP")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"UPLOGIC_ATOM_CAP is not an integer: {raw!r}")


# ---------------------------------------------------------------------------
# Propositional formulas


class PropFormula:
    """Base class; subclasses are frozen dataclasses and hashable."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Prop(PropFormula):
    name: str

    def __post_init__(self):
        if not self.name:
            raise InputError("proposition name must be non-empty")


@dataclass(frozen=True, slots=True)
class Const(PropFormula):
    value: bool


@dataclass(frozen=True, slots=True)
class Not(PropFormula):
    sub: PropFormula


@dataclass(frozen=True, slots=True)
class And(PropFormula):
    left: PropFormula
    right: PropFormula


@dataclass(frozen=True, slots=True)
class Or(PropFormula):
    left: PropFormula
    right: PropFormula


TRUE = Const(True)
FALSE = Const(False)


def implies(a: PropFormula, b: PropFormula) -> PropFormula:
    return Or(Not(a), b)


def iff(a: PropFormula, b: PropFormula) -> PropFormula:
    return And(implies(a, b), implies(b, a))


def conj_all(parts: Sequence[PropFormula]) -> PropFormula:
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj_all(parts: Sequence[PropFormula]) -> PropFormula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def props_of(phi: PropFormula) -> list[str]:
    """Sorted list of the primitive proposition names occurring in phi."""
    seen: set[str] = set()

    def walk(f: PropFormula) -> None:
        if isinstance(f, Prop):
            seen.add(f.name)
        elif isinstance(f, Not):
            walk(f.sub)
        elif isinstance(f, (And, Or)):
            walk(f.left)
            walk(f.right)

    walk(phi)
    return sorted(seen)


def holds(phi: PropFormula, assignment: Mapping[str, bool], *, strict: bool = False) -> bool:
    """Truth of phi under a world's assignment.

    Propositions missing from the assignment are false unless strict, in
    which case they raise InputError.
    """
    if isinstance(phi, Prop):
        if phi.name in assignment:
            return assignment[phi.name]
        if strict:
            raise InputError(f"unknown proposition: {phi.name}")
        return False
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Not):
        return not holds(phi.sub, assignment, strict=strict)
    if isinstance(phi, And):
        return holds(phi.left, assignment, strict=strict) and holds(phi.right, assignment, strict=strict)
    if isinstance(phi, Or):
        return holds(phi.left, assignment, strict=strict) or holds(phi.right, assignment, strict=strict)
    raise InputError(f"not a propositional formula: {phi!r}")


# ---------------------------------------------------------------------------
# Atoms


@dataclass(frozen=True, slots=True)
class Atom:
    """One complete conjunction q1 & ... & qN with qi in {pi, !pi}."""

    props: tuple[str, ...]
    signs: tuple[bool, ...]

    def __post_init__(self):
        if len(self.props) != len(self.signs):
            raise InputError("props and signs length mismatch")

    def assignment(self) -> dict[str, bool]:
        return dict(zip(self.props, self.signs))

    def as_formula(self) -> PropFormula:
        lits = [Prop(p) if s else Not(Prop(p)) for p, s in zip(self.props, self.signs)]
        return conj_all(lits)


def atoms_of(props: Sequence[str]) -> list[Atom]:
    """All 2^N atoms over props, in lexicographic sign order (False first)."""
    if not props:
        raise InputError("props must be non-empty")
    if len(set(props)) != len(props):
        raise InputError("duplicate proposition name")
    if len(props) > atom_cap():
        raise ResourceError(f"{len(props)} propositions exceed the atom cap {atom_cap()}")
    ps = tuple(props)
    return [Atom(ps, signs) for signs in itertools.product((False, True), repeat=len(ps))]


def atom_set(phi: PropFormula, props: Sequence[str]) -> frozenset[Atom]:
    """The atoms over props whose assignment makes phi true."""
    missing = [p for p in props_of(phi) if p not in props]
    if missing:
        raise InputError(f"unknown proposition(s): {', '.join(missing)}")
    return frozenset(a for a in atoms_of(props) if holds(phi, a.assignment()))


def is_tautology(phi: PropFormula) -> bool:
    ps = props_of(phi)
    if not ps:
        return holds(phi, {})
    return all(holds(phi, a.assignment()) for a in atoms_of(ps))


# ---------------------------------------------------------------------------
# Likelihood formulas


class Rel(Enum):
    GE = ">="
    GT = ">"
    LE = "<="
    LT = "<"
    EQ = "="


@dataclass(frozen=True, slots=True)
class Term:
    """Linear combination sum_i coeff_i * l(arg_i), length >= 1."""

    parts: tuple[tuple[Fraction, PropFormula], ...]

    def __post_init__(self):
        if not self.parts:
            raise InputError("term must have at least one addend")
        object.__setattr__(
            self, "parts", tuple((Fraction(c), a) for c, a in self.parts)
        )

    def negated(self) -> "Term":
        return Term(tuple((-c, a) for c, a in self.parts))

    def args(self) -> list[PropFormula]:
        return [a for _, a in self.parts]


def term(*parts: tuple[Rational, PropFormula]) -> Term:
    return Term(tuple((Fraction(c), a) for c, a in parts))


class LikelihoodFormula:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Basic(LikelihoodFormula):
    term: Term
    rel: Rel
    bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "bound", Fraction(self.bound))


@dataclass(frozen=True, slots=True)
class LNot(LikelihoodFormula):
    sub: LikelihoodFormula


@dataclass(frozen=True, slots=True)
class LAnd(LikelihoodFormula):
    left: LikelihoodFormula
    right: LikelihoodFormula


@dataclass(frozen=True, slots=True)
class LOr(LikelihoodFormula):
    left: LikelihoodFormula
    right: LikelihoodFormula


def lconj_all(parts: Sequence[LikelihoodFormula]) -> LikelihoodFormula:
    if not parts:
        raise InputError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = LAnd(out, p)
    return out


def ldisj_all(parts: Sequence[LikelihoodFormula]) -> LikelihoodFormula:
    if not parts:
        raise InputError("empty disjunction")
    out = parts[0]
    for p in parts[1:]:
        out = LOr(out, p)
    return out


def likelihood_args(f: LikelihoodFormula) -> list[PropFormula]:
    """All propositional arguments appearing under l(.) in f, in order."""
    out: list[PropFormula] = []

    def walk(g: LikelihoodFormula) -> None:
        if isinstance(g, Basic):
            out.extend(g.term.args())
        elif isinstance(g, LNot):
            walk(g.sub)
        elif isinstance(g, (LAnd, LOr)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return out


def likelihood_props(f: LikelihoodFormula) -> list[str]:
    seen: set[str] = set()
    for arg in likelihood_args(f):
        seen.update(props_of(arg))
    return sorted(seen)


def normalize(f: LikelihoodFormula) -> LikelihoodFormula:
    """Equivalent formula using only >= and > in Basics and no negations.

    t = a   becomes  (t >= a) & (-t >= -a)
    t <= a  becomes  -t >= -a
    t < a   becomes  -t > -a
    !(t >= a) becomes -t > -a, and dually for the other relations.
    """

    def go(g: LikelihoodFormula, neg: bool) -> LikelihoodFormula:
        if isinstance(g, LNot):
            return go(g.sub, not neg)
        if isinstance(g, LAnd):
            l, r = go(g.left, neg), go(g.right, neg)
            return LOr(l, r) if neg else LAnd(l, r)
        if isinstance(g, LOr):
            l, r = go(g.left, neg), go(g.right, neg)
            return LAnd(l, r) if neg else LOr(l, r)
        if isinstance(g, Basic):
            t, b = g.term, g.bound
            rel = g.rel
            if rel is Rel.LE:
                t, b, rel = t.negated(), -b, Rel.GE
            elif rel is Rel.LT:
                t, b, rel = t.negated(), -b, Rel.GT
            if rel is Rel.EQ:
                both = LAnd(Basic(t, Rel.GE, b), Basic(t.negated(), Rel.GE, -b))
                return go(both, neg)
            if not neg:
                return Basic(t, rel, b)
            # !(t >= b) == -t > -b ; !(t > b) == -t >= -b
            flipped = Rel.GT if rel is Rel.GE else Rel.GE
            return Basic(t.negated(), flipped, -b)
        raise InputError(f"not a likelihood formula: {g!r}")

    return go(f, False)


def dnf(f: LikelihoodFormula) -> list[list[Basic]]:
    """Disjunctive normal form over Basic literals.

    Requires f normalized (no LNot nodes); Basics are treated as opaque.
    """
    if isinstance(f, Basic):
        return [[f]]
    if isinstance(f, LOr):
        return dnf(f.left) + dnf(f.right)
    if isinstance(f, LAnd):
        return [l + r for l in dnf(f.left) for r in dnf(f.right)]
    if isinstance(f, LNot):
        raise InputError("dnf requires a normalized formula (no negations)")
    raise InputError(f"not a likelihood formula: {f!r}")


# ---------------------------------------------------------------------------
# Canonical token stream (shared by the printer and the size measure)

_PROP_LEVEL = {Or: 1, And: 2, Not: 3, Prop: 4, Const: 4}
_LIKE_LEVEL = {LOr: 1, LAnd: 2, LNot: 3, Basic: 4}


def _prop_tokens(phi: PropFormula, need: int) -> Iterator[str]:
    level = _PROP_LEVEL[type(phi)]
    parens = level < need
    if parens:
        yield "("
    if isinstance(phi, Prop):
        yield phi.name
    elif isinstance(phi, Const):
        yield "true" if phi.value else "false"
    elif isinstance(phi, Not):
        yield "!"
        yield from _prop_tokens(phi.sub, 3)
    elif isinstance(phi, And):
        yield from _prop_tokens(phi.left, 2)
        yield "&"
        yield from _prop_tokens(phi.right, 3)
    elif isinstance(phi, Or):
        yield from _prop_tokens(phi.left, 1)
        yield "|"
        yield from _prop_tokens(phi.right, 2)
    if parens:
        yield ")"


def _rat_token(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _term_tokens(t: Term) -> Iterator[str]:
    for i, (coeff, arg) in enumerate(t.parts):
        if i == 0:
            if coeff < 0:
                yield "u-"
        else:
            yield "-" if coeff < 0 else "+"
        mag = abs(coeff)
        if mag != 1:
            yield _rat_token(mag)
        yield "l"
        yield "("
        yield from _prop_tokens(arg, 0)
        yield ")"


def _lform_tokens(f: LikelihoodFormula, need: int) -> Iterator[str]:
    level = _LIKE_LEVEL[type(f)]
    parens = level < need
    if parens:
        yield "("
    if isinstance(f, Basic):
        yield from _term_tokens(f.term)
        yield f.rel.value
        yield _rat_token(f.bound)
    elif isinstance(f, LNot):
        yield "~"
        yield from _lform_tokens(f.sub, 3)
    elif isinstance(f, LAnd):
        yield from _lform_tokens(f.left, 2)
        yield "&"
        yield from _lform_tokens(f.right, 3)
    elif isinstance(f, LOr):
        yield from _lform_tokens(f.left, 1)
        yield "|"
        yield from _lform_tokens(f.right, 2)
    if parens:
        yield ")"


def canonical_tokens(f: Union[PropFormula, LikelihoodFormula]) -> list[str]:
    if isinstance(f, PropFormula):
        return list(_prop_tokens(f, 0))
    return list(_lform_tokens(f, 0))


def size(f: Union[PropFormula, LikelihoodFormula]) -> int:
    """Symbol count of the canonical written form of f.

    Convention: every written token counts as one symbol, including
    parentheses; a rational coefficient or bound is a single symbol.
    """
    return len(canonical_tokens(f))
