"""Decision procedures: satisfiability, validity, and tightest bounds.

The reduction: normalize, take the DNF over basic constraints, and solve
one exact LP per disjunct.  Worlds are the atoms over the formula's
propositions.  Per disjunct, each distinct propositional argument phi_i
gets its own candidate measure (variables x[i][world] >= 0 summing to 1);
dominance rows force measure i to attain the maximum over all measures on
phi_i's extension, so the value of l(phi_i) is an honest upper
probability.  A designated witness measure per argument loses no
generality: restricting a satisfying measure set to one maximizer per
argument preserves every argument's upper probability.

Atoms sharing a membership signature across all arguments are
interchangeable, so the LP merges them into one column per signature
class; any mass found is placed on a representative atom.  Every SAT
answer is re-checked by the model checker before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import lp
from .errors import InputError, InternalCheckError, ResourceError, UplogicError
from .formula import (
    Basic,
    LNot,
    LikelihoodFormula,
    Rel,
    Term,
    atom_cap,
    atoms_of,
    dnf,
    holds,
    likelihood_props,
    normalize,
    props_of,
)
from .semantics import evaluate
from .structure import UpperProbStructure

DEFAULT_PROP_CAP = 12


class UnsatInputError(UplogicError):
    """Raised when bounds are requested for an unsatisfiable formula."""


class SatVerdict(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass(frozen=True)
class SatResult:
    verdict: SatVerdict
    model: Optional[UpperProbStructure] = None
    stats: Optional[dict] = None


@dataclass(frozen=True)
class ValidityResult:
    valid: bool
    countermodel: Optional[UpperProbStructure] = None


@dataclass(frozen=True)
class BoundsResult:
    lower: Fraction
    lower_attained: bool
    upper: Fraction
    upper_attained: bool
    provenance: tuple[dict, ...] = ()  # one entry per satisfiable disjunct


class _Worlds:
    """The atom worlds of a formula's proposition set."""

    def __init__(self, props: Sequence[str]):
        self.props = tuple(props)
        if props:
            self.atoms = atoms_of(props)
            self.ids = tuple(
                "w" + "".join("1" if s else "0" for s in a.signs) for a in self.atoms
            )
            self.assignments = [a.assignment() for a in self.atoms]
        else:
            self.ids = ("w0",)
            self.assignments = [{}]

    def extension_mask(self, phi) -> int:
        mask = 0
        for i, assign in enumerate(self.assignments):
            if holds(phi, assign):
                mask |= 1 << i
        return mask


class _DisjunctLP:
    """Witness LP for one conjunction of normalized basic constraints."""

    def __init__(self, worlds: _Worlds, basics: Sequence[Basic], extra_args=()):
        self.worlds = worlds
        mask_of: dict[int, int] = {}  # extension mask -> measure index
        self._arg_cache: dict = {}

        def measure_index(phi) -> int:
            key = phi
            if key not in self._arg_cache:
                mask = worlds.extension_mask(phi)
                if mask not in mask_of:
                    mask_of[mask] = len(mask_of)
                self._arg_cache[key] = mask_of[mask]
            return self._arg_cache[key]

        rows: list[tuple[list, lp.Relation, Fraction]] = []
        basic_terms: list[tuple[dict, lp.Relation, Fraction]] = []
        for b in basics:
            by_measure: dict[int, Fraction] = {}
            for coeff, phi in b.term.parts:
                t = measure_index(phi)
                by_measure[t] = by_measure.get(t, Fraction(0)) + coeff
            rel = lp.Relation.GT if b.rel is Rel.GT else lp.Relation.GE
            basic_terms.append((by_measure, rel, b.bound))
        for coeff, phi in extra_args:
            measure_index(phi)

        self.masks = [m for m, _ in sorted(mask_of.items(), key=lambda kv: kv[1])]
        self.T = len(self.masks)
        # merge worlds by membership signature across all argument extensions
        sig_of: dict[tuple, int] = {}
        self.class_rep: list[int] = []
        self.world_class: list[int] = []
        for w in range(len(worlds.ids)):
            sig = tuple((m >> w) & 1 for m in self.masks)
            if sig not in sig_of:
                sig_of[sig] = len(self.class_rep)
                self.class_rep.append(w)
            self.world_class.append(sig_of[sig])
        self.sigs = sorted(sig_of, key=sig_of.get)
        C = len(self.class_rep)

        self.variables = [f"x_{i}_{c}" for i in range(self.T) for c in range(C)]
        var_index = {v: k for k, v in enumerate(self.variables)}
        nvars = len(self.variables)

        def col(i: int, c: int) -> int:
            return i * C + c

        def zero_row() -> list:
            return [Fraction(0)] * nvars

        # each measure sums to 1
        for i in range(self.T):
            row = zero_row()
            for c in range(C):
                row[col(i, c)] = Fraction(1)
            rows.append((row, lp.Relation.GE, Fraction(1)))
            rows.append(([-x for x in row], lp.Relation.GE, Fraction(-1)))
        # dominance: measure i attains the max on its own extension
        for i in range(self.T):
            in_i = [c for c in range(C) if self.sigs[c][i]]
            for j in range(self.T):
                if j == i:
                    continue
                row = zero_row()
                for c in in_i:
                    row[col(i, c)] = Fraction(1)
                    row[col(j, c)] += Fraction(-1)
                rows.append((row, lp.Relation.GE, Fraction(0)))
        # the disjunct's constraints over the y_i = mu_i(extension_i)
        for by_measure, rel, bound in basic_terms:
            row = zero_row()
            for i, coeff in by_measure.items():
                for c in range(C):
                    if self.sigs[c][i]:
                        row[col(i, c)] += coeff
            rows.append((row, rel, bound))
        self.rows = rows
        self.nvars = nvars

    def system(self, objective=None) -> lp.LinearSystem:
        return lp.make_system(
            self.variables, self.rows, objective=objective, nonneg=self.variables
        )

    def objective_row(self, t: Term) -> list:
        C = len(self.class_rep)
        row = [Fraction(0)] * self.nvars
        for coeff, phi in t.parts:
            i = self._arg_cache[phi]
            for c in range(C):
                if self.sigs[c][i]:
                    row[i * C + c] += coeff
        return row

    def measures(self, point: dict) -> list[dict]:
        C = len(self.class_rep)
        out = []
        for i in range(self.T):
            mu = {}
            for c in range(C):
                mass = point[f"x_{i}_{c}"]
                if mass != 0:
                    wid = self.worlds.ids[self.class_rep[c]]
                    mu[wid] = mu.get(wid, Fraction(0)) + mass
            out.append(mu)
        return out


def _prepare(f: LikelihoodFormula, prop_cap: Optional[int]):
    cap = atom_cap(DEFAULT_PROP_CAP if prop_cap is None else prop_cap)
    props = likelihood_props(f)
    if len(props) > cap:
        raise ResourceError(
            f"{len(props)} distinct propositions exceed the cap {cap}"
        )
    worlds = _Worlds(props)
    disjuncts = dnf(normalize(f))
    return worlds, disjuncts


def _structure_from(worlds: _Worlds, measures: list[dict]) -> UpperProbStructure:
    return UpperProbStructure(
        props=worlds.props,
        worlds=worlds.ids,
        assignment={w: dict(a) for w, a in zip(worlds.ids, worlds.assignments)},
        measures=tuple(measures),
    )


def sat(f: LikelihoodFormula, prop_cap: Optional[int] = None) -> SatResult:
    """SAT with a verified witness structure, or UNSAT.

    The model, when present, has exactly the formula's atom worlds and one
    measure per distinct likelihood argument of the satisfied disjunct.
    """
    worlds, disjuncts = _prepare(f, prop_cap)
    lp_sizes = []
    for basics in disjuncts:
        dlp = _DisjunctLP(worlds, basics)
        lp_sizes.append({"variables": dlp.nvars, "rows": len(dlp.rows)})
        outcome = lp.feasible(dlp.system())
        if outcome.verdict is lp.Verdict.FEASIBLE:
            model = _structure_from(worlds, dlp.measures(outcome.point))
            if not evaluate(model, f):
                raise InternalCheckError(
                    "extracted witness structure fails the model checker"
                )
            return SatResult(
                SatVerdict.SAT,
                model=model,
                stats={"disjuncts": len(disjuncts), "lp_sizes": lp_sizes},
            )
    return SatResult(
        SatVerdict.UNSAT,
        stats={"disjuncts": len(disjuncts), "lp_sizes": lp_sizes},
    )


def valid(f: LikelihoodFormula, prop_cap: Optional[int] = None) -> ValidityResult:
    """VALID iff the negation is unsatisfiable; else a countermodel."""
    result = sat(LNot(f), prop_cap)
    if result.verdict is SatVerdict.UNSAT:
        return ValidityResult(valid=True)
    return ValidityResult(valid=False, countermodel=result.model)


def bounds(
    f: LikelihoodFormula,
    t: Term,
    prop_cap: Optional[int] = None,
) -> BoundsResult:
    """Exact inf/sup of the term's value over all structures satisfying f.

    Endpoints carry attainment flags: an open endpoint is approached only
    in the limit of some strict constraint.
    """
    combined_props = sorted(set(likelihood_props(f)) | {
        p for _, phi in t.parts for p in props_of(phi)
    })
    cap = atom_cap(DEFAULT_PROP_CAP if prop_cap is None else prop_cap)
    if len(combined_props) > cap:
        raise ResourceError(
            f"{len(combined_props)} distinct propositions exceed the cap {cap}"
        )
    worlds = _Worlds(combined_props)
    disjuncts = dnf(normalize(f))
    lower: Optional[tuple[Fraction, bool]] = None
    upper: Optional[tuple[Fraction, bool]] = None
    provenance = []
    for idx, basics in enumerate(disjuncts):
        dlp = _DisjunctLP(worlds, basics, extra_args=t.parts)
        obj = dlp.objective_row(t)
        lo = lp.optimize(dlp.system((obj, lp.Direction.MIN)))
        if lo.verdict is lp.Verdict.INFEASIBLE:
            provenance.append({"disjunct": idx, "feasible": False})
            continue
        hi = lp.optimize(dlp.system((obj, lp.Direction.MAX)))
        if lo.verdict is not lp.Verdict.OPTIMAL or hi.verdict is not lp.Verdict.OPTIMAL:
            raise InternalCheckError("term range must be bounded over measures")
        provenance.append(
            {
                "disjunct": idx,
                "feasible": True,
                "lower": lo.value,
                "lower_attained": lo.attained,
                "upper": hi.value,
                "upper_attained": hi.attained,
            }
        )
        if lower is None or (lo.value, not lo.attained) < (lower[0], not lower[1]):
            lower = (lo.value, lo.attained)
        if upper is None or (hi.value, hi.attained) > (upper[0], upper[1]):
            upper = (hi.value, hi.attained)
    if lower is None:
        raise UnsatInputError("formula is unsatisfiable; no bounds exist")
    return BoundsResult(
        lower=lower[0],
        lower_attained=lower[1],
        upper=upper[0],
        upper_attained=upper[1],
        provenance=tuple(provenance),
    )
