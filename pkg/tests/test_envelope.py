import random
from fractions import Fraction as F

import pytest

from uplogic.envelope import dominated_max, is_upper_probability
from uplogic.errors import InputError, ResourceError
from uplogic.structure import SetFunction, set_function_of

from conftest import random_structure


def _envelope_of(measures, ground):
    """Recompute the upper envelope of explicit measures, for cross checks."""
    values = {}
    ground = frozenset(ground)
    subsets = [frozenset()]
    for g in sorted(ground):
        subsets += [s | {g} for s in subsets]
    for X in subsets:
        values[X] = max(
            sum((mu.get(g, F(0)) for g in X), F(0)) for mu in measures
        )
    return values


class TestDominatedMax:
    def test_table_abc(self, table_upper):
        value, measure = dominated_max(table_upper, {"a", "b", "c"})
        assert value == F(3, 4)
        assert sum(measure.values()) <= 1

    def test_veps_abc_shortfall(self, veps):
        # v_eps({a,b,c}) = 13/16 but no dominated measure exceeds 3/4
        value, _ = dominated_max(veps, {"a", "b", "c"})
        assert value == F(3, 4)
        assert veps({"a", "b", "c"}) == F(13, 16)

    def test_full_set_is_one(self, table_upper):
        value, measure = dominated_max(table_upper, table_upper.ground)
        assert value == 1
        assert sum(measure.values()) == 1

    def test_outside_ground(self, table_upper):
        with pytest.raises(InputError):
            dominated_max(table_upper, {"zzz"})

    def test_empty_polytope(self):
        v = SetFunction(("1", "2"), {
            frozenset(): F(0), frozenset({"1"}): F(1, 4),
            frozenset({"2"}): F(1, 4), frozenset({"1", "2"}): F(1),
        })
        with pytest.raises(InputError):
            dominated_max(v, {"1"})


class TestIsUpperProbability:
    def test_table_envelope_yes(self, table_upper):
        res = is_upper_probability(table_upper)
        assert res.is_upper_probability
        # the witness family must regenerate v exactly
        values = _envelope_of(res.witness, table_upper.ground)
        for X in table_upper.subsets():
            assert values[X] == table_upper(X)

    def test_veps_no_at_abc(self, veps):
        res = is_upper_probability(veps)
        assert not res.is_upper_probability
        assert res.failing_set == frozenset({"a", "b", "c"})
        assert res.shortfall_value == F(3, 4)

    def test_vacuous_function_yes(self):
        # v(X) = 1 for X != empty is the envelope of all point masses
        ground = ("1", "2", "3")
        res = is_upper_probability(_vacuous_fn(ground))
        assert res.is_upper_probability
        assert len(res.witness) >= len(ground)

    def test_random_envelopes_yes(self):
        rng = random.Random(71)
        for _ in range(20):
            M = random_structure(rng, max_worlds=4)
            res = is_upper_probability(set_function_of(M))
            assert res.is_upper_probability

    def test_normalization_failures(self):
        bad_empty = SetFunction(("1",), {
            frozenset(): F(1, 2), frozenset({"1"}): F(1),
        })
        res = is_upper_probability(bad_empty)
        assert not res.is_upper_probability and res.failing_set == frozenset()

    def test_ground_cap(self):
        v = _vacuous_fn(tuple(str(i) for i in range(4)))
        with pytest.raises(ResourceError):
            is_upper_probability(v, ground_cap=3)

    def test_witnesses_are_dominated(self, table_upper):
        res = is_upper_probability(table_upper)
        for mu in res.witness:
            assert sum(mu.values()) == 1
            for X in table_upper.subsets():
                assert sum((mu.get(g, F(0)) for g in X), F(0)) <= table_upper(X)


def _vacuous(ground):
    subsets = [frozenset()]
    for g in ground:
        subsets += [s | {g} for s in subsets]
    return {X: (F(1) if X else F(0)) for X in subsets}


def _vacuous_fn(ground):
    return SetFunction(ground, _vacuous(ground))
