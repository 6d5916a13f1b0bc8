import itertools
import random
from fractions import Fraction as F

import pytest

from uplogic.errors import InputError
from uplogic.lp import (
    Direction,
    LPOutcome,
    Relation,
    Verdict,
    feasible,
    make_system,
    optimize,
)

GE, GT = Relation.GE, Relation.GT


def sys1(constraints, objective=None, nvars=1, names=None):
    names = names or [f"x{i}" for i in range(nvars)]
    return make_system(names, constraints, objective=objective)


class TestFeasible:
    def test_unit_interval(self):
        out = feasible(sys1([([F(1)], GE, F(0)), ([F(-1)], GE, F(-1))]))
        assert out.verdict is Verdict.FEASIBLE
        assert 0 <= out.point["x0"] <= 1

    def test_contradiction(self):
        out = feasible(sys1([([F(1)], GE, F(1)), ([F(-1)], GE, F(0))]))
        assert out.verdict is Verdict.INFEASIBLE

    def test_open_interval_witness_interior(self):
        out = feasible(sys1([([F(1)], GT, F(0)), ([F(-1)], GT, F(-1))]))
        assert out.verdict is Verdict.FEASIBLE
        assert 0 < out.point["x0"] < 1

    def test_strict_point_infeasible(self):
        # x > 0 and x <= 0
        out = feasible(sys1([([F(1)], GT, F(0)), ([F(-1)], GE, F(0))]))
        assert out.verdict is Verdict.INFEASIBLE

    def test_rejects_objective(self):
        with pytest.raises(InputError):
            feasible(sys1([([F(1)], GE, F(0))], objective=([F(1)], Direction.MAX)))


class TestOptimize:
    def test_closed_max(self):
        out = optimize(
            sys1([([F(1)], GE, F(0)), ([F(-1)], GE, F(-1))],
                 objective=([F(1)], Direction.MAX))
        )
        assert out.verdict is Verdict.OPTIMAL
        assert out.value == 1 and out.attained
        assert out.point["x0"] == 1

    def test_open_max_not_attained(self):
        out = optimize(
            sys1([([F(1)], GT, F(0)), ([F(-1)], GT, F(-1))],
                 objective=([F(1)], Direction.MAX))
        )
        assert out.verdict is Verdict.OPTIMAL
        assert out.value == 1 and not out.attained

    def test_unbounded(self):
        out = optimize(
            make_system(
                ["x", "y"],
                [([F(1), F(0)], GE, F(0)), ([F(0), F(1)], GE, F(0))],
                objective=([F(1), F(1)], Direction.MAX),
            )
        )
        assert out.verdict is Verdict.UNBOUNDED
        d = out.direction
        assert d["x"] + d["y"] > 0 and d["x"] >= 0 and d["y"] >= 0

    def test_minimize(self):
        out = optimize(
            make_system(
                ["x", "y"],
                [([F(1), F(1)], GE, F(2))],
                objective=([F(1), F(1)], Direction.MIN),
            )
        )
        assert out.value == 2 and out.attained

    def test_strictly_infeasible_reported(self):
        out = optimize(
            sys1([([F(1)], GT, F(0)), ([F(-1)], GE, F(0))],
                 objective=([F(1)], Direction.MAX))
        )
        assert out.verdict is Verdict.INFEASIBLE


# ---------------------------------------------------------------------------
# Brute-force vertex oracle.  Random systems include box rows, so the
# feasible region is bounded and any nonempty region has a vertex optimum.


def _gauss_solve(rows, rhs):
    """Exact solve of a square system; None when singular."""
    n = len(rows)
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = F(1) / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return [A[i][n] for i in range(n)]


def vertex_oracle(nvars, constraints, objective, direction):
    """Best objective value over feasible vertices; None when infeasible."""
    best = None
    for combo in itertools.combinations(range(len(constraints)), nvars):
        point = _gauss_solve(
            [constraints[i][0] for i in combo],
            [constraints[i][2] for i in combo],
        )
        if point is None:
            continue
        ok = all(
            sum(c * x for c, x in zip(coeffs, point)) >= b
            for coeffs, _, b in constraints
        )
        if not ok:
            continue
        val = sum(c * x for c, x in zip(objective, point))
        if best is None:
            best = val
        elif direction is Direction.MAX:
            best = max(best, val)
        else:
            best = min(best, val)
    return best


def random_bounded_system(rng, nvars):
    constraints = []
    for i in range(nvars):  # box: -4 <= x_i <= 4
        lo = [F(0)] * nvars
        hi = [F(0)] * nvars
        lo[i], hi[i] = F(1), F(-1)
        constraints.append((lo, GE, F(-4)))
        constraints.append((hi, GE, F(-4)))
    extra = rng.randint(0, 8 - min(8, nvars))
    for _ in range(extra):
        coeffs = [F(rng.randint(-3, 3)) for _ in range(nvars)]
        constraints.append((coeffs, GE, F(rng.randint(-6, 4))))
    objective = [F(rng.randint(-3, 3)) for _ in range(nvars)]
    direction = rng.choice([Direction.MAX, Direction.MIN])
    return constraints, objective, direction


def test_oracle_agreement_200_random_systems():
    rng = random.Random(2025)
    checked = 0
    while checked < 200:
        nvars = rng.randint(1, 4)
        constraints, objective, direction = random_bounded_system(rng, nvars)
        names = [f"x{i}" for i in range(nvars)]
        sys = make_system(names, constraints, objective=(objective, direction))
        out = optimize(sys)
        expected = vertex_oracle(nvars, constraints, objective, direction)
        if expected is None:
            assert out.verdict is Verdict.INFEASIBLE
        else:
            assert out.verdict is Verdict.OPTIMAL
            assert out.value == expected
        checked += 1


def test_optimum_dominates_sampled_feasible_points():
    rng = random.Random(77)
    for _ in range(40):
        nvars = rng.randint(1, 3)
        constraints, objective, _ = random_bounded_system(rng, nvars)
        names = [f"x{i}" for i in range(nvars)]
        sys = make_system(names, constraints, objective=(objective, Direction.MAX))
        out = optimize(sys)
        if out.verdict is not Verdict.OPTIMAL:
            continue
        for _ in range(20):
            point = [F(rng.randint(-4, 4)) for _ in range(nvars)]
            if all(
                sum(c * x for c, x in zip(coeffs, point)) >= b
                for coeffs, _, b in constraints
            ):
                assert sum(c * x for c, x in zip(objective, point)) <= out.value
