import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from pinkey.simplex import solve_lp


def test_single_constraint():
    # min x + 2y  s.t.  x + y = 1  ->  1 at (1, 0)
    result = solve_lp(
        costs=[Fraction(1), Fraction(2)],
        rows=[[Fraction(1), Fraction(1)]],
        rhs=[Fraction(1)],
        basis=[0],
    )
    assert result.value == 1
    assert result.solution == (Fraction(1), Fraction(0))


def test_prefers_cheap_column():
    # min 3x + y + 0s  s.t.  x + y + s = 2  ->  0 at s = 2
    result = solve_lp(
        costs=[Fraction(3), Fraction(1), Fraction(0)],
        rows=[[Fraction(1), Fraction(1), Fraction(1)]],
        rhs=[Fraction(2)],
        basis=[2],
    )
    assert result.value == 0


def test_exact_fractions():
    # min x  s.t.  3x + y = 1 with basis on y -> 0; then force x via cost on y
    result = solve_lp(
        costs=[Fraction(1), Fraction(5)],
        rows=[[Fraction(3), Fraction(1)]],
        rhs=[Fraction(1)],
        basis=[1],
    )
    # entering x: ratio 1/3, objective 1/3 < 5
    assert result.value == Fraction(1, 3)
    assert result.solution[0] == Fraction(1, 3)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_lp([Fraction(1)], [[Fraction(1)]], [Fraction(1), Fraction(2)], [0])


def test_infeasible_start_rejected():
    with pytest.raises(ValueError):
        solve_lp([Fraction(1)], [[Fraction(1)]], [Fraction(-1)], [0])


def _random_problem(rng: random.Random, m: int, extra: int):
    """[I | R] x = b with b >= 0 and nonnegative costs: feasible, bounded."""
    n = m + extra
    rows = []
    for i in range(m):
        row = [Fraction(1 if j == i else 0) for j in range(m)]
        row += [Fraction(rng.randint(0, 4), rng.randint(1, 3)) for _ in range(extra)]
        rows.append(row)
    rhs = [Fraction(rng.randint(0, 6), rng.randint(1, 2)) for _ in range(m)]
    costs = [Fraction(rng.randint(0, 9), rng.randint(1, 3)) for _ in range(n)]
    return costs, rows, rhs, list(range(m))


@pytest.mark.parametrize("seed", range(20))
def test_matches_scipy(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 4)
    extra = rng.randint(1, 5)
    costs, rows, rhs, basis = _random_problem(rng, m, extra)
    exact = solve_lp(costs, rows, rhs, basis)

    reference = linprog(
        c=np.array([float(c) for c in costs]),
        A_eq=np.array([[float(v) for v in row] for row in rows]),
        b_eq=np.array([float(b) for b in rhs]),
        bounds=[(0, None)] * len(costs),
        method="highs",
    )
    assert reference.status == 0
    assert float(exact.value) == pytest.approx(reference.fun, abs=1e-8)

    # the solution itself must satisfy the constraints exactly
    for row, b in zip(rows, rhs):
        assert sum(r * x for r, x in zip(row, exact.solution)) == b
    assert all(x >= 0 for x in exact.solution)
