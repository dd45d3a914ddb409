import itertools
import random
from fractions import Fraction

import pytest

from nearfeas.linalg import Matrix, is_nonsingular
from nearfeas.rationals import Rat
from nearfeas.simplex import (
    LinearProgram,
    LPStatus,
    nonintegral_support,
    solve_lp_vertex,
    strictly_between_columns,
)


def _solve_square(rows, rhs):
    """Exact Gaussian elimination over Fractions; None when inconsistent or
    underdetermined.  Independent of the package simplex."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    nr, nc = len(m), len(m[0]) - 1
    row = 0
    piv_cols = []
    for col in range(nc):
        piv = next((i for i in range(row, nr) if m[i][col] != 0), None)
        if piv is None:
            return None  # dependent columns: not a unique basic solution
        m[row], m[piv] = m[piv], m[row]
        pv = m[row][col]
        m[row] = [v / pv for v in m[row]]
        for i in range(nr):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        piv_cols.append(col)
        row += 1
        if row == nr:
            break
    for i in range(row, nr):
        if m[i][-1] != 0:
            return None  # inconsistent
    if len(piv_cols) < nc:
        return None
    sol = [Fraction(0)] * nc
    for r, col in enumerate(piv_cols):
        sol[col] = m[r][-1]
    return sol


def lp_optimum_by_enumeration(A, b, lower, upper, obj):
    """Minimum over all basic solutions: choose basic columns and a bound
    pattern for the rest, solve exactly, keep feasible candidates."""
    m, n = len(A), len(A[0])
    best = None
    for k in range(0, min(m, n) + 1):
        for basic in itertools.combinations(range(n), k):
            nonbasic = [j for j in range(n) if j not in basic]
            for pattern in itertools.product((0, 1), repeat=len(nonbasic)):
                xn = {
                    j: (lower[j] if p == 0 else upper[j])
                    for j, p in zip(nonbasic, pattern)
                }
                rhs = [
                    b[i] - sum(A[i][j] * xn[j] for j in nonbasic) for i in range(m)
                ]
                if k == 0:
                    if any(r != 0 for r in rhs):
                        continue
                    xb = []
                else:
                    sub = [[A[i][j] for j in basic] for i in range(m)]
                    xb = _solve_square(sub, rhs)
                    if xb is None:
                        continue
                x = [Fraction(0)] * n
                for j, v in xn.items():
                    x[j] = Fraction(v)
                for j, v in zip(basic, xb):
                    x[j] = v
                if any(not lower[j] <= x[j] <= upper[j] for j in range(n)):
                    continue
                val = sum(obj[j] * x[j] for j in range(n))
                if best is None or val < best:
                    best = val
    return best


def test_trivial_optimum():
    lp = LinearProgram(Matrix.from_rows([[1, 1]]), (1,), (0, 0), (1, 1), (1, 0))
    sol = solve_lp_vertex(lp)
    assert sol.status == LPStatus.OPTIMAL
    assert sol.values == (Rat(0), Rat(1))
    assert sol.objective_value == 0


def test_trivial_infeasible():
    lp = LinearProgram(Matrix.from_rows([[1, -1]]), (2,), (0, 0), (1, 1), (1, 1))
    assert solve_lp_vertex(lp).status == LPStatus.INFEASIBLE


def test_three_var_matches_enumeration():
    A = [[1, 1, 1], [2, 1, 0]]
    lp = LinearProgram(
        Matrix.from_rows(A), (2, 2), (0, 0, 0), (2, 2, 2), (1, 2, 3)
    )
    sol = solve_lp_vertex(lp)
    assert sol.status == LPStatus.OPTIMAL
    expected = lp_optimum_by_enumeration(
        [[Fraction(v) for v in r] for r in A],
        [Fraction(2), Fraction(2)],
        [Fraction(0)] * 3,
        [Fraction(2)] * 3,
        [Fraction(1), Fraction(2), Fraction(3)],
    )
    assert sol.objective_value == expected


def _random_lp(rng, m, n):
    A = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(m)]
    lower = [Fraction(rng.randint(-2, 0)) for _ in range(n)]
    upper = [lo + rng.randint(0, 3) for lo in lower]
    x0 = [rng.randint(int(lo), int(up)) for lo, up in zip(lower, upper)]
    if rng.random() < 0.7:
        b = [sum(A[i][j] * x0[j] for j in range(n)) for i in range(m)]
    else:
        b = [Fraction(rng.randint(-4, 4)) for _ in range(m)]
    obj = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
    return A, b, lower, upper, obj


def test_random_lps_match_enumeration():
    rng = random.Random(11)
    solved = 0
    for _ in range(60):
        m = rng.randint(1, 3)
        n = rng.randint(1, 5)
        A, b, lower, upper, obj = _random_lp(rng, m, n)
        lp = LinearProgram(
            Matrix.from_rows(A), tuple(b), tuple(lower), tuple(upper), tuple(obj)
        )
        sol = solve_lp_vertex(lp)
        expected = lp_optimum_by_enumeration(A, b, lower, upper, obj)
        if expected is None:
            assert sol.status == LPStatus.INFEASIBLE
        else:
            assert sol.status == LPStatus.OPTIMAL
            assert sol.objective_value == expected
            solved += 1
    assert solved > 20


def test_vertex_nonsingular_property():
    rng = random.Random(13)
    checked = 0
    for _ in range(40):
        m = rng.randint(1, 3)
        n = rng.randint(1, 5)
        A, b, lower, upper, obj = _random_lp(rng, m, n)
        lp = LinearProgram(
            Matrix.from_rows(A), tuple(b), tuple(lower), tuple(upper), tuple(obj)
        )
        sol = solve_lp_vertex(lp)
        if sol.status != LPStatus.OPTIMAL:
            continue
        assert is_nonsingular(strictly_between_columns(lp, sol))
        for j in range(n):
            if j not in sol.basis:
                assert sol.values[j] in (lp.lower[j], lp.upper[j])
        checked += 1
    assert checked > 10


def test_determinism():
    rng = random.Random(17)
    A, b, lower, upper, obj = _random_lp(rng, 2, 4)
    lp = LinearProgram(
        Matrix.from_rows(A), tuple(b), tuple(lower), tuple(upper), tuple(obj)
    )
    s1 = solve_lp_vertex(lp)
    s2 = solve_lp_vertex(lp)
    assert s1.values == s2.values
    assert s1.basis == s2.basis
    assert s1.pivots == s2.pivots


def test_nonintegral_support_examples():
    lp = LinearProgram(Matrix.from_rows([[1, 1, 1]]), (3,), (0, 0, 0), (3, 3, 3), (0, 0, 0))
    sol = solve_lp_vertex(lp)

    class Fake:
        status = LPStatus.OPTIMAL

    f = Fake()
    f.values = (Rat(0), Rat(1), Rat(2))
    assert nonintegral_support(f) == frozenset()
    f.values = (Rat(1, 2), Rat(1), Rat(3, 2))
    assert nonintegral_support(f) == frozenset({0, 2})
    f.values = (Rat(7, 3), Rat(0), Rat(0), Rat(5))
    assert nonintegral_support(f) == frozenset({0})
    assert sol.status == LPStatus.OPTIMAL


def test_bounds_crossed_rejected():
    with pytest.raises(ValueError, match="bounds crossed"):
        LinearProgram(Matrix.from_rows([[1]]), (0,), (1,), (0,), (0,))


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError, match="dimension mismatch"):
        LinearProgram(Matrix.from_rows([[1, 2]]), (0, 0), (0, 0), (1, 1), (0, 0))


def test_degenerate_lps_terminate_and_match():
    # 0/1 data with tiny right-hand sides maximizes ratio-test ties
    rng = random.Random(41)
    for _ in range(80):
        m = rng.randint(1, 4)
        n = rng.randint(1, 6)
        A = [[Fraction(rng.randint(0, 1)) for _ in range(n)] for _ in range(m)]
        b = [Fraction(rng.randint(0, 1)) for _ in range(m)]
        lower = [Fraction(0)] * n
        upper = [Fraction(rng.randint(0, 1)) for _ in range(n)]
        obj = [Fraction(rng.randint(-1, 1)) for _ in range(n)]
        lp = LinearProgram(
            Matrix.from_rows(A), tuple(b), tuple(lower), tuple(upper), tuple(obj)
        )
        sol = solve_lp_vertex(lp)
        expected = lp_optimum_by_enumeration(A, b, lower, upper, obj)
        if expected is None:
            assert sol.status == LPStatus.INFEASIBLE
        else:
            assert sol.status == LPStatus.OPTIMAL
            assert sol.objective_value == expected


def test_rational_entry_lps_match():
    rng = random.Random(43)
    for _ in range(40):
        m = rng.randint(1, 2)
        n = rng.randint(1, 5)
        A = [
            [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)]
            for _ in range(m)
        ]
        lower = [Fraction(rng.randint(-4, 0), 2) for _ in range(n)]
        upper = [lo + Fraction(rng.randint(0, 6), 2) for lo in lower]
        if rng.random() < 0.6:
            x0 = [lo + Fraction(rng.randint(0, int((up - lo) * 2)), 2) for lo, up in zip(lower, upper)]
            b = [sum(A[i][j] * x0[j] for j in range(n)) for i in range(m)]
        else:
            b = [Fraction(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(m)]
        obj = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)]
        lp = LinearProgram(
            Matrix.from_rows(A), tuple(b), tuple(lower), tuple(upper), tuple(obj)
        )
        sol = solve_lp_vertex(lp)
        expected = lp_optimum_by_enumeration(A, b, lower, upper, obj)
        if expected is None:
            assert sol.status == LPStatus.INFEASIBLE
        else:
            assert sol.status == LPStatus.OPTIMAL
            assert sol.objective_value == expected
