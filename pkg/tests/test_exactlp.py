import random
from fractions import Fraction as Q

from cornercuts.exactlp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    solve_lp,
)
from cornercuts.ratgeom import QMat, QVec, rank


def LP(c, rows, rhs):
    return LinearProgram(objective=QVec(c), rows=tuple(QVec(r) for r in rows),
                         rhs=tuple(Q(b) for b in rhs))


def test_simple_optimum():
    res = solve_lp(LP([1, 1], [[1, 1]], [1]))
    assert res.status == OPTIMAL
    assert res.value == 1
    assert res.x in (QVec((1, 0)), QVec((0, 1)))
    assert res.x == QVec((1, 0))  # Bland-deterministic


def test_infeasible():
    res = solve_lp(LP([0, 0], [[1, 0], [-1, 0]], [1, 0]))
    assert res.status == INFEASIBLE


def test_unbounded():
    res = solve_lp(LP([-1, 0], [], []))
    assert res.status == UNBOUNDED


def test_solution_satisfies_constraints_exactly():
    lp = LP([2, 3], [[1, 2], [3, 1], [1, -1]], [Q(7, 2), 4, -10])
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    for row, b in zip(lp.rows, lp.rhs):
        assert row.dot(res.x) >= b
    assert all(v >= 0 for v in res.x)
    assert res.value == lp.objective.dot(res.x)


def test_tight_rows_have_full_rank_at_vertex():
    lp = LP([1, 1], [[2, 1], [1, 3]], [2, 3])
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    tight = [list(lp.rows[i]) for i in res.tight_rows]
    tight += [[1 if j == jj else 0 for jj in range(2)]
              for j in range(2) if res.x[j] == 0]
    assert rank(QMat(tight)) == 2


def random_lp(rng, n_max=4, m_max=5):
    n = rng.randint(1, n_max)
    m = rng.randint(1, m_max)
    c = [Q(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(n)]
    rows = [[Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)]
            for _ in range(m)]
    rhs = [Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(m)]
    return LP(c, rows, rhs)


def test_strong_duality_random():
    # dual of min c.x, Ax >= b, x >= 0 is max b.y, A^T y <= c, y >= 0,
    # solved by the same code as min (-b).y, (-A^T) y >= -c, y >= 0
    rng = random.Random(17)
    checked = 0
    while checked < 40:
        lp = random_lp(rng)
        res = solve_lp(lp)
        if res.status != OPTIMAL:
            continue
        n, m = len(lp.objective), len(lp.rows)
        dual = LP([-b for b in lp.rhs],
                  [[-lp.rows[i][j] for i in range(m)] for j in range(n)],
                  [-c for c in lp.objective])
        dres = solve_lp(dual)
        assert dres.status == OPTIMAL
        assert -dres.value == res.value
        checked += 1


def test_degenerate_and_zero_rhs():
    res = solve_lp(LP([1], [[1], [1]], [0, 0]))
    assert res.status == OPTIMAL and res.value == 0
    res = solve_lp(LP([0, 1], [[1, 1], [1, 1]], [1, 1]))
    assert res.status == OPTIMAL and res.value == 0
