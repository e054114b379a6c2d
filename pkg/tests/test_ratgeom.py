import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from cornercuts.ratgeom import (
    QMat,
    QVec,
    det,
    null_space,
    parse_q,
    qstr,
    rank,
    solve_linear,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=9)


def test_solve_identity():
    a = QMat.identity(2)
    assert solve_linear(a, QVec((3, Q(5, 2)))) == QVec((3, Q(5, 2)))


def test_solve_diagonal():
    a = QMat([[2, 0], [0, -2]])
    assert solve_linear(a, QVec((1, 1))) == QVec((Q(1, 2), Q(-1, 2)))


def test_solve_singular_returns_none():
    a = QMat([[1, 1], [2, 2]])
    assert solve_linear(a, QVec((1, 0))) is None


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_linear(QMat([[1, 0, 0], [0, 1, 0]]), QVec((1, 1)))


def test_null_space_full_rank():
    assert null_space(QMat.identity(2)) == []


def test_null_space_one_equation():
    basis = null_space(QMat([[1, 1]]))
    assert len(basis) == 1
    v = basis[0]
    # spans (1, -1)
    assert v[0] * (-1) - v[1] * 1 == 0 and not v.is_zero()


def test_null_space_zero_matrix():
    basis = null_space(QMat([[0, 0, 0]]))
    assert len(basis) == 3


def test_rank_examples():
    assert rank(QMat.identity(3)) == 3
    assert rank(QMat([[1, 2], [2, 4]])) == 1
    assert rank(QMat([[0, 0], [0, 0]])) == 0


def test_det_examples():
    assert det(QMat.identity(2)) == 1
    assert det(QMat([[0, 1], [1, 0]])) == -1
    assert det(QMat([[2, 1], [1, 1]])) == 1


def test_det_dimension_mismatch():
    with pytest.raises(ValueError):
        det(QMat([[1, 2, 3], [4, 5, 6]]))


def test_det_row_swap_flips_sign():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(2, 4)
        rows = [[Q(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)]
                for _ in range(n)]
        a = QMat(rows)
        i, j = rng.sample(range(n), 2)
        rows2 = list(rows)
        rows2[i], rows2[j] = rows2[j], rows2[i]
        assert det(QMat(rows2)) == -det(a)


@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_nullity(rows):
    a = QMat(rows)
    assert rank(a) + len(null_space(a)) == a.ncols


@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=2, max_size=5))
def test_null_space_vectors_are_in_kernel(rows):
    a = QMat(rows)
    for v in null_space(a):
        assert all(r.dot(v) == 0 for r in a.rows)


def test_solve_roundtrip_random():
    rng = random.Random(11)
    trials = 0
    while trials < 30:
        n = rng.randint(1, 4)
        a = QMat([[Q(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(n)]
                  for _ in range(n)])
        if det(a) == 0:
            continue
        trials += 1
        x = QVec([Q(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(n)])
        assert solve_linear(a, a.mul_vec(x)) == x


def test_qstr_and_parse():
    assert qstr(Q(3, 1)) == "3"
    assert qstr(Q(-1, 2)) == "-1/2"
    assert parse_q("7/3") == Q(7, 3)
    assert parse_q("-4") == Q(-4)
    with pytest.raises(ValueError):
        parse_q("3/0")
    with pytest.raises(ValueError):
        parse_q("a/b")


def test_qvec_arithmetic_and_hash():
    u = QVec((1, Q(1, 2)))
    v = QVec((2, 3))
    assert u + v == QVec((3, Q(7, 2)))
    assert v - u == QVec((1, Q(5, 2)))
    assert u * 2 == QVec((2, 1))
    assert u.dot(v) == Q(7, 2)
    assert u.cross(v) == 2
    assert QVec((1, 0)).perp() == QVec((0, 1))
    assert hash(QVec((1, 2))) == hash(QVec((Q(2, 2), Q(4, 2))))
