import random
from fractions import Fraction as Q

import pytest

from cornercuts.blocking import build_blocking_system, is_extreme, separate
from cornercuts.bodies import CornerInstance
from cornercuts.oracle import (
    BoxBound,
    brute_gamma_vertices,
    brute_hull,
    brute_validity,
)
from cornercuts.lattice2d import cone_integer_hull
from cornercuts.ratgeom import GeometryError, QVec

from test_blocking import random_spanning_instance


def V(*xs):
    return QVec(xs)


F_HALF = V(Q(1, 2), Q(1, 2))
PLUS_MINUS_E = CornerInstance(f=F_HALF, rays=(V(1, 0), V(0, 1), V(-1, 0), V(0, -1)))


def test_brute_validity_examples():
    assert brute_validity(PLUS_MINUS_E, (2, 0, 2, 0), BoxBound(5, "strip"))
    assert not brute_validity(PLUS_MINUS_E, (1, 0, 1, 0), BoxBound(5, "strip"))
    assert brute_validity(PLUS_MINUS_E, (100, 90, 100, 90))  # tiny body around f


def test_brute_validity_agrees_with_separate():
    rng = random.Random(47)
    for _ in range(60):
        inst = random_spanning_instance(rng, k_range=(3, 5), bound=4)
        gamma = tuple(Q(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(inst.k))
        assert brute_validity(inst, gamma) == separate(inst, gamma).valid


def test_brute_hull_collinear_and_empty():
    pts, hull = brute_hull(F_HALF, V(1, 0), V(0, 1), BoxBound(3, "test"))
    assert V(1, 1) in hull
    assert all(p[0] >= 1 and p[1] >= 1 for p in pts)


def test_gamma_vertex_oracle_plus_minus_e():
    cuts = brute_gamma_vertices(PLUS_MINUS_E)
    gammas = {c.gamma for c in cuts}
    assert gammas == {(2, 0, 2, 0), (0, 2, 0, 2)}


def test_gamma_vertex_oracle_refuses_large_k():
    inst = CornerInstance(
        f=F_HALF,
        rays=tuple(V(Q(c, 3), Q(s, 3)) for c, s in
                   [(3, 0), (2, 2), (0, 3), (-2, 2), (-3, 0), (-2, -2), (0, -3)]))
    with pytest.raises(GeometryError):
        brute_gamma_vertices(inst)


def test_gamma_vertices_are_extreme_and_valid():
    rng = random.Random(53)
    for _ in range(8):
        inst = random_spanning_instance(rng, k_range=(3, 4), bound=3)
        system = build_blocking_system(inst)
        cuts = brute_gamma_vertices(inst, system)
        assert cuts, "blocking polyhedra always have vertices"
        for cut in cuts:
            assert separate(inst, cut).valid
            ok, cert = is_extreme(inst, cut, system)
            assert ok and cert.rank == inst.k
