import random
from fractions import Fraction as Q

import pytest

from cornercuts.lattice2d import (
    basis_coefficients,
    cone_integer_hull,
    convex_hull,
    ext_XI,
    interior_lattice_point,
    primitive,
    primitive_facet_vector,
    ray_lattice_hit,
    region_lattice_point,
    region_lattice_points,
    segment_lattice_points,
    vrep_to_hrep,
)
from cornercuts.ratgeom import GeometryError, QVec


def V(*xs):
    return QVec(xs)


# -- brute-force oracles ------------------------------------------------------

def brute_region_points(cons, radius=12):
    out = []
    for x in range(-radius, radius + 1):
        for y in range(-radius, radius + 1):
            p = V(x, y)
            ok = True
            for a, c, strict in cons:
                val = QVec(a).dot(p)
                if val > c or (strict and val == c):
                    ok = False
                    break
            if ok:
                out.append(p)
    return out


def brute_cone_points(f, r1, r2, radius):
    pts = []
    for x in range(-radius, radius + 1):
        for y in range(-radius, radius + 1):
            if basis_coefficients(f, r1, r2, V(x, y)) is not None:
                pts.append(V(x, y))
    return pts


# -- region queries -----------------------------------------------------------

def test_region_point_bounded_hit():
    # square [0,2]^2, non-strict
    cons = [(V(1, 0), Q(2), False), (V(-1, 0), Q(0), False),
            (V(0, 1), Q(2), False), (V(0, -1), Q(0), False)]
    assert region_lattice_point(cons) == V(0, 0)


def test_region_point_strict_interior():
    # open unit square has no lattice point
    cons = [(V(1, 0), Q(1), True), (V(-1, 0), Q(0), True),
            (V(0, 1), Q(1), True), (V(0, -1), Q(0), True)]
    assert region_lattice_point(cons) is None


def test_region_point_strip():
    # strip -1/2 < x1 < 3/2 (recession is the x2 axis)
    cons = [(V(1, 0), Q(3, 2), True), (V(-1, 0), Q(1, 2), True)]
    p = region_lattice_point(cons)
    assert p is not None and p[0] in (0, 1)
    assert p == V(1, 0)  # deterministic witness


def test_region_point_thin_diagonal_strip():
    # 0 < x1 - x2 < 1 contains no lattice points
    cons = [(V(1, -1), Q(1), True), (V(-1, 1), Q(0), True)]
    assert region_lattice_point(cons) is None


def test_region_point_full_dim_recession():
    # halfplane x1 + x2 >= 10, far from origin
    cons = [(V(-1, -1), Q(-10), False)]
    p = region_lattice_point(cons)
    assert p is not None and p[0] + p[1] >= 10


def test_region_point_halfline_recession():
    # wedge: 0 <= x2 <= 1/3, x1 >= x2 + 7/2  (recession ray +e1)
    cons = [(V(0, 1), Q(1, 3), False), (V(0, -1), Q(0), False),
            (V(-1, 1), Q(-7, 2), False)]
    p = region_lattice_point(cons)
    assert p == V(4, 0)


def test_region_point_empty():
    cons = [(V(1, 0), Q(0), False), (V(-1, 0), Q(-1), False)]
    assert region_lattice_point(cons) is None


def test_region_point_matches_brute_random():
    rng = random.Random(3)
    for _ in range(120):
        m = rng.randint(2, 5)
        cons = []
        for _ in range(m):
            a = V(rng.randint(-3, 3), rng.randint(-3, 3))
            if a.is_zero():
                a = V(1, 0)
            cons.append((a, Q(rng.randint(-6, 6), rng.randint(1, 3)),
                         rng.random() < 0.5))
        got = region_lattice_point(cons)
        brute = brute_region_points(cons, radius=20)
        if got is None:
            assert brute == []
        else:
            assert all(a.dot(got) < c if s else a.dot(got) <= c
                       for a, c, s in cons)


def test_region_points_enumeration_is_sorted_and_complete():
    cons = [(V(1, 1), Q(3), False), (V(-1, 0), Q(0), False),
            (V(0, -1), Q(0), False)]
    pts = region_lattice_points(cons)
    assert pts == sorted(pts)
    assert set(pts) == set(brute_region_points(cons, radius=6))


# -- hulls and conversions ----------------------------------------------------

def test_convex_hull_square_and_collinear():
    square = [V(0, 0), V(1, 0), V(1, 1), V(0, 1), V(Q(1, 2), Q(1, 2))]
    hull = convex_hull(square)
    assert set(hull) == {V(0, 0), V(1, 0), V(1, 1), V(0, 1)}
    assert convex_hull([V(0, 0), V(1, 1), V(2, 2)]) == [V(0, 0), V(2, 2)]


def test_vrep_to_hrep_polytope_roundtrip():
    verts = [V(0, 0), V(2, 0), V(0, 2)]
    rows = vrep_to_hrep(verts)
    for p in verts:
        assert all(a.dot(p) <= c for a, c in rows)
    assert all(a.dot(V(Q(1, 2), Q(1, 2))) < c for a, c in rows)
    assert any(a.dot(V(3, 3)) > c for a, c in rows)


def test_vrep_to_hrep_strip():
    rows = vrep_to_hrep([V(0, Q(1, 2)), V(1, Q(1, 2))], rays=[V(0, 1), V(0, -1)])
    # strip 0 <= x1 <= 1
    assert all(a.dot(V(Q(1, 2), 99)) <= c for a, c in rows)
    assert any(a.dot(V(2, 0)) > c for a, c in rows)


def test_vrep_to_hrep_full_dim_recession_rejected():
    with pytest.raises(GeometryError):
        vrep_to_hrep([V(0, 0)], rays=[V(1, 0), V(0, 1), V(-1, -1)])


def test_interior_lattice_point_examples():
    f = V(Q(1, 2), Q(1, 2))
    diamond = [f + V(1, 0), f + V(0, 1), f - V(1, 0), f - V(0, 1)]
    assert interior_lattice_point(diamond) is None
    # strip -1/2 <= x1 <= 3/2
    p = interior_lattice_point([V(Q(-1, 2), 0), V(Q(3, 2), 0)],
                               rays=[V(0, 1), V(0, -1)])
    assert p is not None and p[0] in (0, 1)
    # open unit square: vertices only touch the boundary
    sq = [V(0, 0), V(1, 0), V(1, 1), V(0, 1)]
    assert interior_lattice_point(sq) is None


# -- cone hulls ---------------------------------------------------------------

def test_cone_hull_axis_cone():
    f = V(Q(1, 2), Q(1, 2))
    hull = cone_integer_hull(f, V(1, 0), V(0, 1))
    assert hull.vertices == (V(1, 1),)


def test_cone_hull_skew_cone():
    f = V(Q(1, 2), Q(1, 2))
    hull = cone_integer_hull(f, V(1, 0), V(1, 1))
    assert hull.vertices == (V(1, 1),)


def test_cone_hull_quarter_f():
    f = V(Q(1, 4), Q(1, 4))
    hull = cone_integer_hull(f, V(2, 1), V(1, 2))
    assert hull.vertices == (V(1, 1),)


def test_cone_hull_dependent_rejected():
    with pytest.raises(GeometryError):
        cone_integer_hull(V(Q(1, 2), Q(1, 2)), V(1, 1), V(-2, -2))


def certified_hull_check(f, r1, r2):
    """Definitional verification of cone_integer_hull against a box scan."""
    hull = cone_integer_hull(f, r1, r2)
    u, w = primitive(r1), primitive(r2)
    corners = [f, f + u, f + w, f + u + w]
    radius = int(max(abs(c) for p in corners for c in p)) + 2
    pts = brute_cone_points(f, r1, r2, radius)
    claimed = set(hull.vertices)
    # every claimed vertex is a cone lattice point
    for v in claimed:
        assert v.is_integer()
        assert basis_coefficients(f, r1, r2, v) is not None
    # vertices (all inside the box by the parallelogram bound) are extreme,
    # and every enumerated point is covered by conv(vertices) + cone
    rows = vrep_to_hrep(list(claimed), rays=[u, w])
    for p in pts:
        assert all(a.dot(p) <= c for a, c in rows)
    for v in claimed:
        others = claimed - {v}
        if others:
            rows2 = vrep_to_hrep(list(others), rays=[u, w])
            assert any(a.dot(v) > c for a, c in rows2)
    return hull


def test_cone_hull_certified_random():
    rng = random.Random(5)
    done = 0
    while done < 40:
        f = V(Q(rng.randint(-8, 8), rng.randint(1, 8)),
              Q(rng.randint(-8, 8), rng.randint(1, 8)))
        r1 = V(rng.randint(-8, 8), rng.randint(-8, 8))
        r2 = V(rng.randint(-8, 8), rng.randint(-8, 8))
        if r1.is_zero() or r2.is_zero() or r1.cross(r2) == 0:
            continue
        certified_hull_check(f, r1, r2)
        done += 1


def test_ext_XI_symmetry():
    f = V(Q(1, 2), Q(1, 2))
    assert ext_XI(f, V(1, 0), V(0, 1)) == (V(1, 1),)
    assert ext_XI(f, V(-1, 0), V(0, -1)) == (V(0, 0),)
    assert ext_XI(f, V(1, 0), V(0, -1)) == (V(1, 0),)


# -- coefficients, segments, hits ---------------------------------------------

def test_basis_coefficients_examples():
    f = V(Q(1, 2), Q(1, 2))
    assert basis_coefficients(f, V(1, 0), V(0, 1), V(1, 1)) == (Q(1, 2), Q(1, 2))
    assert basis_coefficients(f, V(1, 0), V(0, 1), V(0, 1)) is None
    assert basis_coefficients(f, V(1, 0), V(0, 1), V(1, 0)) is None
    with pytest.raises(GeometryError):
        basis_coefficients(f, V(1, 0), V(2, 0), V(1, 1))


def test_primitive_facet_vector():
    assert primitive_facet_vector(V(0, 0), V(2, 0)) == V(1, 0)
    assert primitive_facet_vector(V(0, 0), V(2, 4)) == V(1, 2)
    assert primitive_facet_vector(V(1, 1), V(1, -3)) == V(0, 1)
    with pytest.raises(GeometryError):
        primitive_facet_vector(V(1, 1), V(1, 1))


def test_segment_lattice_points():
    assert segment_lattice_points(V(0, 0), V(2, 0)) == [V(0, 0), V(1, 0), V(2, 0)]
    assert segment_lattice_points(V(0, 0), V(2, 0), open_segment=True) == [V(1, 0)]
    assert segment_lattice_points(V(Q(1, 2), 0), V(Q(3, 2), 0)) == [V(1, 0)]
    assert segment_lattice_points(V(Q(1, 4), Q(1, 4)), V(Q(3, 4), Q(3, 4))) == []


def test_ray_lattice_hit():
    f = V(Q(1, 2), Q(1, 2))
    t, x = ray_lattice_hit(f, V(1, 1))
    assert (t, x) == (Q(1, 2), V(1, 1))
    t, x = ray_lattice_hit(f, V(3, -1))
    assert (t, x) == (Q(1, 2), V(2, 0))


def test_ray_lattice_hit_none_and_axis():
    f = V(Q(1, 2), Q(1, 2))
    assert ray_lattice_hit(f, V(1, 0)) is None
    assert ray_lattice_hit(f, V(0, 1)) is None
    f2 = V(0, Q(1, 2))
    assert ray_lattice_hit(f2, V(0, 1)) == (Q(1, 2), V(0, 1))
    assert ray_lattice_hit(f2, V(0, -1)) == (Q(1, 2), V(0, 0))


def test_ray_lattice_hit_matches_brute():
    rng = random.Random(9)
    for _ in range(200):
        f = V(Q(rng.randint(-6, 6), rng.randint(1, 6)),
              Q(rng.randint(-6, 6), rng.randint(1, 6)))
        r = V(Q(rng.randint(-5, 5), rng.randint(1, 4)),
              Q(rng.randint(-5, 5), rng.randint(1, 4)))
        if r.is_zero():
            continue
        got = ray_lattice_hit(f, r)
        # brute force: check all lattice points in a box for membership on the ray
        best = None
        for x in range(-24, 25):
            for y in range(-24, 25):
                p = V(x, y)
                d = p - f
                if d.cross(r) == 0 and d.dot(r) > 0:
                    t = d[0] / r[0] if r[0] != 0 else d[1] / r[1]
                    if best is None or t < best[0]:
                        best = (t, p)
        if got is not None:
            t, x = got
            assert x.is_integer() and f + r * t == x
            if best is not None and abs(best[1][0]) <= 12 and abs(best[1][1]) <= 12:
                assert t <= best[0]
                if t == best[0]:
                    assert x == best[1]
        else:
            assert best is None
