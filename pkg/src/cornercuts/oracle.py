"""Independent brute-force oracles for tests and acceptance runs.

These deliberately avoid the production algorithms: validity is decided by
direct lattice scans against hull edges, cone hulls by box enumeration, and
the vertices of the blocking polyhedron by an exact double-description sweep
(a primal generator construction, nothing shared with the candidate-based
facet enumeration).  Exponential or quadratic blowups are accepted here;
these are correctness anchors, not production paths.
"""

from __future__ import annotations

from math import ceil, floor
from typing import List, Optional, Tuple

from .blocking import BlockingSystem, build_blocking_system
from .bodies import CornerInstance, Cut, body_from_cut
from .lattice2d import _cone_shape, _unimodular_to_e1, basis_coefficients, convex_hull, primitive
from .ratgeom import GeometryError, Q, QMat, QVec, rank

__all__ = ["brute_validity", "brute_gamma_vertices", "brute_hull", "BoxBound"]


class BoxBound:
    """A scan radius together with the reason it certifies the query."""

    def __init__(self, radius: int, justification: str):
        self.radius = radius
        self.justification = justification

    def __repr__(self):
        return f"BoxBound({self.radius}, {self.justification!r})"


def _strictly_inside_hull(z: QVec, hull: List[QVec]) -> bool:
    m = len(hull)
    for i in range(m):
        a, b = hull[i], hull[(i + 1) % m]
        if (b - a).cross(z - a) <= 0:
            return False
    return True


def brute_validity(instance: CornerInstance, cut, box: Optional[BoxBound] = None) -> bool:
    """Scan integer points for strict interiority in M_gamma.

    Bounded bodies use a certified bounding box of the hull; strip-like
    bodies reduce the recession direction to an axis and scan the finitely
    many crossing lattice lines.
    """
    gamma = cut.gamma if isinstance(cut, Cut) else tuple(Q(x) for x in cut)
    vrep = body_from_cut(Cut(gamma=gamma), instance)
    shape, _ = _cone_shape(list(vrep.rays)) if vrep.rays else ("zero", [])
    if shape in ("pointed", "halfplane", "plane"):
        return False  # full-dimensional recession swallows deep lattice points

    if shape == "zero":
        hull = convex_hull(vrep.vertices)
        if len(hull) < 3:
            return True  # no interior at all
        if box is None:
            r = int(max(abs(c) for p in hull for c in p)) + 1
            box = BoxBound(r, "hull bounding box plus one")
        elif box.radius < max(abs(c) for p in hull for c in p):
            raise GeometryError("box does not certify the hull extent")
        for x in range(-box.radius, box.radius + 1):
            for y in range(-box.radius, box.radius + 1):
                if _strictly_inside_hull(QVec((x, y)), hull):
                    return False
        return True

    # strip-like: map the recession direction to e1
    d = primitive(vrep.rays[0])
    u_rows, uinv_rows = _unimodular_to_e1(d)
    verts = [QVec((u_rows[0].dot(p), u_rows[1].dot(p))) for p in vrep.vertices]
    ys = [p[1] for p in verts]
    y_lo, y_hi = min(ys), max(ys)
    hull = convex_hull(verts)
    # edges blocking the non-recession side (none for line recession)
    back_edges = []
    if shape == "halfline":
        if len(hull) >= 3:
            pairs = [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]
        elif len(hull) == 2:
            pairs = [(hull[0], hull[1]), (hull[1], hull[0])]
        else:
            pairs = []
        for p, q in pairs:
            e = q - p
            n = QVec((e[1], -e[0]))
            if n[0] < 0:
                back_edges.append((n, n.dot(p)))
    for yy in range(floor(y_lo) + 1, ceil(y_hi)):
        if not (y_lo < yy < y_hi):
            continue
        if shape == "line":
            return False  # the whole lattice line is interior
        x_lo = None
        for n, c in back_edges:
            bound = (c - n[1] * yy) / n[0]  # n[0] < 0: strict lower bound
            if x_lo is None or bound > x_lo:
                x_lo = bound
        xx = 0 if x_lo is None else floor(x_lo) + 1
        z = QVec((xx, yy))
        assert all(n.dot(z) < c for n, c in back_edges)
        return False
    return True


def brute_hull(f: QVec, r1: QVec, r2: QVec, box: BoxBound) -> Tuple[List[QVec], List[QVec]]:
    """All cone lattice points in the box and their 2D convex hull."""
    pts = []
    for x in range(-box.radius, box.radius + 1):
        for y in range(-box.radius, box.radius + 1):
            z = QVec((x, y))
            if basis_coefficients(f, r1, r2, z) is not None:
                pts.append(z)
    return pts, convex_hull(pts)


# ---------------------------------------------------------------------------
# vertex enumeration of the blocking polyhedron (double description)
# ---------------------------------------------------------------------------

def _dd_vertices(rows: List[QVec], k: int) -> List[QVec]:
    """Vertices of {x in R^k : x >= 0, row.x >= 1 for each row} by exact
    double description on the homogenization cone."""
    dim = k + 1
    # constraints: h.(x, t) >= 0; start from the orthant
    constraints: List[QVec] = []
    rays: List[Tuple[QVec, frozenset]] = []
    for i in range(dim):
        e = [Q(0)] * dim
        e[i] = Q(1)
        rays.append((QVec(e), frozenset(j for j in range(dim) if j != i)))
    n_base = dim
    for row in rows:
        constraints.append(QVec(list(row) + [Q(-1)]))
    for cid, h in enumerate(constraints):
        hid = n_base + cid
        plus, zero, minus = [], [], []
        for r, tight in rays:
            v = h.dot(r)
            if v > 0:
                plus.append((r, tight))
            elif v == 0:
                zero.append((r, frozenset(tight | {hid})))
            else:
                minus.append((r, tight))
        if not minus:
            rays = plus + zero
            continue
        new_rays = plus + zero
        for rp, tp in plus:
            for rm, tm in minus:
                common = tp & tm
                # combinatorial adjacency: no third ray is tight on all of common
                adjacent = True
                for r3, t3 in rays:
                    if r3 is rp or r3 is rm:
                        continue
                    if common <= t3:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vm = h.dot(rp), h.dot(rm)
                comb = rp * (-vm) + rm * vp
                comb = _normalize_ray(comb)
                new_rays.append((comb, frozenset(common | {hid})))
        rays = new_rays
    verts = []
    seen = set()
    for r, _ in rays:
        if r[k] > 0:
            x = QVec(tuple(r[j] / r[k] for j in range(k)))
            if x not in seen:
                seen.add(x)
                verts.append(x)
    return verts


def _normalize_ray(r: QVec) -> QVec:
    from math import gcd
    lcm = 1
    for e in r:
        lcm = lcm * e.denominator // gcd(lcm, e.denominator)
    ints = [int(e * lcm) for e in r]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        return r
    return QVec([Q(v, g) for v in ints])


def brute_gamma_vertices(instance: CornerInstance,
                         system: Optional[BlockingSystem] = None) -> List[Cut]:
    """All vertices of the blocking polyhedron, exactly.

    Refuses k > 6 (the oracle is deliberately unoptimized).  Every reported
    vertex is re-verified: feasible for the system and tight constraints of
    rank k.
    """
    if instance.k > 6:
        raise GeometryError("vertex oracle is limited to k <= 6 by design")
    if system is None:
        system = build_blocking_system(instance)
    rows = [row.coeffs for row in system.rows]
    verts = _dd_vertices(rows, instance.k)
    out = []
    for x in verts:
        assert all(v >= 0 for v in x)
        assert all(row.dot(x) >= 1 for row in rows)
        tight = [list(row) for row in rows if row.dot(x) == 1]
        for j in range(instance.k):
            if x[j] == 0:
                e = [Q(0)] * instance.k
                e[j] = Q(1)
                tight.append(e)
        assert rank(QMat(tight)) == instance.k
        out.append(Cut(gamma=tuple(x), provenance="gamma-vertex-oracle"))
    out.sort(key=lambda c: c.gamma)
    return out
