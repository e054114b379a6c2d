"""Exact 2D lattice computations.

Integer feasibility for polyhedral regions (bounded, strip-like, or with
full-dimensional recession), integer hulls of translated cones, basis
coefficients, and primitive lattice vectors.  All queries are decided by
certified enumeration after a unimodular reduction, never by sampling.

A region is a list of constraints ``(a, c, strict)`` meaning a.x <= c
(or a.x < c when ``strict``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import ceil, floor, gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from .ratgeom import GeometryError, Q, QVec

Constraint = Tuple[QVec, Q, bool]

__all__ = [
    "ConeHull",
    "ext_gcd",
    "primitive",
    "canonical_primitive",
    "primitive_facet_vector",
    "angle_sort",
    "region_lattice_point",
    "region_lattice_points",
    "convex_hull",
    "vrep_to_hrep",
    "interior_lattice_point",
    "cone_integer_hull",
    "basis_coefficients",
    "ext_XI",
    "segment_lattice_points",
    "ray_lattice_hit",
    "line_lattice_points",
]


# ---------------------------------------------------------------------------
# primitive vectors and exact angular order
# ---------------------------------------------------------------------------

def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def primitive(v: Sequence) -> QVec:
    """The primitive integer vector with the same direction as rational v."""
    v = QVec(v)
    if v.is_zero():
        raise GeometryError("zero vector has no direction")
    m = v[0].denominator
    m = m * v[1].denominator // gcd(m, v[1].denominator)
    a, b = int(v[0] * m), int(v[1] * m)
    g = gcd(abs(a), abs(b))
    return QVec((Q(a // g), Q(b // g)))


def canonical_primitive(v: Sequence) -> QVec:
    """Primitive vector with canonical sign: first nonzero entry positive."""
    p = primitive(v)
    if p[0] < 0 or (p[0] == 0 and p[1] < 0):
        p = -p
    return p


def primitive_facet_vector(p: Sequence, q: Sequence) -> QVec:
    """Generator of the 1D lattice parallel to the segment p-q (canonical sign)."""
    return canonical_primitive(QVec(q) - QVec(p))


def _half(v: QVec) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2*pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u: QVec, v: QVec) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = u.cross(v)
    return 0 if c == 0 else (-1 if c > 0 else 1)


def angle_sort(vectors: Iterable[QVec]) -> List[QVec]:
    """Sort nonzero vectors by angle in [0, 2*pi), exactly."""
    return sorted(vectors, key=cmp_to_key(_angle_cmp))


# ---------------------------------------------------------------------------
# recession cones of constraint systems
# ---------------------------------------------------------------------------

def _recession_info(normals: List[QVec]):
    """Analyze {d : a.d <= 0 for all a}.

    Returns ("full", d) with a strictly interior rational direction,
    ("line", v), ("halfline", v) with v primitive, or ("zero", None).
    """
    dirs = []
    seen = set()
    for a in normals:
        p = primitive(a)
        if p not in seen:
            seen.add(p)
            dirs.append(p)
    if not dirs:
        return "full", QVec((1, 0))
    order = angle_sort(dirs)
    n = len(order)
    if n == 1:
        return "full", -order[0]
    for i in range(n):
        u, v = order[i], order[(i + 1) % n]
        # gap from u to v (ccw) exceeds pi iff cross(u, v) < 0
        if u.cross(v) < 0:
            # all normals live in cone(v, u); d with u.d = v.d = -1 works
            d = _solve2(u, v, Q(-1), Q(-1))
            return "full", d
    # no gap above pi: recession cone has empty interior
    feas = []
    seen = set()
    for a in dirs:
        for cand in (a.perp(), -a.perp()):
            cp = primitive(cand)
            if cp in seen:
                continue
            seen.add(cp)
            if all(b.dot(cp) <= 0 for b in dirs):
                feas.append(cp)
    if not feas:
        return "zero", None
    if len(feas) == 1:
        return "halfline", feas[0]
    if len(feas) == 2 and feas[0] == -feas[1]:
        return "line", feas[0]
    raise AssertionError("recession cone with empty interior spans > 1 dim")


def _solve2(r1: QVec, r2: QVec, b1: Q, b2: Q) -> QVec:
    d = r1.cross(r2)
    if d == 0:
        raise GeometryError("dependent directions")
    # rows r1, r2; Cramer on [[r1],[r2]] x = (b1,b2)
    x = (b1 * r2[1] - b2 * r1[1]) / d
    y = (r1[0] * b2 - r2[0] * b1) / d
    return QVec((x, y))


# ---------------------------------------------------------------------------
# integer feasibility of regions
# ---------------------------------------------------------------------------

def _ceil_bound(b: Q, strict: bool) -> int:
    n = ceil(b)
    if strict and n == b:
        n += 1
    return n


def _floor_bound(b: Q, strict: bool) -> int:
    n = floor(b)
    if strict and n == b:
        n -= 1
    return n


def _closure_vertices(cons: List[Constraint]) -> List[QVec]:
    """Vertices of the closed region (strictness ignored); may be empty."""
    pts = []
    m = len(cons)
    for i in range(m):
        ai, ci, _ = cons[i]
        for j in range(i + 1, m):
            aj, cj, _ = cons[j]
            if ai.cross(aj) == 0:
                continue
            p = _solve2(ai, aj, ci, cj)
            if all(a.dot(p) <= c for a, c, _ in cons):
                pts.append(p)
    out = []
    seen = set()
    for p in pts:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _column_interval(cons: List[Constraint], x: int):
    """Exact y-interval of a region on the column x1 = x, or None."""
    lo, lo_strict = None, False
    hi, hi_strict = None, False
    for a, c, strict in cons:
        ax = a[0] * x
        if a[1] == 0:
            if ax > c or (strict and ax == c):
                return None
            continue
        bound = (c - ax) / a[1]
        if a[1] > 0:
            if hi is None or bound < hi or (bound == hi and strict):
                hi, hi_strict = bound, strict
        else:
            if lo is None or bound > lo or (bound == lo and strict):
                lo, lo_strict = bound, strict
    return lo, lo_strict, hi, hi_strict


def _scan_columns(cons: List[Constraint], x_lo: int, x_hi: int,
                  collect: bool) -> List[QVec]:
    found = []
    for x in range(x_lo, x_hi + 1):
        iv = _column_interval(cons, x)
        if iv is None:
            continue
        lo, lo_s, hi, hi_s = iv
        if lo is None or hi is None:
            raise AssertionError("unbounded column in bounded region scan")
        y0 = _ceil_bound(lo, lo_s)
        y1 = _floor_bound(hi, hi_s)
        for y in range(y0, y1 + 1):
            found.append(QVec((x, y)))
            if not collect:
                return found
    return found


def _unimodular_to_e1(d: QVec):
    """Unimodular U with U d = (1, 0) for primitive integer d; returns (U, Uinv) rows."""
    alpha, beta = int(d[0]), int(d[1])
    g, p, q = ext_gcd(alpha, beta)
    assert g == 1
    u_rows = (QVec((p, q)), QVec((-beta, alpha)))
    uinv_rows = (QVec((alpha, -q)), QVec((beta, p)))
    return u_rows, uinv_rows


def _apply_rows(rows, v: QVec) -> QVec:
    return QVec((rows[0].dot(v), rows[1].dot(v)))


def region_lattice_point(cons: Sequence[Constraint]) -> Optional[QVec]:
    """An integer point satisfying all constraints, or None.

    Handles bounded regions (lexicographic column scan), strip-like regions
    (unimodular reduction of the recession direction), and regions with
    full-dimensional recession (certified far point).  Deterministic.
    """
    active: List[Constraint] = []
    for a, c, strict in cons:
        a = QVec(a)
        if a.is_zero():
            if Q(c) < 0 or (strict and Q(c) == 0):
                return None
            continue
        active.append((a, Q(c), strict))
    if not active:
        return QVec((0, 0))

    kind, d = _recession_info([a for a, _, _ in active])

    if kind == "full":
        t = Q(0)
        for a, c, _ in active:
            slack = 1 + abs(a[0]) + abs(a[1])
            ad = a.dot(d)
            assert ad < 0
            t = max(t, (slack - c) / (-ad))
        x0 = d * t
        z = QVec((ceil(x0[0]), ceil(x0[1])))
        assert all(a.dot(z) < c for a, c, _ in active)
        return z

    if kind == "zero":
        verts = _closure_vertices(active)
        if not verts:
            return None
        x_lo = ceil(min(v[0] for v in verts))
        x_hi = floor(max(v[0] for v in verts))
        hits = _scan_columns(active, x_lo, x_hi, collect=False)
        return hits[0] if hits else None

    # strip-like: reduce recession direction to e1, so x2 is bounded
    u_rows, uinv_rows = _unimodular_to_e1(d)
    tcons: List[Constraint] = []
    for a, c, strict in active:
        # a.x <= c with x = Uinv x'  =>  (a Uinv) . x' <= c
        ta = QVec((a.dot(QVec((uinv_rows[0][0], uinv_rows[1][0]))),
                   a.dot(QVec((uinv_rows[0][1], uinv_rows[1][1])))))
        tcons.append((ta, c, strict))

    if kind == "line":
        assert all(ta[0] == 0 for ta, _, _ in tcons)
        lo, lo_s, hi, hi_s = None, False, None, False
        for ta, c, strict in tcons:
            bound = c / ta[1]
            if ta[1] > 0:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_s = bound, strict
            else:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_s = bound, strict
        if lo is None and hi is None:
            y0 = 0
        elif lo is None:
            y0 = _floor_bound(hi, hi_s)
        else:
            y0 = _ceil_bound(lo, lo_s)
            if hi is not None and y0 > _floor_bound(hi, hi_s):
                return None
        return _apply_rows(uinv_rows, QVec((0, y0)))

    # halfline: every transformed normal has ta[0] <= 0
    assert all(ta[0] <= 0 for ta, _, _ in tcons)
    verts = _closure_vertices(tcons)
    if not verts:
        return None
    y_lo = ceil(min(v[1] for v in verts))
    y_hi = floor(max(v[1] for v in verts))
    for y in range(y_lo, y_hi + 1):
        lo, lo_s = None, False
        ok = True
        for ta, c, strict in tcons:
            ay = ta[1] * y
            if ta[0] == 0:
                if ay > c or (strict and ay == c):
                    ok = False
                    break
                continue
            bound = (c - ay) / ta[0]  # ta[0] < 0 flips the inequality
            if lo is None or bound > lo or (bound == lo and strict):
                lo, lo_s = bound, strict
        if not ok:
            continue
        x = _ceil_bound(lo, lo_s) if lo is not None else 0
        return _apply_rows(uinv_rows, QVec((x, y)))
    return None


def region_lattice_points(cons: Sequence[Constraint]) -> List[QVec]:
    """All integer points of a bounded region, in lexicographic order."""
    active: List[Constraint] = []
    for a, c, strict in cons:
        a = QVec(a)
        if a.is_zero():
            if Q(c) < 0 or (strict and Q(c) == 0):
                return []
            continue
        active.append((a, Q(c), strict))
    if not active:
        raise GeometryError("region is the whole plane; enumeration impossible")
    kind, _ = _recession_info([a for a, _, _ in active])
    if kind != "zero":
        raise GeometryError("region is unbounded; enumeration impossible")
    verts = _closure_vertices(active)
    if not verts:
        return []
    x_lo = ceil(min(v[0] for v in verts))
    x_hi = floor(max(v[0] for v in verts))
    return _scan_columns(active, x_lo, x_hi, collect=True)


# ---------------------------------------------------------------------------
# hulls and V/H conversions
# ---------------------------------------------------------------------------

def convex_hull(points: Iterable[QVec]) -> List[QVec]:
    """Vertices of the convex hull, counterclockwise; collinear inputs give
    the two endpoints (or a single point)."""
    pts = sorted(set(QVec(p) for p in points))
    if len(pts) <= 1:
        return pts
    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and (out[-1] - out[-2]).cross(p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out
    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2 and len(pts) >= 2:
        return [pts[0], pts[-1]]
    return hull


def _cone_shape(rays: List[QVec]):
    """Shape of cone(rays): "zero", "halfline", "line", "pointed", "halfplane",
    or "plane"; with the extreme primitive directions when 1- or 2-dim pointed."""
    dirs = []
    seen = set()
    for r in rays:
        p = primitive(r)
        if p not in seen:
            seen.add(p)
            dirs.append(p)
    if not dirs:
        return "zero", []
    if len(dirs) == 1:
        return "halfline", dirs
    order = angle_sort(dirs)
    n = len(order)
    best_i, best_kind = None, None
    for i in range(n):
        u, v = order[i], order[(i + 1) % n]
        c = u.cross(v)
        dlt = u.dot(v)
        if c < 0:
            return "pointed", [order[(i + 1) % n], order[i]]
        if c == 0 and dlt < 0:
            # gap of exactly pi
            if n == 2:
                return "line", [order[0]]
            return "halfplane", [order[(i + 1) % n], order[i]]
    return "plane", []


def vrep_to_hrep(vertices: Sequence[QVec], rays: Sequence[QVec] = ()) -> List[Tuple[QVec, Q]]:
    """H-representation (a, c) rows with a.x <= c of conv(vertices) + cone(rays).

    Raises GeometryError when the recession cone is full-dimensional.
    """
    verts = [QVec(v) for v in vertices]
    if not verts:
        raise GeometryError("V-representation needs at least one point")
    shape, ext = _cone_shape([QVec(r) for r in rays])
    if shape in ("halfplane", "plane"):
        raise GeometryError("full-dimensional recession cone has no H-representation here")

    rows: List[Tuple[QVec, Q]] = []

    def add(a: QVec, c: Q):
        p = primitive(a)
        scale = a[0] / p[0] if p[0] != 0 else a[1] / p[1]
        rows.append((p, Q(c) / scale))

    if shape == "zero":
        hull = convex_hull(verts)
        if len(hull) == 1:
            p = hull[0]
            add(QVec((1, 0)), p[0]); add(QVec((-1, 0)), -p[0])
            add(QVec((0, 1)), p[1]); add(QVec((0, -1)), -p[1])
        elif len(hull) == 2:
            a, b = hull
            v = b - a
            n = v.perp()
            add(n, n.dot(a)); add(-n, -n.dot(a))
            add(v, max(v.dot(a), v.dot(b))); add(-v, max(-v.dot(a), -v.dot(b)))
        else:
            m = len(hull)
            for i in range(m):
                p, q = hull[i], hull[(i + 1) % m]
                e = q - p
                n = QVec((e[1], -e[0]))  # outward for ccw
                add(n, n.dot(p))
        return _dedupe_rows(rows)

    if shape == "line":
        v = ext[0]
        n = v.perp()
        add(n, max(n.dot(p) for p in verts))
        add(-n, max(-n.dot(p) for p in verts))
        return _dedupe_rows(rows)

    if shape == "halfline":
        v = ext[0]
        n = v.perp()
        add(n, max(n.dot(p) for p in verts))
        add(-n, max(-n.dot(p) for p in verts))
        hull = convex_hull(verts)
        if len(hull) == 1:
            add(-v, -v.dot(hull[0]))
        elif len(hull) == 2:
            a, b = hull
            for p, q in ((a, b), (b, a)):
                e = q - p
                m = QVec((e[1], -e[0]))
                if m.dot(v) < 0:
                    add(m, m.dot(p))
        else:
            k = len(hull)
            for i in range(k):
                p, q = hull[i], hull[(i + 1) % k]
                e = q - p
                m = QVec((e[1], -e[0]))
                if m.dot(v) < 0:
                    add(m, m.dot(p))
        return _dedupe_rows(rows)

    # pointed 2D cone: two extreme rays r_lo, r_hi with cross(r_lo, r_hi) > 0
    r_lo, r_hi = ext
    n1 = QVec((r_lo[1], -r_lo[0]))
    if n1.dot(r_hi) > 0:
        n1 = -n1
    n2 = QVec((r_hi[1], -r_hi[0]))
    if n2.dot(r_lo) > 0:
        n2 = -n2
    add(n1, max(n1.dot(p) for p in verts))
    add(n2, max(n2.dot(p) for p in verts))
    hull = convex_hull(verts)
    if len(hull) == 2:
        a, b = hull
        pairs = ((a, b), (b, a))
    elif len(hull) < 2:
        pairs = ()
    else:
        k = len(hull)
        pairs = tuple((hull[i], hull[(i + 1) % k]) for i in range(k))
    for p, q in pairs:
        e = q - p
        m = QVec((e[1], -e[0]))
        if m.dot(r_lo) < 0 and m.dot(r_hi) < 0:
            add(m, m.dot(p))
    return _dedupe_rows(rows)


def _dedupe_rows(rows: List[Tuple[QVec, Q]]) -> List[Tuple[QVec, Q]]:
    """Drop duplicate directions keeping the tightest offset."""
    best = {}
    order = []
    for a, c in rows:
        if a in best:
            best[a] = min(best[a], c)
        else:
            best[a] = c
            order.append(a)
    return [(a, best[a]) for a in order]


def interior_lattice_point(vertices: Sequence[QVec],
                           rays: Sequence[QVec] = ()) -> Optional[QVec]:
    """An integer point strictly inside conv(vertices) + cone(rays), or None.

    Deterministic scan order (lexicographic after unimodular reduction).
    """
    rows = vrep_to_hrep(vertices, rays)
    return region_lattice_point([(a, c, True) for a, c in rows])


# ---------------------------------------------------------------------------
# integer hulls of translated cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeHull:
    """Integer hull data of C = f + cone(r1, r2) with independent generators.

    ``vertices`` are the extreme points of conv(C intersect Z^2), ordered by
    increasing r1-coefficient; the recession cone is cone(r1, r2).
    """
    apex: QVec
    generators: Tuple[QVec, QVec]
    vertices: Tuple[QVec, ...]
    recession: Tuple[QVec, QVec]


def basis_coefficients(f: QVec, r1: QVec, r2: QVec, x: QVec) -> Optional[Tuple[Q, Q]]:
    """Coordinates (s1, s2) >= 0 of x - f in the basis (r1, r2); None when some
    coordinate is negative.  Raises for a dependent basis."""
    d = QVec(r1).cross(r2)
    if d == 0:
        raise GeometryError("basis rays are linearly dependent")
    w = QVec(x) - QVec(f)
    s1 = w.cross(r2) / d
    s2 = QVec(r1).cross(w) / d
    if s1 < 0 or s2 < 0:
        return None
    return s1, s2


def cone_integer_hull(f: QVec, r1: QVec, r2: QVec) -> ConeHull:
    """Exact integer hull of the translated cone f + cone(r1, r2).

    Every vertex of conv(C cap Z^2) has both primitive-basis coefficients in
    [0, 1) (shifting by a primitive generator exhibits the point as a midpoint
    of two cone lattice points), so it suffices to enumerate the half-open
    parallelogram f + [0,1) u + [0,1) w and prune non-extreme points against
    the recession cone.
    """
    f = QVec(f)
    u, w = primitive(r1), primitive(r2)
    d = u.cross(w)
    if d == 0:
        raise GeometryError("cone generators are linearly dependent")

    # lattice points with coefficients in [0,1) x [0,1) relative to (u, w);
    # pure integer arithmetic after scaling f by its denominator lcm
    corners = [f, f + u, f + w, f + u + w]
    x_lo = ceil(min(p[0] for p in corners)) - 1
    x_hi = floor(max(p[0] for p in corners)) + 1
    lcm = f[0].denominator
    lcm = lcm * f[1].denominator // gcd(lcm, f[1].denominator)
    f0, f1 = int(f[0] * lcm), int(f[1] * lcm)
    u0, u1 = int(u[0]), int(u[1])
    w0, w1 = int(w[0]), int(w[1])
    dd = lcm * int(d)
    # s*L*d = L*(z x w) - (F x w);  t*L*d = L*(u x z) - (u x F)
    s_base0 = -(f0 * w1 - f1 * w0)
    t_base0 = -(u0 * f1 - u1 * f0)
    pts = []
    for x in range(x_lo, x_hi + 1):
        # s-num = s_base0 + L*(x*w1 - y*w0); t-num = t_base0 + L*(u0*y - u1*x)
        y_lo, y_hi = None, None
        ok = True
        for base, slope in ((s_base0 + lcm * x * w1, -lcm * w0),
                            (t_base0 - lcm * u1 * x, lcm * u0)):
            b2, s2, d2 = (base, slope, dd) if dd > 0 else (-base, -slope, -dd)
            bounds = _int_bounds(b2, s2, d2)
            if bounds is None:
                ok = False
                break
            if bounds == ():
                continue
            lo, hi = bounds
            if lo is not None and (y_lo is None or lo > y_lo):
                y_lo = lo
            if hi is not None and (y_hi is None or hi < y_hi):
                y_hi = hi
        if not ok or y_lo is None or y_hi is None:
            continue
        for y in range(y_lo, y_hi + 1):
            pts.append((x, y))
    assert pts, "half-open fundamental parallelogram always contains a lattice point"

    hull0 = [QVec(p) for p in _int_hull(pts)]
    rows = vrep_to_hrep(hull0, rays=[u, w])
    verts = _hrep_vertices(rows)
    # orientation-independent deterministic order: by r1-coefficient
    def s_coeff(z):
        return (z - f).cross(w) / d
    def t_coeff(z):
        return u.cross(z - f) / d
    verts.sort(key=lambda z: (s_coeff(z), t_coeff(z)))
    for z in verts:
        assert z.is_integer() and s_coeff(z) >= 0 and t_coeff(z) >= 0
    return ConeHull(apex=f, generators=(QVec(r1), QVec(r2)),
                    vertices=tuple(verts), recession=(u, w))


def _int_bounds(b: int, s: int, d: int):
    """Integer y with 0 <= b + s*y < d (d > 0): returns (lo, hi), () when the
    condition is y-free and satisfied, or None when unsatisfiable."""
    if s == 0:
        return () if 0 <= b < d else None
    if s > 0:
        return (-(b // s), (d - 1 - b) // s)
    return (-((d - 1 - b) // (-s)), b // (-s))


def _int_hull(pts: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Monotone-chain hull on integer pairs (counterclockwise vertices)."""
    pts = sorted(set(pts))
    if len(pts) <= 1:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                ax, ay = out[-2]
                bx, by = out[-1]
                if (bx - ax) * (p[1] - ay) - (by - ay) * (p[0] - ax) > 0:
                    break
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(list(reversed(pts)))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:
        return [pts[0], pts[-1]]
    return hull


def _hrep_vertices(rows: List[Tuple[QVec, Q]]) -> List[QVec]:
    verts = []
    seen = set()
    m = len(rows)
    for i in range(m):
        ai, ci = rows[i]
        for j in range(i + 1, m):
            aj, cj = rows[j]
            if ai.cross(aj) == 0:
                continue
            p = _solve2(ai, aj, ci, cj)
            if p in seen:
                continue
            if all(a.dot(p) <= c for a, c in rows):
                seen.add(p)
                verts.append(p)
    return verts


def ext_XI(f: QVec, r1: QVec, r2: QVec) -> Tuple[QVec, ...]:
    """Extreme points of conv(X(I)) for the basis I = (r1, r2)."""
    return cone_integer_hull(f, r1, r2).vertices


# ---------------------------------------------------------------------------
# segments, lines, and ray hits
# ---------------------------------------------------------------------------

def line_lattice_points(a: QVec, c: Q):
    """Base point and primitive step of {z integer : a.z = c}, or None.

    ``a`` may be rational; the line carries lattice points iff after scaling
    to a primitive integer normal the offset is an integer.
    """
    p = primitive(a)
    scale = a[0] / p[0] if p[0] != 0 else a[1] / p[1]
    c2 = Q(c) / scale
    if c2.denominator != 1:
        return None
    g, x, y = ext_gcd(int(p[0]), int(p[1]))
    base = QVec((x * int(c2), y * int(c2)))
    step = QVec((-p[1], p[0]))
    return base, step


def segment_lattice_points(p: QVec, q: QVec, open_segment: bool = False) -> List[QVec]:
    """Integer points on the segment [p, q] (or its relative interior)."""
    p, q = QVec(p), QVec(q)
    v = q - p
    if v.is_zero():
        if not open_segment and p.is_integer():
            return [p]
        return []
    n = v.perp()
    sol = line_lattice_points(n, n.dot(p))
    if sol is None:
        return []
    base, step = sol
    if step.dot(v) < 0:
        step = -step
    # param t of base + t*step matching the segment parameter range
    denom = step.dot(v)
    t0 = (p - base).dot(v) / denom
    t1 = (q - base).dot(v) / denom
    ts0 = _ceil_bound(t0, open_segment)
    ts1 = _floor_bound(t1, open_segment)
    return [base + step * t for t in range(ts0, ts1 + 1)]


def ray_lattice_hit(f: QVec, r: QVec) -> Optional[Tuple[Q, QVec]]:
    """Smallest t > 0 with f + t r integral, and the hit point; None if the
    open ray misses the lattice."""
    f, r = QVec(f), QVec(r)
    if r.is_zero():
        raise GeometryError("zero ray")
    if r[0] == 0:
        if f[0].denominator != 1:
            return None
        # t r2 = b - f2 for integer b, t > 0
        if r[1] > 0:
            b = _ceil_bound(f[1], True)
        else:
            b = _floor_bound(f[1], True)
        t = (b - f[1]) / r[1]
        return t, QVec((f[0], b))
    # t = (a - f1)/r1; need f2 + t r2 integral
    ratio = r[1] / r[0]
    pn, qn = ratio.numerator, ratio.denominator
    delta = f[1] * qn - f[0] * pn
    if delta.denominator != 1:
        return None
    dd = int(delta)
    if qn == 1:
        # any integer a with f1 + t r1 = a integral; t = (a - f1)/r1
        if r[0] > 0:
            a = _ceil_bound(f[0], True)
        else:
            a = _floor_bound(f[0], True)
    else:
        # a * pn == pn*f1 - qn*f2 (mod qn) ... rewrite via delta:
        # f2 + (a - f1) pn/qn integral <=> a pn = pn f1 - qn f2 (mod qn)
        rhs = (-dd) % qn
        # solve a*pn = rhs (mod qn); gcd(pn, qn) = 1
        g2, inv2, _ = ext_gcd(pn % qn, qn)
        assert g2 == 1
        a0 = (inv2 * rhs) % qn
        if r[0] > 0:
            # smallest a = a0 (mod qn) with a > f1
            k = _ceil_bound((f[0] - a0) / qn, True)
            a = a0 + k * qn
        else:
            k = _floor_bound((f[0] - a0) / qn, True)
            a = a0 + k * qn
    t = (a - f[0]) / r[0]
    x = f + r * t
    assert t > 0 and x.is_integer()
    return t, x
