"""Facet enumeration for the two-row corner relaxation.

Generates the polynomial candidate families of maximal lattice-free bodies
(splits from ray and hull-facet directions, the three triangle types from
corner-ray and hull data, quadrilaterals from corner-ray 4-tuples, and the
all-integer-hits hull), converts each body to its intersection cut, and
keeps exactly the cuts that are vertices of the blocking polyhedron.

Generation is deliberately generous: completeness rests on covering all the
necessary-condition cases, correctness solely on the final extremality
filter.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, floor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .blocking import (
    BlockingSystem,
    ExtremalityCertificate,
    build_blocking_system,
    is_extreme,
)
from .bodies import (
    Body,
    CornerInstance,
    Cut,
    MAXIMAL_TAGS,
    QUADRILATERAL,
    SPLIT,
    TRIANGLE_TYPE1,
    TRIANGLE_TYPE2,
    TRIANGLE_TYPE3,
    VRep,
    body_from_lines,
    classify,
    cut_from_body,
    maximal_superset,
    ray_incidence,
    split_body,
)
from .lattice2d import (
    ConeHull,
    canonical_primitive,
    cone_integer_hull,
    ext_gcd,
    interior_lattice_point,
    primitive,
    ray_lattice_hit,
)
from .ratgeom import GeometryError, Q, QVec
from .tilting import ratio_condition, solve_quadrilateral, solve_triangle

SPLIT_RAY_PARALLEL = "SplitRayParallel"
SPLIT_HULL_FACET = "SplitHullFacet"
TYPE1 = "Type1"
TYPE2B = "Type2b"
TYPE2C = "Type2c"
TYPE3 = "Type3"
QUAD = "Quad"
P_INTEGRAL = "PIntegral"

__all__ = [
    "Candidate", "FacetCut", "FacetList",
    "candidates_split", "candidates_type1", "candidates_type2",
    "candidates_type3", "candidates_quad", "candidate_p_integral",
    "enumerate_facets",
]


@dataclass(frozen=True)
class Candidate:
    body: Body
    family: str
    choices: Tuple = ()


@dataclass(frozen=True)
class FacetCut:
    cut: Cut
    certificate: ExtremalityCertificate
    candidates: Tuple[Candidate, ...]


@dataclass(frozen=True)
class FacetList:
    instance: CornerInstance
    cuts: Tuple[FacetCut, ...]

    def gammas(self):
        return {fc.cut.gamma for fc in self.cuts}


# ---------------------------------------------------------------------------
# small exact line helpers
# ---------------------------------------------------------------------------

def _line_through(p: QVec, q: QVec) -> Tuple[QVec, Q]:
    a = primitive((q - p).perp())
    return a, a.dot(p)


def _cross_ray_line(f: QVec, r: QVec, a: QVec, c: Q) -> Optional[QVec]:
    den = a.dot(r)
    if den == 0:
        return None
    lam = (c - a.dot(f)) / den
    if lam <= 0:
        return None
    return f + r * lam


def _intersect_lines(a1: QVec, c1: Q, a2: QVec, c2: Q) -> Optional[QVec]:
    det = a1.cross(a2)
    if det == 0:
        return None
    x = (c1 * a2[1] - c2 * a1[1]) / det
    y = (a1[0] * c2 - a2[0] * c1) / det
    return QVec((x, y))


def _polygon_body(f: QVec, vertices: Sequence[QVec]) -> Optional[Body]:
    """Body from polygon vertices; None when f is not strictly interior or
    the polygon is degenerate."""
    m = len(vertices)
    lines = []
    for i in range(m):
        p, q = vertices[i], vertices[(i + 1) % m]
        if p == q:
            return None
        a, c = _line_through(p, q)
        v = a.dot(f)
        if v == c:
            return None
        lines.append((a, c) if v < c else (-a, -c))
    try:
        return body_from_lines(f, lines)
    except GeometryError:
        return None


def _lattice_point_on_line(a: QVec, c: Q) -> Optional[QVec]:
    if any(x.denominator != 1 for x in a) or Q(c).denominator != 1:
        return None
    g, x, y = ext_gcd(int(a[0]), int(a[1]))
    cc = int(c)
    if cc % g != 0:
        return None
    return QVec((x * (cc // g), y * (cc // g)))


def _adjacent_line_pairs(z0: QVec, v: QVec, f: QVec,
                         instance: CornerInstance) -> List[Tuple[QVec, QVec]]:
    """Candidate consecutive lattice-point pairs on the lattice line adjacent
    (toward f) to the base line through z0 with primitive direction v.

    Windows come from three deterministic sources: the central projections of
    f from each ray crossing with the base line onto the adjacent line (the
    "uniquely given by where f is" choices, seen from the would-be facet
    corners), the direct ray crossings with the adjacent line (the cases
    where a ray points between the two lattice points), and f's orthogonal
    shadow.  Over-generation is deliberate.
    """
    n = primitive(v.perp())
    c = n.dot(z0)
    if c.denominator != 1:
        return []
    c = Q(int(c))
    nf = n.dot(f)
    if nf == c:
        return []
    if nf < c:
        n, c, nf = -n, -c, -nf
    # adjacent line: n.x = c + 1; base point z' with n.z' = c + 1
    zp = _lattice_point_on_line(n, c + 1)
    if zp is None:
        return []
    step = v
    pairs: List[Tuple[QVec, QVec]] = []

    def t_of(point: QVec) -> Q:
        d = point - zp
        return d[0] / step[0] if step[0] != 0 else d[1] / step[1]

    def add_window(t: Q, wide: bool = False):
        base = floor(t)
        offsets = (-1, 0, 1) if wide else (0,)
        for off in offsets:
            s = base + off
            pairs.append((zp + step * s, zp + step * (s + 1)))
        if t == base and not wide:
            pairs.append((zp + step * (base - 1), zp + step * base))

    # orthogonal shadow of f
    add_window(t_of(f - n * ((nf - (c + 1)) / n.dot(n))))
    for r in instance.rays:
        den = n.dot(r)
        # crossing with the base line (a would-be corner), projected from f
        crossing = _cross_ray_line(f, r, n, c)
        if crossing is not None and nf != c + 1:
            lam = 1 / (nf - c)
            proj = crossing + (f - crossing) * lam
            add_window(t_of(proj), wide=True)
        # direct crossing with the adjacent line
        if den > 0 and nf < c + 1:
            lam = (c + 1 - nf) / den
            add_window(t_of(f + r * lam))
    seen = set()
    out = []
    for pair in pairs:
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return out


# ---------------------------------------------------------------------------
# per-instance cached data
# ---------------------------------------------------------------------------

class _Context:
    def __init__(self, instance: CornerInstance):
        self.instance = instance
        self._hulls: Dict[Tuple[int, int], Optional[ConeHull]] = {}
        self.hits = [ray_lattice_hit(instance.f, r) for r in instance.rays]

    def hull(self, i: int, j: int) -> Optional[ConeHull]:
        key = (min(i, j), max(i, j))
        if key not in self._hulls:
            ri, rj = self.instance.rays[key[0]], self.instance.rays[key[1]]
            if ri.cross(rj) == 0:
                self._hulls[key] = None
            else:
                self._hulls[key] = cone_integer_hull(self.instance.f, ri, rj)
        return self._hulls[key]


# ---------------------------------------------------------------------------
# candidate families
# ---------------------------------------------------------------------------

def candidates_split(instance: CornerInstance,
                     ctx: Optional[_Context] = None) -> List[Candidate]:
    """Splits parallel to a ray, and splits parallel to a facet of some
    pair-cone integer hull."""
    ctx = ctx or _Context(instance)
    f = instance.f
    out: List[Candidate] = []
    seen = set()

    def emit(direction: QVec, family: str, choice):
        n = canonical_primitive(direction.perp())
        val = n.dot(f)
        if val.denominator == 1:
            return  # f on a lattice line of this direction
        if n in seen:
            return
        seen.add(n)
        body = split_body(f, n, floor(val))
        out.append(Candidate(body=body, family=family, choices=(choice,)))

    for j, r in enumerate(instance.rays):
        emit(r, SPLIT_RAY_PARALLEL, j)
    k = instance.k
    for i in range(k):
        for j in range(i + 1, k):
            hull = ctx.hull(i, j)
            if hull is None:
                continue
            verts = hull.vertices
            for t in range(len(verts) - 1):
                emit(verts[t + 1] - verts[t], SPLIT_HULL_FACET, (i, j, t))
    return out


def candidates_type1(instance: CornerInstance,
                     ctx: Optional[_Context] = None) -> List[Candidate]:
    """Type 1 triangles: two rays pointing at integer points two lattice
    steps apart fix the integral facet; the window pairs on the adjacent
    lattice line fix the other two facets."""
    ctx = ctx or _Context(instance)
    f = instance.f
    out, seen = [], set()
    k = instance.k
    for i in range(k):
        for j in range(i + 1, k):
            if ctx.hits[i] is None or ctx.hits[j] is None:
                continue
            zi, zj = ctx.hits[i][1], ctx.hits[j][1]
            if zi == zj:
                continue
            d = zj - zi
            v = primitive(d)
            if d != v * 2:
                continue  # the facet between integral vertices has one
                # relative-interior lattice point exactly when they are
                # two primitive steps apart
            for ya, yb in _adjacent_line_pairs(zi, v, f, instance):
                for y1, y2 in ((ya, yb), (yb, ya)):
                    la, ca = _line_through(zi, y1)
                    lb, cb = _line_through(zj, y2)
                    apex = _intersect_lines(la, ca, lb, cb)
                    if apex is None:
                        continue
                    body = _polygon_body(f, (zi, zj, apex))
                    if body is None:
                        continue
                    key = body.canonical()
                    if key in seen:
                        continue
                    seen.add(key)
                    if not (body.contains(y1) and body.contains(y2)):
                        continue
                    if classify(body).tag == TRIANGLE_TYPE1:
                        out.append(Candidate(body=body, family=TYPE1,
                                             choices=(i, j, y1, y2)))
    return out


def _base_line_candidates(ctx: _Context, a: int, b: int):
    """Bounded edges of the hull of cone(r_a, r_b) as (point, direction)."""
    hull = ctx.hull(a, b)
    if hull is None:
        return []
    verts = hull.vertices
    return [(verts[t], primitive(verts[t + 1] - verts[t]))
            for t in range(len(verts) - 1)]


def candidates_type2(instance: CornerInstance,
                     ctx: Optional[_Context] = None) -> List[Candidate]:
    """Type 2 triangles per the two necessary-condition cases.

    Case b: the multi-integer facet lies on a hull facet of a ray-pair cone;
    its two base corners come from ray crossings, the two single-point
    facets from a window pair on the adjacent lattice line, and the second
    corner ray (or a deterministic ray-free completion) fixes the triangle.
    Case c: one ray points at an integer hull vertex; the adjacent hull edge
    carries the two-integer-point facet, and the window pairs live on its
    neighbor line.
    """
    ctx = ctx or _Context(instance)
    f = instance.f
    k = instance.k
    out, seen = [], set()

    def push(vertices, family, choice, anchors):
        key = tuple(sorted(vertices))
        if key in seen:
            return
        seen.add(key)
        body = _polygon_body(f, vertices)
        if body is None:
            return
        if not all(body.contains(y) for y in anchors):
            return
        if classify(body).tag == TRIANGLE_TYPE2:
            out.append(Candidate(body=body, family=family, choices=choice))

    # ---- Case b ----------------------------------------------------------
    covered = set()
    for a in range(k):
        for b in range(k):
            if a == b:
                continue
            for z0, v in _base_line_candidates(ctx, a, b):
                nl, cl = _line_through(z0, z0 + v)
                line_key = (a, nl, cl)
                if line_key in covered:
                    continue  # same base line from another pair partner
                covered.add(line_key)
                p1 = _cross_ray_line(f, instance.rays[a], nl, cl)
                if p1 is None:
                    continue
                base_crossings = [
                    (cray, _cross_ray_line(f, instance.rays[cray], nl, cl))
                    for cray in range(k) if cray != a]
                anchors_free = _ray_free_anchors(instance, nl, cl, z0, v, p1)
                for ya, yb in _adjacent_line_pairs(z0, v, f, instance):
                    for y1, y2 in ((ya, yb), (yb, ya)):
                        f1, c1 = _line_through(p1, y1)
                        # second corner on the base line
                        for cray, p2 in base_crossings:
                            if p2 is None or p2 == p1:
                                continue
                            f2, c2 = _line_through(p2, y2)
                            apex = _intersect_lines(f1, c1, f2, c2)
                            if apex is not None:
                                push((p1, p2, apex), TYPE2B,
                                     (a, cray, y1, y2), (y1, y2))
                        # second corner at the apex, any ray
                        for cray in range(k):
                            if cray == a:
                                continue
                            apex = _cross_ray_line(f, instance.rays[cray], f1, c1)
                            if apex is None:
                                continue
                            f2, c2 = _line_through(apex, y2)
                            p2b = _intersect_lines(f2, c2, nl, cl)
                            if p2b is None:
                                continue
                            push((p1, p2b, apex), TYPE2B,
                                 (a, cray, y1, y2), (y1, y2))
                        # single corner ray: ray-free opposite facet through y2
                        for q in anchors_free:
                            f2, c2 = _line_through(q, y2)
                            apex = _intersect_lines(f1, c1, f2, c2)
                            if apex is None:
                                continue
                            push((p1, q, apex), TYPE2B, (a, q, y1, y2), (y1, y2))

    # ---- Case c ----------------------------------------------------------
    for a in range(k):
        if ctx.hits[a] is None:
            continue
        za = ctx.hits[a][1]
        for b in range(k):
            if a == b:
                continue
            hull = ctx.hull(a, b)
            if hull is None or za not in hull.vertices:
                continue
            verts = hull.vertices
            pos = verts.index(za)
            neighbor = None
            if pos > 0:
                neighbor = verts[pos - 1]
            if neighbor is not None:
                vf1 = primitive(neighbor - za)
            else:
                vf1 = primitive(instance.rays[b])
            nf1, cf1 = _line_through(za, za + vf1)
            for ya, yb in _adjacent_line_pairs(za, vf1, f, instance):
                for y2, y4 in ((ya, yb), (yb, ya)):
                    # F3 = line(za, y4); F1 = the hull edge line
                    f3, c3 = _line_through(za, y4)
                    # second corner at B on the F1 line
                    for cray in range(k):
                        if cray == a:
                            continue
                        bpt = _cross_ray_line(f, instance.rays[cray], nf1, cf1)
                        if bpt is None or bpt == za:
                            continue
                        f2, c2 = _line_through(bpt, y2)
                        cpt = _intersect_lines(f2, c2, f3, c3)
                        if cpt is None:
                            continue
                        push((za, bpt, cpt), TYPE2C, (a, b, cray, y2, y4), (y2, y4))
                    # single corner: ray-free second facet
                    for bpt in _ray_free_anchors(instance, nf1, cf1, za, vf1, za):
                        f2, c2 = _line_through(bpt, y2)
                        cpt = _intersect_lines(f2, c2, f3, c3)
                        if cpt is None:
                            continue
                        push((za, bpt, cpt), TYPE2C, (a, b, y2, y4), (y2, y4))
    return out


def _ray_free_anchors(instance: CornerInstance, nl: QVec, cl: Q,
                      z0: QVec, v: QVec, corner: QVec) -> List[QVec]:
    """Deterministic anchor points on a facet line beyond every ray crossing,
    for the single-corner-ray triangle completions."""
    def t_of(point: QVec) -> Q:
        d = point - z0
        return d[0] / v[0] if v[0] != 0 else d[1] / v[1]

    tc = t_of(corner)
    ts = [tc]
    for r in instance.rays:
        p = _cross_ray_line(instance.f, r, nl, cl)
        if p is not None:
            ts.append(t_of(p))
    lo, hi = min(ts), max(ts)
    out = []
    if tc == lo:
        base = floor(hi) + 1
        out = [z0 + v * base, z0 + v * (base + 1), z0 + v * Q(2 * base + 1, 2)]
    elif tc == hi:
        base = ceil(lo) - 1
        out = [z0 + v * base, z0 + v * (base - 1), z0 + v * Q(2 * base - 1, 2)]
    return out


def candidates_type3(instance: CornerInstance,
                     ctx: Optional[_Context] = None) -> List[Candidate]:
    """Type 3 triangles from corner-ray triples and hull vertices."""
    ctx = ctx or _Context(instance)
    out, seen = [], set()
    k = instance.k
    for combo in _subsets(k, 3):
        idx = _angle_sorted_indices(instance, combo)
        rays = [instance.rays[t] for t in idx]
        if any(rays[t].cross(rays[(t + 1) % 3]) == 0 for t in range(3)):
            continue
        hulls = []
        for t in range(3):
            h = ctx.hull(idx[t], idx[(t + 1) % 3])
            hulls.append(h.vertices if h else ())
        if not all(hulls):
            continue
        for y1 in hulls[0]:
            for y2 in hulls[1]:
                for y3 in hulls[2]:
                    try:
                        body = solve_triangle(instance.f, rays, (y1, y2, y3),
                                              check=False)
                    except GeometryError:
                        continue
                    if body is None:
                        continue
                    key = body.canonical()
                    if key in seen:
                        continue
                    seen.add(key)
                    if classify(body).tag != TRIANGLE_TYPE3:
                        continue
                    inc = ray_incidence(body, instance)
                    if all(len(inc.tight[j]) >= 2 for j in combo):
                        out.append(Candidate(body=body, family=TYPE3,
                                             choices=(combo, y1, y2, y3)))
    return out


def candidates_quad(instance: CornerInstance,
                    ctx: Optional[_Context] = None) -> List[Candidate]:
    """Quadrilaterals from corner-ray 4-tuples and hull vertices, kept when
    the ratio condition holds."""
    ctx = ctx or _Context(instance)
    out, seen = [], set()
    k = instance.k
    for combo in _subsets(k, 4):
        idx = _angle_sorted_indices(instance, combo)
        rays = [instance.rays[t] for t in idx]
        if any(rays[t].cross(rays[(t + 1) % 4]) == 0 for t in range(4)):
            continue
        hulls = []
        for t in range(4):
            h = ctx.hull(idx[t], idx[(t + 1) % 4])
            hulls.append(h.vertices if h else ())
        if not all(hulls):
            continue
        for y1 in hulls[0]:
            for y2 in hulls[1]:
                for y3 in hulls[2]:
                    for y4 in hulls[3]:
                        # the integer points of a maximal quadrilateral are
                        # the vertices of a parallelogram of area 1
                        if y1 + y3 != y2 + y4:
                            continue
                        if abs((y2 - y1).cross(y4 - y1)) != 1:
                            continue
                        try:
                            body = solve_quadrilateral(
                                instance.f, rays, (y1, y2, y3, y4), check=False)
                        except GeometryError:
                            continue
                        if body is None:
                            continue
                        key = body.canonical()
                        if key in seen:
                            continue
                        seen.add(key)
                        if classify(body).tag != QUADRILATERAL:
                            continue
                        inc = ray_incidence(body, instance)
                        if not all(len(inc.tight[j]) >= 2 for j in combo):
                            continue
                        if ratio_condition(body, instance).holds:
                            out.append(Candidate(body=body, family=QUAD,
                                                 choices=(combo, y1, y2, y3, y4)))
    return out


def candidate_p_integral(instance: CornerInstance,
                         ctx: Optional[_Context] = None) -> Optional[Candidate]:
    """When every ray points at an integer point and their hull is
    lattice-free: one maximal superset candidate."""
    ctx = ctx or _Context(instance)
    if any(h is None for h in ctx.hits):
        return None
    pts = [h[1] for h in ctx.hits]
    if interior_lattice_point(pts) is not None:
        return None
    try:
        body = maximal_superset(VRep(vertices=tuple(pts)), instance.f)
    except GeometryError:
        return None
    return Candidate(body=body, family=P_INTEGRAL, choices=tuple(pts))


def _subsets(k: int, size: int):
    from itertools import combinations
    return combinations(range(k), size)


def _angle_sorted_indices(instance: CornerInstance, combo) -> List[int]:
    from functools import cmp_to_key
    from .lattice2d import _angle_cmp
    return sorted(combo, key=cmp_to_key(
        lambda a, b: _angle_cmp(instance.rays[a], instance.rays[b])))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def all_candidates(instance: CornerInstance) -> List[Candidate]:
    ctx = _Context(instance)
    cands: List[Candidate] = []
    cands += candidates_split(instance, ctx)
    cands += candidates_type1(instance, ctx)
    cands += candidates_type2(instance, ctx)
    cands += candidates_type3(instance, ctx)
    cands += candidates_quad(instance, ctx)
    p = candidate_p_integral(instance, ctx)
    if p is not None:
        cands.append(p)
    return cands


def enumerate_facets(instance: CornerInstance,
                     system: Optional[BlockingSystem] = None) -> FacetList:
    """All facets of conv(R_f): candidate cuts filtered by the exact vertex
    test on the blocking polyhedron."""
    instance.require_spanning("facet enumeration")
    if system is None:
        system = build_blocking_system(instance)
    by_gamma: Dict[Tuple[Q, ...], List[Candidate]] = {}
    order: List[Tuple[Q, ...]] = []
    for cand in all_candidates(instance):
        cut = cut_from_body(cand.body, instance)
        if cut.gamma not in by_gamma:
            by_gamma[cut.gamma] = []
            order.append(cut.gamma)
        by_gamma[cut.gamma].append(cand)
    facet_cuts: List[FacetCut] = []
    for gamma in sorted(order):
        ok, cert = is_extreme(instance, Cut(gamma=gamma), system)
        if ok:
            facet_cuts.append(FacetCut(cut=Cut(gamma=gamma,
                                               provenance=by_gamma[gamma][0].body),
                                       certificate=cert,
                                       candidates=tuple(by_gamma[gamma])))
    return FacetList(instance=instance, cuts=tuple(facet_cuts))
