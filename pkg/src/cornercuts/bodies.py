"""Corner instances and lattice-free bodies.

A body is a matrix of facet normals: M(B) = {x : b_i . (x - f) <= 1}, which
always has f in its interior.  This module evaluates the gauge of M(B) - f,
computes ray incidence, classifies bodies (split, the three triangle types,
quadrilateral, or defective), converts between cuts and bodies, and grows a
lattice-free set to a maximal one by deterministic facet pushing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, floor
from typing import List, Optional, Sequence, Tuple

from .lattice2d import (
    _cone_shape,
    _recession_info,
    _solve2,
    angle_sort,
    canonical_primitive,
    convex_hull,
    line_lattice_points,
    primitive,
    region_lattice_point,
    region_lattice_points,
    segment_lattice_points,
    vrep_to_hrep,
)
from .ratgeom import GeometryError, Q, QVec, qstr

SPLIT = "Split"
TRIANGLE_TYPE1 = "TriangleType1"
TRIANGLE_TYPE2 = "TriangleType2"
TRIANGLE_TYPE3 = "TriangleType3"
QUADRILATERAL = "Quadrilateral"
NOT_MAXIMAL = "NotMaximal"
NOT_LATTICE_FREE = "NotLatticeFree"
MAXIMAL_TAGS = frozenset(
    {SPLIT, TRIANGLE_TYPE1, TRIANGLE_TYPE2, TRIANGLE_TYPE3, QUADRILATERAL})


@dataclass(frozen=True)
class CornerInstance:
    """The point f and the rays of the two-row corner relaxation."""

    f: QVec
    rays: Tuple[QVec, ...]

    def __post_init__(self):
        f = QVec(self.f)
        rays = tuple(QVec(r) for r in self.rays)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "rays", rays)
        if len(f) != 2:
            raise GeometryError("f must be two-dimensional")
        if f.is_integer():
            raise GeometryError("f must not be a lattice point")
        if not rays:
            raise GeometryError("at least one ray is required")
        for j, r in enumerate(rays):
            if len(r) != 2:
                raise GeometryError(f"ray {j + 1} must be two-dimensional")
            if r.is_zero():
                raise GeometryError(f"ray {j + 1} is zero")

    @property
    def k(self) -> int:
        return len(self.rays)

    def spans_plane(self) -> bool:
        return _cone_shape(list(self.rays))[0] == "plane"

    def require_spanning(self, what: str = "this operation"):
        if self.k <= 2:
            raise GeometryError(f"{what} needs more than 2 rays")
        if not self.spans_plane():
            raise GeometryError(
                f"{what} needs the conical hull of the rays to be the plane")


@dataclass(frozen=True)
class Body:
    """Facet-normal representation M(B) = {x : rows[i] . (x - f) <= 1}."""

    rows: Tuple[QVec, ...]
    f: QVec

    def __post_init__(self):
        rows = tuple(QVec(b) for b in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "f", QVec(self.f))
        if not rows:
            raise GeometryError("a body needs at least one row")
        for i, b in enumerate(rows):
            if b.is_zero():
                raise GeometryError(f"row {i + 1} is zero")

    def canonical(self) -> "Body":
        return Body(tuple(sorted(self.rows)), self.f)

    def region(self, strict: bool) -> List[Tuple[QVec, Q, bool]]:
        """Constraints on x for M(B) (or its interior when strict)."""
        return [(b, 1 + b.dot(self.f), strict) for b in self.rows]

    def contains(self, x: QVec, strict: bool = False) -> bool:
        if strict:
            return all(b.dot(QVec(x) - self.f) < 1 for b in self.rows)
        return all(b.dot(QVec(x) - self.f) <= 1 for b in self.rows)

    def as_matrix_strings(self) -> List[List[str]]:
        return [[qstr(c) for c in b] for b in self.rows]


@dataclass(frozen=True)
class VRep:
    """Generator representation conv(vertices) + cone(rays)."""

    vertices: Tuple[QVec, ...]
    rays: Tuple[QVec, ...] = ()


@dataclass(frozen=True)
class Cut:
    """A valid inequality gamma . s >= 1 with gamma >= 0."""

    gamma: Tuple[Q, ...]
    provenance: object = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        g = tuple(Q(x) for x in self.gamma)
        object.__setattr__(self, "gamma", g)
        if any(x < 0 for x in g):
            raise GeometryError("cut coefficients must be nonnegative")

    def as_strings(self) -> List[str]:
        return [qstr(x) for x in self.gamma]


@dataclass(frozen=True)
class RayIncidence:
    """Per-ray gauge values, boundary intersections, and tight facet sets."""

    psi: Tuple[Q, ...]
    points: Tuple[Optional[QVec], ...]
    tight: Tuple[Tuple[int, ...], ...]

    def is_corner(self, j: int) -> bool:
        return len(self.tight[j]) >= 2


@dataclass(frozen=True)
class BodyClass:
    tag: str
    facets: Tuple[Tuple[QVec, QVec], ...] = ()
    facet_rows: Tuple[int, ...] = ()
    facet_points: Tuple[Tuple[QVec, ...], ...] = ()
    split_normal: Optional[QVec] = None
    split_offset: Optional[int] = None
    witness: Optional[QVec] = None
    note: str = ""


# ---------------------------------------------------------------------------
# gauge and incidence
# ---------------------------------------------------------------------------

_REC_CACHE: dict = {}
_LF_CACHE: dict = {}
_CLASSIFY_CACHE: dict = {}


def _rec_kind(body: Body):
    key = body.rows
    hit = _REC_CACHE.get(key)
    if hit is None:
        hit = _recession_info(list(body.rows))
        _REC_CACHE[key] = hit
    return hit


def gauge(body: Body, r: QVec) -> Q:
    """max_i b_i . r, the Minkowski functional of M(B) - f.

    Negative or zero values signal recession directions.  Raises when the
    recession cone of M(B) is full-dimensional (the formula needs a gauge-able
    body).
    """
    kind, _ = _rec_kind(body)
    if kind == "full":
        raise GeometryError("recession cone of the body is full-dimensional")
    r = QVec(r)
    return max(b.dot(r) for b in body.rows)


def ray_incidence(body: Body, instance: CornerInstance) -> RayIncidence:
    kind, _ = _rec_kind(body)
    if kind == "full":
        raise GeometryError("recession cone of the body is full-dimensional")
    psi, pts, tight = [], [], []
    for r in instance.rays:
        vals = [b.dot(r) for b in body.rows]
        m = max(vals)
        psi.append(m)
        tight.append(tuple(i for i, v in enumerate(vals) if v == m))
        pts.append(body.f + r * (1 / m) if m > 0 else None)
    return RayIncidence(psi=tuple(psi), points=tuple(pts), tight=tuple(tight))


# ---------------------------------------------------------------------------
# lattice-freeness and V-representations
# ---------------------------------------------------------------------------

def is_lattice_free(body: Body) -> Tuple[bool, Optional[QVec]]:
    """Whether int(M(B)) misses Z^2; on failure also the witness point."""
    key = (body.rows, body.f)
    hit = _LF_CACHE.get(key)
    if hit is None:
        w = region_lattice_point(body.region(strict=True))
        hit = ((w is None), w)
        _LF_CACHE[key] = hit
    return hit


def vrep_is_lattice_free(vrep: VRep) -> Tuple[bool, Optional[QVec]]:
    rows = vrep_to_hrep(vrep.vertices, vrep.rays)
    w = region_lattice_point([(a, c, True) for a, c in rows])
    return (w is None), w


def body_lattice_points(body: Body) -> List[QVec]:
    """All integer points of M(B); the body must be bounded."""
    return region_lattice_points(body.region(strict=False))


def body_vrep(body: Body) -> VRep:
    """Vertices and recession generators of M(B)."""
    kind, d = _rec_kind(body)
    if kind == "full":
        raise GeometryError("recession cone of the body is full-dimensional")
    f = body.f
    if kind == "line":
        n, lo, hi = _slab_data(body, d)
        # anchor points on the two boundary lines n.x = lo and n.x = hi
        nn = n.dot(n)
        a1 = f + n * ((lo - n.dot(f)) / nn)
        a2 = f + n * ((hi - n.dot(f)) / nn)
        return VRep(vertices=(a1, a2), rays=(d, -d))
    verts = []
    seen = set()
    m = len(body.rows)
    for i in range(m):
        for j in range(i + 1, m):
            bi, bj = body.rows[i], body.rows[j]
            if bi.cross(bj) == 0:
                continue
            p = _solve2(bi, bj, Q(1), Q(1)) + f
            if p in seen:
                continue
            if body.contains(p):
                seen.add(p)
                verts.append(p)
    order = sorted(verts, key=lambda p: (p[0], p[1]))
    order = [f + v for v in
             angle_sort([p - f for p in order])] if order else []
    if kind == "halfline":
        return VRep(vertices=tuple(order), rays=(d,))
    return VRep(vertices=tuple(order))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _slab_data(body: Body, d: QVec):
    """For a line-recession body, the primitive normal and value interval:
    M(B) = {x : lo <= n.x <= hi}."""
    n = canonical_primitive(d.perp())
    lo, hi = None, None
    for b in body.rows:
        lam = b.dot(n) / n.dot(n)
        rhs = 1 + b.dot(body.f)
        # b = lam * n, so b.x <= rhs  <=>  lam * (n.x) <= rhs
        if lam > 0:
            v = rhs / lam
            hi = v if hi is None else min(hi, v)
        elif lam < 0:
            v = rhs / lam
            lo = v if lo is None else max(lo, v)
        else:
            raise AssertionError("slab row parallel to recession line")
    assert lo is not None and hi is not None
    return n, lo, hi


def _facet_segments(body: Body, vrep: VRep):
    """Active facets as (row index, endpoints, bounded flags).

    For bounded bodies: consecutive hull vertex pairs mapped to their row.
    For halfline-recession bodies facets may be unbounded; represented by an
    endpoint pair where one end is a point at "infinity" marker None.
    """
    facets = []
    verts = list(vrep.vertices)
    if not vrep.rays:
        m = len(verts)
        for i in range(m):
            p, q = verts[i], verts[(i + 1) % m]
            row = _row_of_edge(body, p, q)
            if row is not None:
                facets.append((row, p, q))
    return facets


def _row_of_edge(body: Body, p: QVec, q: QVec) -> Optional[int]:
    for i, b in enumerate(body.rows):
        if b.dot(p - body.f) == 1 and b.dot(q - body.f) == 1:
            return i
    return None


def classify(body: Body) -> BodyClass:
    """Lovasz classification with defect reporting.

    NotLatticeFree when an interior integer point exists (with witness);
    NotMaximal when lattice-free but some facet's relative interior carries
    no integer point (or an unbounded body is not a split); else the class.
    """
    key = (body.rows, body.f)
    hit = _CLASSIFY_CACHE.get(key)
    if hit is None:
        hit = _classify_impl(body)
        _CLASSIFY_CACHE[key] = hit
    return hit


def _classify_impl(body: Body) -> BodyClass:
    kind, d = _rec_kind(body)
    if kind == "full":
        w = region_lattice_point(body.region(strict=True))
        assert w is not None
        return BodyClass(tag=NOT_LATTICE_FREE, witness=w)

    free, w = is_lattice_free(body)
    if not free:
        return BodyClass(tag=NOT_LATTICE_FREE, witness=w)

    if kind == "line":
        n, lo, hi = _slab_data(body, d)
        if lo.denominator == 1 and hi == lo + 1:
            return BodyClass(tag=SPLIT, split_normal=n, split_offset=int(lo))
        return BodyClass(tag=NOT_MAXIMAL, note="slab not between adjacent lattice lines")

    if kind == "halfline":
        return BodyClass(tag=NOT_MAXIMAL,
                         note="unbounded non-split bodies are never maximal")

    vrep = body_vrep(body)
    facets = _facet_segments(body, vrep)
    if len(facets) < 3:
        return BodyClass(tag=NOT_MAXIMAL, note="degenerate facet structure")

    rows_ix = tuple(fc[0] for fc in facets)
    ends = tuple((fc[1], fc[2]) for fc in facets)
    relint = tuple(tuple(segment_lattice_points(p, q, open_segment=True))
                   for _, p, q in facets)
    if any(len(pts) == 0 for pts in relint):
        return BodyClass(tag=NOT_MAXIMAL, facets=ends, facet_rows=rows_ix,
                         facet_points=relint,
                         note="a facet has no integer point in its relative interior")

    base = dict(facets=ends, facet_rows=rows_ix, facet_points=relint)
    n_facets = len(facets)

    if n_facets == 3:
        verts = [p for p, _ in ends]
        integral_vertices = sum(1 for v in verts if v.is_integer())
        if integral_vertices == 3:
            if all(len(pts) == 1 for pts in relint):
                return BodyClass(tag=TRIANGLE_TYPE1, **base)
            return BodyClass(tag=NOT_MAXIMAL, note="integral triangle anomaly", **base)
        boundary = set()
        for (p, q) in ends:
            boundary.update(segment_lattice_points(p, q))
        if len(boundary) == 3 and integral_vertices == 0:
            return BodyClass(tag=TRIANGLE_TYPE3, **base)
        # Type 2: a fractional vertex whose two incident edges carry exactly
        # one relint point while the opposite edge has >= 2 integer points.
        for i in range(3):
            closed_i = segment_lattice_points(*ends[i])
            j, l = (i + 1) % 3, (i + 2) % 3
            v_opp = ends[j][1]  # vertex shared by facets j and l
            if v_opp.is_integer():
                continue
            if len(closed_i) >= 2 and len(relint[j]) == 1 and len(relint[l]) == 1:
                return BodyClass(tag=TRIANGLE_TYPE2, **base)
        return BodyClass(tag=NOT_MAXIMAL, note="triangle anomaly", **base)

    if n_facets == 4:
        if all(len(pts) == 1 for pts in relint):
            ys = [pts[0] for pts in relint]
            if (ys[0] + ys[2] == ys[1] + ys[3]
                    and abs((ys[1] - ys[0]).cross(ys[3] - ys[0])) == 1):
                return BodyClass(tag=QUADRILATERAL, **base)
            return BodyClass(tag=NOT_MAXIMAL, note="quadrilateral anomaly", **base)
        return BodyClass(tag=NOT_MAXIMAL, note="quadrilateral edge multiplicity", **base)

    return BodyClass(tag=NOT_MAXIMAL, note=f"{n_facets} facets", **base)


# ---------------------------------------------------------------------------
# cuts <-> bodies
# ---------------------------------------------------------------------------

def cut_from_body(body: Body, instance: CornerInstance) -> Cut:
    """Intersection cut gamma_j = max(psi(r_j), 0); requires M(B) lattice-free."""
    free, w = is_lattice_free(body)
    if not free:
        raise GeometryError(
            f"body has interior integer point {tuple(map(qstr, w))}", witness=w)
    inc = ray_incidence(body, instance)
    return Cut(gamma=tuple(max(v, Q(0)) for v in inc.psi), provenance=body)


def body_from_cut(cut, instance: CornerInstance) -> VRep:
    """M_gamma = conv{f + r_j/g_j : g_j > 0} + cone{r_j : g_j = 0}."""
    gamma = cut.gamma if isinstance(cut, Cut) else tuple(Q(x) for x in cut)
    if len(gamma) != instance.k:
        raise GeometryError("cut length does not match the ray count")
    if any(g < 0 for g in gamma):
        raise GeometryError("cut coefficients must be nonnegative")
    instance.require_spanning("building M_gamma")
    verts, rays = [], []
    for g, r in zip(gamma, instance.rays):
        if g > 0:
            p = instance.f + r * (1 / g)
            if p not in verts:
                verts.append(p)
        else:
            if r not in rays:
                rays.append(r)
    return VRep(vertices=tuple(verts), rays=tuple(rays))


def body_from_lines(f: QVec, lines: Sequence[Tuple[QVec, Q]]) -> Body:
    """Body from halfplanes a.x <= c; every line must strictly contain f."""
    rows = []
    for a, c in lines:
        a = QVec(a)
        slack = Q(c) - a.dot(f)
        if slack <= 0:
            raise GeometryError("f is not strictly inside a halfplane")
        rows.append(a * (1 / slack))
    return Body(rows=tuple(rows), f=QVec(f))


def body_from_vrep(vrep: VRep, f: QVec) -> Body:
    return body_from_lines(f, vrep_to_hrep(vrep.vertices, vrep.rays))


def split_body(f: QVec, normal: QVec, offset: int) -> Body:
    """The split offset <= normal.x <= offset+1 as a body around f."""
    n = canonical_primitive(normal)
    c = Q(offset)
    val = n.dot(f)
    if not (c < val < c + 1):
        raise GeometryError("f is not strictly inside the split")
    return body_from_lines(f, [(n, c + 1), (-n, -c)])


# ---------------------------------------------------------------------------
# maximal supersets
# ---------------------------------------------------------------------------

def _facet_interval(body: Body, i: int):
    """Whether facet i's relative interior contains a lattice point.

    Returns True/False, or None when the facet is empty or a single point
    (the row is then redundant and can be dropped).
    """
    f = body.f
    bi = body.rows[i]
    sol = line_lattice_points(bi, 1 + bi.dot(f))
    if sol is not None:
        x0, direction = sol
    else:
        # line without lattice points; parametrize from the foot point
        x0 = f + bi * (1 / bi.dot(bi))
        direction = bi.perp()
    lo, hi = None, None
    for j, bj in enumerate(body.rows):
        if j == i:
            continue
        sl = bj.dot(direction)
        rhs = 1 - bj.dot(x0 - f)
        if sl == 0:
            if rhs < 0:
                return None  # facet line misses the body
            continue
        bound = rhs / sl
        if sl > 0:
            hi = bound if hi is None else min(hi, bound)
        else:
            lo = bound if lo is None else max(lo, bound)
    if lo is not None and hi is not None and lo >= hi:
        return None  # empty or single-point facet
    if sol is None:
        return False
    # integer parameters strictly between the endpoints
    a = None if lo is None else (floor(lo) + 1)
    b = None if hi is None else (ceil(hi) - 1)
    if a is None or b is None:
        return True
    return a <= b


def maximal_superset(vrep: VRep, f: QVec) -> Body:
    """A maximal lattice-free body containing the input, with f interior.

    Deterministic facet pushing: iterate facets in sorted row order; relax a
    facet with no interior lattice point in its relative interior until the
    first lattice point blocks it (or drop the facet when nothing blocks).
    """
    f = QVec(f)
    verts = [QVec(v) for v in vrep.vertices] + [f]
    rays = [QVec(r) for r in vrep.rays]

    shape, ext = _cone_shape(rays) if rays else ("zero", [])
    if shape in ("halfplane", "plane"):
        raise GeometryError("input recession cone is full-dimensional")
    if shape == "line":
        n = canonical_primitive(ext[0].perp())
        val = n.dot(f)
        if val.denominator == 1:
            raise GeometryError("f lies on a lattice line of the slab direction")
        c = floor(val)
        body = split_body(f, n, c)
        if not all(body.contains(v) for v in verts):
            raise GeometryError("slab input is not lattice-free")
        return body

    hull = convex_hull(verts)
    if not rays and len(hull) <= 2:
        return _thicken_and_grow(hull, f)

    rows = vrep_to_hrep(hull, rays)
    for a, c in rows:
        if a.dot(f) >= c:
            raise GeometryError("f is not interior to the input")
    body = body_from_lines(f, rows)
    free, w = is_lattice_free(body)
    if not free:
        raise GeometryError(
            f"input is not lattice-free: interior point {tuple(map(qstr, w))}",
            witness=w)
    return _push_to_maximal(body)


def _thicken_and_grow(hull: List[QVec], f: QVec) -> Body:
    if len(hull) == 1:
        # bare point (= f): seed with a diamond inside the nearest-lattice gap
        nearest = QVec((round(f[0]), round(f[1])))
        eps = (abs(nearest[0] - f[0]) + abs(nearest[1] - f[1])) / 2
        quad = [f + QVec((eps, 0)), f + QVec((0, eps)),
                f - QVec((eps, 0)), f - QVec((0, eps))]
        body = body_from_lines(f, vrep_to_hrep(quad))
        return _push_to_maximal(body)
    a, b = hull
    v = b - a
    n = primitive(v.perp())
    c0 = n.dot(a)
    if n.dot(f) != c0:
        raise GeometryError("f is not on the segment it should be interior to")
    if c0.denominator != 1:
        return split_body(f, n, floor(n.dot(f)))
    inner = segment_lattice_points(a, b, open_segment=True)
    if inner:
        raise GeometryError(
            "segment carries a lattice point in its relative interior; "
            "no lattice-free superset keeps f interior", witness=inner[0])
    eps = Q(1, 2 * int(n.dot(n)))
    quad = [a, b, f + n * eps, f - n * eps]
    body = body_from_lines(f, vrep_to_hrep(quad))
    free, w = is_lattice_free(body)
    if not free:
        raise GeometryError("thickened segment is not lattice-free", witness=w)
    return _push_to_maximal(body)


def _push_to_maximal(body: Body) -> Body:
    rows = sorted(body.rows)
    f = body.f
    i = 0
    while i < len(rows):
        current = Body(rows=tuple(rows), f=f)
        kind, d = _rec_kind(current)
        if kind == "line":
            n, lo, hi = _slab_data(current, d)
            return split_body(f, n, floor(n.dot(f)))
        has = _facet_interval(current, i)
        if has is None:
            del rows[i]  # redundant facet
            continue
        if has:
            i += 1
            continue
        # facet i needs pushing: feasible region beyond the facet
        cons = [(bj, 1 + bj.dot(f), True) for j, bj in enumerate(rows) if j != i]
        cons.append((-rows[i], -(1 + rows[i].dot(f)), False))
        z = region_lattice_point(cons)
        if z is None:
            del rows[i]
            continue
        mu = _min_level(rows, i, f, z)
        rows[i] = rows[i] * (1 / mu)
        i += 1
    result = Body(rows=tuple(sorted(rows)), f=f)
    tag = classify(result).tag
    if tag not in MAXIMAL_TAGS:
        raise GeometryError(f"facet pushing did not reach a maximal body ({tag})")
    return result


def _min_level(rows: List[QVec], i: int, f: QVec, z_hint: QVec) -> Q:
    """min b_i.(z-f) over integer z with b_i.(z-f) >= 1 and all other rows
    strict; z_hint certifies nonemptiness and caps the scan."""
    bi = rows[i]
    n = primitive(bi)
    sigma = bi[0] / n[0] if n[0] != 0 else bi[1] / n[1]
    # levels n.z = m integer, value = sigma*(m - n.f) >= 1
    start = n.dot(f) + 1 / sigma
    m = ceil(start)
    m_cap = int(n.dot(z_hint))
    others = [(bj, 1 + bj.dot(f)) for j, bj in enumerate(rows) if j != i]
    while m <= m_cap:
        sol = line_lattice_points(n, Q(m))
        assert sol is not None
        base, step = sol
        lo, hi = None, None
        ok = True
        for a, c in others:
            sl = a.dot(step)
            rhs = c - a.dot(base)
            if sl == 0:
                if a.dot(base) >= c:
                    ok = False
                    break
                continue
            bound = rhs / sl
            if sl > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        if ok:
            t0 = floor(lo) + 1 if lo is not None else None
            t1 = ceil(hi) - 1 if hi is not None else None
            if t0 is None and t1 is None:
                raise AssertionError("unbounded push level")
            if t0 is None:
                t0 = t1
            if t1 is None:
                t1 = t0
            if t0 <= t1:
                return sigma * (Q(m) - n.dot(f))
        m += 1
    raise AssertionError("level scan missed the certified point")
