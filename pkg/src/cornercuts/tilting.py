"""Facet tilting: non-extremality witnesses with exact certificates.

A tilting system fixes chosen integer points on each facet and the tight
facet set of every ray; its null space gives directions in which the facet
normals can move. A witness decomposes the body's cut into the average of
two different valid cuts obtained by tilting by +/- epsilon, with every
claim (strict rows, lattice-point containment, validity, exact midpoint
identity) checked rather than argued.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .blocking import separate
from .bodies import (
    Body,
    BodyClass,
    CornerInstance,
    Cut,
    QUADRILATERAL,
    body_lattice_points,
    body_vrep,
    classify,
    is_lattice_free,
    ray_incidence,
    _facet_segments,
    _rec_kind,
)
from .lattice2d import (
    _solve2,
    line_lattice_points,
    primitive,
    region_lattice_point,
    segment_lattice_points,
)
from .ratgeom import GeometryError, Q, QMat, QVec, null_space, solve_linear

__all__ = [
    "TiltingSystem", "TiltWitness", "RatioResult",
    "build_tilting_system", "tilt_witness", "simple_tilt_check",
    "ratio_condition", "solve_triangle", "solve_quadrilateral",
    "complete_with_edge", "lattice_free_realizations",
    "find_nonextremality_witness",
]

MAX_HALVINGS = 24


@dataclass(frozen=True)
class TiltingSystem:
    body: Body
    cover: Tuple[Tuple[QVec, ...], ...]
    equalities: QMat                       # homogeneous rows over the 2n unknowns
    strict_triples: Tuple[Tuple[int, int, int], ...]  # (tight facet, slack facet, ray)
    null_basis: Tuple[QVec, ...]

    @property
    def dim(self) -> int:
        return len(self.null_basis)


@dataclass(frozen=True)
class TiltWitness:
    body: Body
    cover: Tuple[Tuple[QVec, ...], ...]
    direction: Tuple[QVec, ...]            # the rows of A-bar
    epsilon: Q
    body_plus: Body
    body_minus: Body
    gamma: Tuple[Q, ...]
    gamma_plus: Tuple[Q, ...]
    gamma_minus: Tuple[Q, ...]


@dataclass(frozen=True)
class RatioResult:
    holds: bool
    t: Optional[Q] = None
    ratios: Tuple[Q, ...] = ()


def _block_row(n: int, entries) -> QVec:
    row = [Q(0)] * (2 * n)
    for i, vec in entries:
        row[2 * i] += vec[0]
        row[2 * i + 1] += vec[1]
    return QVec(row)


def build_tilting_system(body: Body, cover: Sequence[Sequence[QVec]],
                         instance: CornerInstance) -> TiltingSystem:
    """The linear system cutting out the tilting space of (body, cover).

    Equalities: a_i.(y - f) = 1 for y in cover[i], and a_i.r_j = a_i'.r_j for
    facets i, i' both tight at ray j.  The strict rows (tight beats slack on
    every ray) are recorded for later epsilon checks; the null space is that
    of the homogeneous equalities.
    """
    n = len(body.rows)
    if len(cover) != n:
        raise GeometryError("cover must assign a point set to every row")
    cov = tuple(tuple(QVec(y) for y in ys) for ys in cover)
    for i, ys in enumerate(cov):
        for y in ys:
            if not y.is_integer():
                raise GeometryError(f"cover point {y} is not integral")
            if not body.contains(y):
                raise GeometryError(f"cover point {y} is outside the body")
            if body.rows[i].dot(y - body.f) != 1:
                raise GeometryError(f"cover point {y} is not on facet {i + 1}")
    inc = ray_incidence(body, instance)
    rows: List[QVec] = []
    for i, ys in enumerate(cov):
        for y in ys:
            rows.append(_block_row(n, [(i, y - body.f)]))
    strict: List[Tuple[int, int, int]] = []
    for j, tight in enumerate(inc.tight):
        r = instance.rays[j]
        for t in range(1, len(tight)):
            rows.append(_block_row(n, [(tight[0], r), (tight[t], -r)]))
        for i in tight:
            for i2 in range(n):
                if i2 not in tight:
                    strict.append((i, i2, j))
    eq = QMat(rows) if rows else QMat([[Q(0)] * (2 * n)])
    basis = tuple(null_space(eq))
    return TiltingSystem(body=body, cover=cov, equalities=eq,
                         strict_triples=tuple(strict), null_basis=basis)


def _direction_rows(n: int, flat: QVec) -> Tuple[QVec, ...]:
    return tuple(QVec((flat[2 * i], flat[2 * i + 1])) for i in range(n))


def _tilted(body: Body, direction: Tuple[QVec, ...], eps: Q, sign: int) -> Body:
    rows = tuple(b + d * (eps * sign) for b, d in zip(body.rows, direction))
    return Body(rows=rows, f=body.f)


def _formula_gauge(body: Body, instance: CornerInstance) -> Tuple[Q, ...]:
    """Clamped max-formula values; well-defined for any normal matrix (tilted
    splits are wedges whose true gauge is undefined, but the formula value is
    what the tilting identities are about)."""
    return tuple(max(max(b.dot(r) for b in body.rows), Q(0))
                 for r in instance.rays)


def _formula_incidence(body: Body, instance: CornerInstance):
    """(psi, tight sets) via the max formula, without recession checks."""
    psi, tight = [], []
    for r in instance.rays:
        vals = [b.dot(r) for b in body.rows]
        m = max(vals)
        psi.append(m)
        tight.append(tuple(i for i, v in enumerate(vals) if v == m))
    return tuple(psi), tuple(tight)


def tilt_witness(body: Body, cover: Sequence[Sequence[QVec]],
                 instance: CornerInstance,
                 system: Optional[TiltingSystem] = None) -> Optional[TiltWitness]:
    """A certified non-extremality witness from the tilting space, if the
    chosen direction produces one.

    Picks the first null-space basis element that changes some tight ray
    product, then halves epsilon until the strict rows hold, no new lattice
    points enter (bounded bodies), both induced cuts separate as valid, and
    the exact midpoint identity holds.  Returns None when no basis element
    moves any ray or no epsilon up to the halving cap passes all checks.
    """
    ts = system or build_tilting_system(body, cover, instance)
    if ts.dim < 1:
        raise GeometryError("tilting space has no degrees of freedom")
    _, tight_sets = _formula_incidence(body, instance)
    n = len(body.rows)
    direction = None
    for cand in ts.null_basis:
        rows = _direction_rows(n, cand)
        if any(rows[i].dot(instance.rays[j]) != 0
               for j, tight in enumerate(tight_sets) for i in tight):
            direction = rows
            break
    if direction is None:
        return None
    gamma = _formula_gauge(body, instance)
    bounded = _rec_kind(body)[0] == "zero"
    ybody = set(map(tuple, body_lattice_points(body))) if bounded else None
    spanning = instance.spans_plane()

    eps = Q(1)
    for _ in range(MAX_HALVINGS):
        eps /= 2
        plus = _tilted(body, direction, eps, +1)
        minus = _tilted(body, direction, eps, -1)
        if not _strict_rows_hold(ts, plus, instance) or \
           not _strict_rows_hold(ts, minus, instance):
            continue
        gp = _formula_gauge(plus, instance)
        gm = _formula_gauge(minus, instance)
        if bounded and not (_contained_points(plus, ybody)
                            and _contained_points(minus, ybody)):
            continue
        if any(g != (p + m) / 2 for g, p, m in zip(gamma, gp, gm)) or gp == gm:
            continue
        if spanning:
            if not separate(instance, gp).valid or not separate(instance, gm).valid:
                continue
        else:
            # without the conical-hull assumption the separation oracle does
            # not apply; certify through an explicit lattice-free realization
            if not (_valid_by_completion(plus, ts.cover, direction, body, instance)
                    and _valid_by_completion(minus, ts.cover, direction, body,
                                             instance)):
                continue
        return TiltWitness(body=body, cover=ts.cover, direction=direction,
                           epsilon=eps, body_plus=plus, body_minus=minus,
                           gamma=gamma, gamma_plus=gp, gamma_minus=gm)
    return None


def _strict_rows_hold(ts: TiltingSystem, tilted: Body,
                      instance: CornerInstance) -> bool:
    for i, i2, j in ts.strict_triples:
        r = instance.rays[j]
        if tilted.rows[i].dot(r) <= tilted.rows[i2].dot(r):
            return False
    return True


def _contained_points(tilted: Body, ybody: set) -> bool:
    kind, _ = _rec_kind(tilted)
    if kind != "zero":
        return False
    return all(tuple(p) in ybody for p in body_lattice_points(tilted))


def _valid_by_completion(tilted: Body, cover, direction, original: Body,
                         instance: CornerInstance) -> bool:
    """Certify a tilted cut by exhibiting a lattice-free body with the same
    gauge (the tilted body itself, or its add-edge completion)."""
    free, _ = is_lattice_free(tilted)
    if free:
        return True
    keep = [y for ys in cover for y in ys]
    for i, d in enumerate(direction):
        if d.is_zero() or len(cover[i]) != 1:
            continue
        v = primitive(original.rows[i].perp())
        try:
            complete_with_edge(tilted, instance, i, cover[i][0], v, keep)
            return True
        except GeometryError:
            continue
    return False


def simple_tilt_check(body: Body, facet_index: int,
                      instance: CornerInstance) -> Optional[TiltWitness]:
    """Tilt one facet around its unique relative-interior integer point.

    Preconditions (domain errors): the body is a polytope, facet_index is an
    active facet whose relative interior contains exactly one integer point,
    and no ray intersection sits on the facet's endpoints.  Returns a witness
    when some non-integer ray intersection lies in the facet's relative
    interior, None otherwise.
    """
    kind, _ = _rec_kind(body)
    if kind != "zero":
        raise GeometryError("simple tilts need a bounded body")
    vrep = body_vrep(body)
    facets = _facet_segments(body, vrep)
    seg = next(((p, q) for row, p, q in facets if row == facet_index), None)
    if seg is None:
        raise GeometryError(f"row {facet_index + 1} is not an active facet")
    relint = segment_lattice_points(*seg, open_segment=True)
    if len(relint) != 1:
        raise GeometryError(
            "simple tilts need exactly one integer point in the facet interior")
    inc = ray_incidence(body, instance)
    if any(facet_index in tight and len(tight) >= 2 for tight in inc.tight):
        raise GeometryError("a ray intersection sits on the facet's boundary")
    moving = [j for j, tight in enumerate(inc.tight)
              if tight == (facet_index,) and inc.points[j] is not None
              and not inc.points[j].is_integer()]
    if not moving:
        return None
    cover = []
    for row, p, q in facets:
        if row == facet_index:
            cover.append((relint[0],))
        else:
            cover.append(tuple(segment_lattice_points(p, q)))
    # cover indexed by active facets; align to body rows
    aligned: List[Tuple[QVec, ...]] = [()] * len(body.rows)
    for (row, _, _), ys in zip(facets, cover):
        aligned[row] = ys
    witness = tilt_witness(body, aligned, instance)
    if witness is None:
        raise GeometryError("simple tilt failed to produce a witness")
    return witness


# ---------------------------------------------------------------------------
# ratio condition for quadrilaterals
# ---------------------------------------------------------------------------

def ratio_condition(body: Body, instance: CornerInstance) -> RatioResult:
    """The quadrilateral nondegeneracy condition.

    Fails exactly when the four edge-split ratios admit the scalar pattern
    (t, 1/t, t, 1/t), i.e. when their product is 1; then the 8x8 corner-ray
    system is singular and the tilting dimension is positive.
    """
    cls = classify(body)
    if cls.tag != QUADRILATERAL:
        raise GeometryError("ratio condition applies to maximal quadrilaterals")
    inc = ray_incidence(body, instance)
    hit_vertices = {inc.points[j] for j in range(instance.k)
                    if inc.points[j] is not None and len(inc.tight[j]) >= 2}
    corners = [p for p, _ in cls.facets]
    if any(v not in hit_vertices for v in corners):
        raise GeometryError("all four corner rays are required")
    ratios = []
    for i in range(4):
        y = cls.facet_points[i][0] - body.f
        p1 = corners[i] - body.f
        p2 = cls.facets[i][1] - body.f
        sol = solve_linear(QMat([[p1[0], p2[0]], [p1[1], p2[1]]]), y)
        assert sol is not None and sol[0] > 0 and sol[1] > 0
        ratios.append(sol[1] / sol[0])
    product = ratios[0] * ratios[1] * ratios[2] * ratios[3]
    if product == 1:
        delta = ratios[3]
        return RatioResult(holds=False, t=delta / (1 + delta), ratios=tuple(ratios))
    return RatioResult(holds=True, ratios=tuple(ratios))


# ---------------------------------------------------------------------------
# unique triangle / quadrilateral solves
# ---------------------------------------------------------------------------

def _chain_solve(f: QVec, directions: Sequence[QVec], points: Sequence[QVec],
                 check: bool) -> Optional[Body]:
    n = len(directions)
    dirs = [QVec(r) for r in directions]
    ys = [QVec(y) - f for y in points]
    for i in range(n):
        if dirs[i].cross(dirs[(i + 1) % n]) == 0:
            raise GeometryError("consecutive corner directions are dependent")
        if ys[i].is_zero():
            raise GeometryError("facet point coincides with f")
    # a_1 lies on the line a.y1 = 1: base point + tau * perp(y1)
    q1 = ys[0] * (1 / ys[0].dot(ys[0]))
    d1 = ys[0].perp()
    a_base, a_dir = [q1], [d1]
    for i in range(1, n):
        det = dirs[i].cross(ys[i])
        if det == 0:
            raise GeometryError("degenerate corner data (point along corner ray)")
        a_base.append(_solve2(dirs[i], ys[i], a_base[i - 1].dot(dirs[i]), Q(1)))
        a_dir.append(_solve2(dirs[i], ys[i], a_dir[i - 1].dot(dirs[i]), Q(0)))
    # closing condition: a_n . r_1 = a_1 . r_1
    coef = (a_dir[n - 1] - d1).dot(dirs[0])
    rhs = -(a_base[n - 1] - q1).dot(dirs[0])
    if coef == 0:
        return None  # singular system
    tau = rhs / coef
    rows = tuple(a_base[i] + a_dir[i] * tau for i in range(n))
    if any(r.is_zero() for r in rows):
        if check:
            raise GeometryError("solved normals are degenerate")
        return None
    body = Body(rows=rows, f=QVec(f))
    if check:
        _verify_corner_solution(body, dirs, [QVec(p) for p in points])
    return body


def _verify_corner_solution(body: Body, dirs: List[QVec], points: List[QVec]):
    n = len(dirs)
    f = body.f
    for i in range(n):
        vals = [b.dot(dirs[i]) for b in body.rows]
        m = max(vals)
        tight = {j for j, v in enumerate(vals) if v == m}
        if m <= 0 or tight != {i, (i - 1) % n}:
            raise GeometryError(
                f"direction {i + 1} is not the corner ray of facets "
                f"{(i - 1) % n + 1} and {i + 1}")
    for i in range(n):
        y = points[i]
        for l, b in enumerate(body.rows):
            v = b.dot(y - f)
            if l == i and v != 1:
                raise GeometryError(f"point {i + 1} left its facet")
            if l != i and v >= 1:
                raise GeometryError(f"point {i + 1} is not in the facet interior")


def solve_triangle(f: QVec, directions: Sequence[QVec], points: Sequence[QVec],
                   check: bool = True) -> Optional[Body]:
    """The unique triangle with the given three corner-ray directions and one
    point on the relative interior of each facet (facet i spans corners i and
    i+1).  Scaling the directions does not change the result."""
    if len(directions) != 3 or len(points) != 3:
        raise GeometryError("three directions and three points are required")
    return _chain_solve(QVec(f), directions, points, check)


def solve_quadrilateral(f: QVec, directions: Sequence[QVec],
                        points: Sequence[QVec], check: bool = True) -> Optional[Body]:
    """The unique quadrilateral with four corner rays and one integer point
    per facet; None exactly when the closing system is singular (ratio
    product 1)."""
    if len(directions) != 4 or len(points) != 4:
        raise GeometryError("four directions and four points are required")
    return _chain_solve(QVec(f), directions, points, check)


# ---------------------------------------------------------------------------
# explicit lattice-free realizations (the add-edge construction)
# ---------------------------------------------------------------------------

def complete_with_edge(body: Body, instance: CornerInstance, facet_index: int,
                       anchor: QVec, v_facet: QVec,
                       keep: Sequence[QVec] = ()) -> Body:
    """Append one halfspace cutting off the conflicting lattice points of a
    tilted body.

    The new edge is tight at the first conflicting lattice point on the
    original facet line (anchor +/- v_facet side), strictly contains every
    ray intersection, keeps the anchor points, and leaves all gauge values
    unchanged.  Returns the body unchanged when it is already lattice-free.
    """
    anchor = QVec(anchor)
    v = primitive(v_facet)
    free, _ = is_lattice_free(body)
    if free:
        return body
    f = body.f
    n_line = v.perp()
    # interior points on the line: anchor + t v, integer t
    lo, hi = None, None
    for b in body.rows:
        sl = b.dot(v)
        rhs = 1 - b.dot(anchor - f)
        if sl == 0:
            if rhs <= 0:
                raise GeometryError("anchor line misses the body interior")
            continue
        bound = rhs / sl
        if sl > 0:
            hi = bound if hi is None else min(hi, bound)
        else:
            lo = bound if lo is None else max(lo, bound)
    from math import ceil, floor
    t_lo = None if lo is None else floor(lo) + 1
    t_hi = None if hi is None else ceil(hi) - 1
    if t_lo is not None and t_hi is not None and t_lo > t_hi:
        raise GeometryError("no conflicting lattice point found on the line")
    if t_lo is not None and t_lo >= 1:
        y4 = anchor + v * t_lo
    elif t_hi is not None and t_hi <= -1:
        y4 = anchor + v * t_hi
    else:
        raise GeometryError(
            "conflicts on both sides of the anchor; no single edge suffices")

    psi, _ = _formula_incidence(body, instance)
    if any(p <= 0 for p in psi):
        raise GeometryError("every ray must intersect the tilted body")
    nf4 = n_line.dot(y4 - f)
    if nf4 == 0:
        raise GeometryError("f lies on the facet line")
    c0 = n_line * (1 / nf4)
    n_rot = (y4 - f).perp()
    sgn = n_rot.dot(anchor - f)
    assert sgn != 0
    direction = Q(-1) if sgn > 0 else Q(1)
    mu = Q(1)
    for _ in range(MAX_HALVINGS):
        mu /= 2
        c = c0 + n_rot * (mu * direction)
        if c.dot(y4 - f) != 1:
            raise AssertionError("rotation around y4 broke tightness")
        if any(c.dot(r) >= p for r, p in zip(instance.rays, psi)):
            continue
        if any(c.dot(QVec(p) - f) > 1 for p in keep):
            continue
        candidate = Body(rows=body.rows + (c,), f=f)
        free, _ = is_lattice_free(candidate)
        if not free:
            continue
        new_psi, _ = _formula_incidence(candidate, instance)
        assert new_psi == psi
        return candidate
    raise GeometryError("no rotation angle validated the additional edge")


def lattice_free_realizations(witness: TiltWitness,
                              instance: CornerInstance) -> Tuple[Body, Body]:
    """Explicit lattice-free bodies realizing the witness's two cuts.

    Tilted bodies that are not lattice-free get the additional edge of the
    add-edge construction, anchored at the singleton cover point of a tilted
    facet."""
    out = []
    keep = [y for cover_i in witness.cover for y in cover_i]
    for tilted in (witness.body_plus, witness.body_minus):
        free, _ = is_lattice_free(tilted)
        if free:
            out.append(tilted)
            continue
        candidates = [i for i, d in enumerate(witness.direction)
                      if not d.is_zero() and len(witness.cover[i]) == 1]
        completed = None
        errors = []
        for i in candidates:
            v = primitive(witness.body.rows[i].perp())
            try:
                completed = complete_with_edge(
                    tilted, instance, i, witness.cover[i][0], v, keep)
                break
            except GeometryError as exc:
                errors.append(str(exc))
        if completed is None:
            raise GeometryError(
                "no tilted facet admits the additional edge: " + "; ".join(errors))
        out.append(completed)
    return out[0], out[1]


def find_nonextremality_witness(body: Body,
                                instance: CornerInstance) -> Optional[TiltWitness]:
    """Heuristic harness: try singleton-per-facet covers first, then the full
    facet point sets."""
    cls = classify(body)
    if not cls.facets:
        # splits: anchor one line with a single point, fix the other with two
        if cls.tag != "Split":
            return None
        covers = _split_covers(body, cls, instance)
    else:
        singles: List[Tuple[QVec, ...]] = [()] * len(body.rows)
        fulls: List[Tuple[QVec, ...]] = [()] * len(body.rows)
        for row, pts, (p, q) in zip(cls.facet_rows, cls.facet_points, cls.facets):
            singles[row] = (pts[0],)
            fulls[row] = tuple(segment_lattice_points(p, q))
        covers = [tuple(singles), tuple(fulls)]
    for cover in covers:
        try:
            ts = build_tilting_system(body, cover, instance)
        except GeometryError:
            continue
        if ts.dim < 1:
            continue
        w = tilt_witness(body, cover, instance, system=ts)
        if w is not None:
            return w
    return None


def _split_anchor(body: Body, instance: CornerInstance, row: int) -> Optional[QVec]:
    """A lattice point y on facet `row`'s line with every ray hit on that line
    inside (y - v, y + v); None when the hits span too far."""
    b = body.rows[row]
    sol = line_lattice_points(b, 1 + b.dot(body.f))
    if sol is None:
        return None
    base, step = sol
    inc = ray_incidence(body, instance)
    ts = []
    for j, tight in enumerate(inc.tight):
        p = inc.points[j]
        if p is None or row not in tight:
            continue
        d = p - base
        ts.append(d.dot(step) / step.dot(step))
    if not ts:
        return base
    t_min, t_max = min(ts), max(ts)
    from math import ceil, floor
    for t0 in range(floor(t_min), ceil(t_max) + 1):
        if t0 - 1 < t_min and t_max < t0 + 1:
            return base + step * t0
    return None


def _split_covers(body: Body, cls: BodyClass,
                  instance: CornerInstance) -> List[Tuple[Tuple[QVec, ...], ...]]:
    """Candidate covers for a split: one facet anchored at a single lattice
    point near its ray hits, the other fixed by two lattice points."""
    covers = []
    rows = list(range(len(body.rows)))
    for single in rows:
        anchor = _split_anchor(body, instance, single)
        if anchor is None:
            continue
        cover: List[Tuple[QVec, ...]] = []
        ok = True
        for i, b in enumerate(body.rows):
            if i == single:
                cover.append((anchor,))
                continue
            sol = line_lattice_points(b, 1 + b.dot(body.f))
            if sol is None:
                ok = False
                break
            base, step = sol
            cover.append((base, base + step))
        if ok:
            covers.append(tuple(cover))
    return covers
