"""The blocking polyhedron of valid inequalities gamma.s >= 1.

Builds the finite inequality description (one row per basis pair of rays and
extreme point of the integer-point cone hull), separates arbitrary
nonnegative vectors geometrically (does M_gamma trap an integer point in its
interior?), finds minimum l1/linf-norm cuts both by exact LP and by a
Stern-Brocot search over inflation factors, and certifies minimality and
extremality of cuts.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import List, Optional, Tuple

from .bodies import (
    CornerInstance,
    Cut,
    VRep,
    body_from_cut,
    body_from_vrep,
    cut_from_body,
)
from .exactlp import OPTIMAL, LinearProgram, solve_lp
from .lattice2d import (
    _cone_shape,
    basis_coefficients,
    cone_integer_hull,
    interior_lattice_point,
    region_lattice_point,
)
from .ratgeom import GeometryError, Q, QMat, QVec, qstr, rank

L1 = "l1"
LINF = "linf"

__all__ = [
    "L1", "LINF", "BlockingRow", "BlockingSystem", "Separation", "Cut",
    "build_blocking_system", "separate", "min_norm_cut", "linf_search",
    "is_minimal", "is_extreme",
]


@dataclass(frozen=True)
class BlockingRow:
    """The inequality sum_{j in I} gamma_j s_j(x, I) >= 1."""

    I: Tuple[int, int]
    x: QVec
    s: Tuple[Q, Q]
    coeffs: QVec  # dense length-k coefficient vector

    def lhs(self, gamma) -> Q:
        return self.coeffs.dot(gamma)


@dataclass(frozen=True)
class BlockingSystem:
    instance: CornerInstance
    rows: Tuple[BlockingRow, ...]

    def dump(self) -> str:
        lines = []
        for row in self.rows:
            terms = " + ".join(
                f"{qstr(row.s[t])}*g{row.I[t] + 1}" for t in range(2))
            x = ",".join(qstr(c) for c in row.x)
            lines.append(f"I=({row.I[0] + 1},{row.I[1] + 1}) x=({x}): {terms} >= 1")
        return "\n".join(lines)


@dataclass(frozen=True)
class Separation:
    valid: bool
    x: Optional[QVec] = None
    I: Optional[Tuple[int, int]] = None
    lhs: Optional[Q] = None


def _basis_pairs(instance: CornerInstance):
    k = instance.k
    for i in range(k):
        for j in range(i + 1, k):
            if instance.rays[i].cross(instance.rays[j]) != 0:
                yield i, j


def build_blocking_system(instance: CornerInstance) -> BlockingSystem:
    """One row per basis pair I and extreme point of conv(X(I))."""
    instance.require_spanning("the blocking system")
    rows: List[BlockingRow] = []
    k = instance.k
    for i, j in _basis_pairs(instance):
        hull = cone_integer_hull(instance.f, instance.rays[i], instance.rays[j])
        for x in sorted(hull.vertices):
            s = basis_coefficients(instance.f, instance.rays[i],
                                   instance.rays[j], x)
            assert s is not None
            coeffs = [Q(0)] * k
            coeffs[i], coeffs[j] = s[0], s[1]
            rows.append(BlockingRow(I=(i, j), x=x, s=s, coeffs=QVec(coeffs)))
    return BlockingSystem(instance=instance, rows=tuple(rows))


def _as_gamma(cut, k: int) -> Tuple[Q, ...]:
    gamma = cut.gamma if isinstance(cut, Cut) else tuple(Q(x) for x in cut)
    if len(gamma) != k:
        raise GeometryError("cut length does not match the ray count")
    if any(g < 0 for g in gamma):
        raise GeometryError("cut coefficients must be nonnegative")
    return gamma


def _violated_pair(instance: CornerInstance, gamma, z: QVec) -> Tuple[Tuple[int, int], Tuple[Q, Q]]:
    for i, j in _basis_pairs(instance):
        s = basis_coefficients(instance.f, instance.rays[i], instance.rays[j], z)
        if s is None:
            continue
        if gamma[i] * s[0] + gamma[j] * s[1] < 1:
            return (i, j), s
    raise AssertionError("no violated basis pair for an interior integer point")


def separate(instance: CornerInstance, cut) -> Separation:
    """Valid iff the interior of M_gamma contains no integer point.

    On violation, returns the integer point together with a basis pair whose
    blocking inequality it violates.
    """
    gamma = _as_gamma(cut, instance.k)
    instance.require_spanning("separation")
    zero_rays = [instance.rays[j] for j, g in enumerate(gamma) if g == 0]
    shape, ext = _cone_shape(zero_rays) if zero_rays else ("zero", [])
    if shape in ("pointed", "halfplane", "plane"):
        # full-dimensional recession: integer points deep inside the cone
        if shape == "pointed":
            r_lo, r_hi = ext
        else:
            idx = [j for j, g in enumerate(gamma) if g == 0]
            r_lo, r_hi = None, None
            for a in idx:
                for b in idx:
                    if instance.rays[a].cross(instance.rays[b]) > 0:
                        r_lo, r_hi = instance.rays[a], instance.rays[b]
            assert r_lo is not None
        n1 = QVec((r_lo[1], -r_lo[0]))
        if n1.dot(r_hi) > 0:
            n1 = -n1
        n2 = QVec((r_hi[1], -r_hi[0]))
        if n2.dot(r_lo) > 0:
            n2 = -n2
        z = region_lattice_point([(n1, n1.dot(instance.f), True),
                                  (n2, n2.dot(instance.f), True)])
        assert z is not None
        I, s = _violated_pair(instance, gamma, z)
        lhs = gamma[I[0]] * s[0] + gamma[I[1]] * s[1]
        return Separation(valid=False, x=z, I=I, lhs=lhs)
    vrep = body_from_cut(Cut(gamma=gamma), instance)
    z = interior_lattice_point(vrep.vertices, vrep.rays)
    if z is None:
        return Separation(valid=True)
    I, s = _violated_pair(instance, gamma, z)
    lhs = gamma[I[0]] * s[0] + gamma[I[1]] * s[1]
    return Separation(valid=False, x=z, I=I, lhs=lhs)


# ---------------------------------------------------------------------------
# minimum-norm cuts
# ---------------------------------------------------------------------------

def min_norm_cut(instance: CornerInstance, norm: str,
                 system: Optional[BlockingSystem] = None) -> Tuple[Cut, Q]:
    """Minimum l1- or linf-norm valid inequality via exact LP."""
    if norm not in (L1, LINF):
        raise ValueError(f"unsupported norm {norm!r} (use l1 or linf)")
    if system is None:
        system = build_blocking_system(instance)
    k = instance.k
    if norm == L1:
        lp = LinearProgram(objective=QVec([1] * k),
                           rows=tuple(r.coeffs for r in system.rows),
                           rhs=tuple(Q(1) for _ in system.rows))
        res = solve_lp(lp)
        assert res.status == OPTIMAL
        return Cut(gamma=tuple(res.x), provenance="min-l1"), res.value
    # linf: minimize t with gamma_j <= t and the blocking rows
    rows = [QVec(list(r.coeffs) + [0]) for r in system.rows]
    rhs = [Q(1)] * len(rows)
    for j in range(k):
        e = [Q(0)] * (k + 1)
        e[j], e[k] = Q(-1), Q(1)
        rows.append(QVec(e))
        rhs.append(Q(0))
    lp = LinearProgram(objective=QVec([0] * k + [1]),
                       rows=tuple(rows), rhs=tuple(rhs))
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    return Cut(gamma=tuple(res.x[:k]), provenance="min-linf"), res.value


def _inflation_empty(instance: CornerInstance, alpha: Q) -> bool:
    """Query: does int C(alpha) miss Z^2, where C(alpha) = conv{f + alpha r_j}?"""
    pts = [instance.f + r * alpha for r in instance.rays]
    return interior_lattice_point(pts) is None


def _alpha_denominator_bound(instance: CornerInstance) -> int:
    lcm = 1
    for vec in (instance.f, *instance.rays):
        for e in vec:
            lcm = lcm * e.denominator // gcd(lcm, e.denominator)
    best = 1
    for i, j in _basis_pairs(instance):
        cr = instance.rays[i].cross(instance.rays[j] - instance.rays[i])
        val = abs(cr) * lcm * lcm
        assert val.denominator == 1
        best = max(best, int(val))
    return best


def linf_search(instance: CornerInstance) -> Tuple[Q, Cut]:
    """The largest inflation alpha* with int C(alpha) lattice-free, and the
    induced cut, found by a galloping Stern-Brocot walk over the query
    "is alpha* >= alpha?".

    alpha* makes some integer point tight on a facet of C(alpha*), which
    bounds its denominator; once the walk's interval admits no other rational
    below that bound, the lower end is alpha*.
    """
    instance.require_spanning("the inflation search")
    dbound = _alpha_denominator_bound(instance)

    def query(num: int, den: int) -> bool:
        return _inflation_empty(instance, Q(num, den))

    ln, ld = 0, 1      # query true (C(0+) shrinks to f, not a lattice point)
    hn, hd = 1, 0      # "infinity": query false for large alpha
    while ld + hd <= dbound:
        if query(ln + hn, ld + hd):
            # step right: (ln + t*hn)/(ld + t*hd) increases with t, so the
            # query is true up to some t*; cap t once the denominator passes
            # the bound (no further candidate can hide beyond the cap)
            if hd == 0:
                t = 1
                while query(ln + 2 * t * hn, ld + 2 * t * hd):
                    t *= 2
                lo_t, hi_t = t, 2 * t  # true at lo_t, false at hi_t
                while hi_t - lo_t > 1:
                    mid = (lo_t + hi_t) // 2
                    if query(ln + mid * hn, ld + mid * hd):
                        lo_t = mid
                    else:
                        hi_t = mid
                t_star = lo_t
            else:
                t_cap = (dbound - ld) // hd + 1  # first t past the bound
                if query(ln + t_cap * hn, ld + t_cap * hd):
                    t_star = t_cap
                else:
                    lo_t, hi_t = 1, t_cap
                    while hi_t - lo_t > 1:
                        mid = (lo_t + hi_t) // 2
                        if query(ln + mid * hn, ld + mid * hd):
                            lo_t = mid
                        else:
                            hi_t = mid
                    t_star = lo_t
            ln, ld = ln + t_star * hn, ld + t_star * hd
        else:
            # step left: (hn + s*ln)/(hd + s*ld) decreases with s, so the
            # query is false up to some s*; same denominator cap
            s_cap = (dbound - hd) // ld + 1
            if not query(hn + s_cap * ln, hd + s_cap * ld):
                s_star = s_cap
            else:
                lo_s, hi_s = 1, s_cap  # false at lo_s, true at hi_s
                while hi_s - lo_s > 1:
                    mid = (lo_s + hi_s) // 2
                    if query(hn + mid * ln, hd + mid * ld):
                        hi_s = mid
                    else:
                        lo_s = mid
                s_star = lo_s
            hn, hd = hn + s_star * ln, hd + s_star * ld
    alpha = Q(ln, ld)
    pts = [instance.f + r * alpha for r in instance.rays]
    body = body_from_vrep(VRep(vertices=tuple(pts)), instance.f)
    cut = cut_from_body(body, instance)
    return alpha, Cut(gamma=cut.gamma, provenance="linf-search")


# ---------------------------------------------------------------------------
# minimality and extremality
# ---------------------------------------------------------------------------

def is_minimal(instance: CornerInstance, cut,
               system: Optional[BlockingSystem] = None) -> bool:
    """True iff no different valid inequality dominates gamma componentwise.

    Decided exactly over the blocking polyhedron: gamma is dominated iff some
    coordinate can be lowered while staying valid and below gamma everywhere,
    which is one small LP per coordinate.  (Testing the canonical body
    M_gamma for maximality is not equivalent: a minimal cut with zero entries
    can have a non-maximal M_gamma whose gauge is realized by a larger
    maximal body, e.g. a split containing an unbounded trapezoid.)
    """
    gamma = _as_gamma(cut, instance.k)
    sep = separate(instance, gamma)
    if not sep.valid:
        raise GeometryError("cut is not valid; minimality is undefined")
    if system is None:
        system = build_blocking_system(instance)
    k = instance.k
    box_rows, box_rhs = [], []
    for i in range(k):
        e = [Q(0)] * k
        e[i] = Q(-1)
        box_rows.append(QVec(e))
        box_rhs.append(-gamma[i])
    rows = tuple(r.coeffs for r in system.rows) + tuple(box_rows)
    rhs = tuple(Q(1) for _ in system.rows) + tuple(box_rhs)
    for j in range(k):
        if gamma[j] == 0:
            continue
        obj = [Q(0)] * k
        obj[j] = Q(1)
        res = solve_lp(LinearProgram(objective=QVec(obj), rows=rows, rhs=rhs))
        assert res.status == OPTIMAL  # gamma itself is feasible
        if res.value < gamma[j]:
            return False
    return True


@dataclass(frozen=True)
class ExtremalityCertificate:
    tight_rows: Tuple[int, ...]
    tight_bounds: Tuple[int, ...]
    rank: int


def is_extreme(instance: CornerInstance, cut,
               system: Optional[BlockingSystem] = None
               ) -> Tuple[bool, ExtremalityCertificate]:
    """Vertex test on the blocking polyhedron: the rows tight at gamma plus
    the tight nonnegativity bounds must have rank k."""
    gamma = _as_gamma(cut, instance.k)
    sep = separate(instance, gamma)
    if not sep.valid:
        raise GeometryError("cut is not valid; extremality is undefined")
    if system is None:
        system = build_blocking_system(instance)
    k = instance.k
    tight_rows = tuple(i for i, row in enumerate(system.rows)
                       if row.lhs(gamma) == 1)
    tight_bounds = tuple(j for j in range(k) if gamma[j] == 0)
    mat_rows = [system.rows[i].coeffs for i in tight_rows]
    for j in tight_bounds:
        e = [Q(0)] * k
        e[j] = Q(1)
        mat_rows.append(QVec(e))
    r = rank(QMat(mat_rows)) if mat_rows else 0
    return r == k, ExtremalityCertificate(
        tight_rows=tight_rows, tight_bounds=tight_bounds, rank=r)
