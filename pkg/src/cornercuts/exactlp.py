"""Exact rational linear programming for the small programs this package needs.

Standard form: minimize c.x subject to A x >= b, x >= 0.  A dense two-phase
tableau simplex with Bland's rule: deterministic pivots, guaranteed
termination, exact arithmetic throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .ratgeom import Q, QMat, QVec

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

__all__ = ["LinearProgram", "LPResult", "solve_lp", "OPTIMAL", "INFEASIBLE", "UNBOUNDED"]


@dataclass(frozen=True)
class LinearProgram:
    """min objective.x  s.t.  rows[i].x >= rhs[i],  x >= 0."""

    objective: QVec
    rows: Tuple[QVec, ...]
    rhs: Tuple[Q, ...]

    def __post_init__(self):
        obj = QVec(self.objective)
        rows = tuple(QVec(r) for r in self.rows)
        rhs = tuple(Q(b) for b in self.rhs)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", rhs)
        if len(rows) != len(rhs):
            raise ValueError("row/rhs count mismatch")
        if any(len(r) != len(obj) for r in rows):
            raise ValueError("row width does not match objective length")


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[QVec] = None
    value: Optional[Q] = None
    tight_rows: Tuple[int, ...] = ()


def _pivot(tableau: List[List[Q]], basis: List[int], row: int, col: int):
    piv = tableau[row][col]
    tableau[row] = [v / piv for v in tableau[row]]
    for i, t_row in enumerate(tableau):
        if i != row and t_row[col] != 0:
            factor = t_row[col]
            tableau[i] = [v - factor * w for v, w in zip(t_row, tableau[row])]
    basis[row] = col


def _run_simplex(tableau: List[List[Q]], basis: List[int], cost: List[Q],
                 ncols: int) -> Tuple[str, List[Q]]:
    """Minimize cost over the tableau rows; returns (status, reduced cost row).

    The cost row (with the objective value in the last slot, negated) is
    maintained explicitly; Bland's rule picks the lowest-index entering and
    leaving candidates.
    """
    m = len(tableau)
    # reduced costs: z_j - c_j form; start from cost and clear basic columns
    red = list(cost) + [Q(0)]
    for i, b in enumerate(basis):
        if red[b] != 0:
            f = red[b]
            red = [v - f * w for v, w in zip(red, tableau[i])]
    while True:
        enter = next((j for j in range(ncols) if red[j] < 0), None)
        if enter is None:
            return OPTIMAL, red
        best_i, best_ratio = None, None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[best_i])):
                    best_i, best_ratio = i, ratio
        if best_i is None:
            return UNBOUNDED, red
        _pivot(tableau, basis, best_i, enter)
        f = red[enter]
        if f != 0:
            red = [v - f * w for v, w in zip(red, tableau[best_i])]


def solve_lp(lp: LinearProgram) -> LPResult:
    """Exact optimum of min c.x, Ax >= b, x >= 0, with the tight row set."""
    m, n = len(lp.rows), len(lp.objective)
    nsurp = m
    # columns: x (n) | surplus (m) | artificial (up to m) | rhs
    art_cols: List[Optional[int]] = [None] * m
    ncols = n + nsurp
    for i in range(m):
        if lp.rhs[i] > 0:
            art_cols[i] = ncols
            ncols += 1
    tableau: List[List[Q]] = []
    basis: List[int] = []
    for i in range(m):
        flip = lp.rhs[i] <= 0
        sign = Q(-1) if flip else Q(1)
        row = [sign * v for v in lp.rows[i]]
        row += [Q(0)] * nsurp
        row[n + i] = -sign  # surplus: A x - s = b
        art = art_cols[i]
        full = row + [Q(0)] * (ncols - len(row)) + [sign * lp.rhs[i]]
        if art is not None:
            full[art] = Q(1)
            basis.append(art)
        else:
            basis.append(n + i)
        tableau.append(full)

    artificial_set = {a for a in art_cols if a is not None}
    if artificial_set:
        cost1 = [Q(0)] * ncols
        for a in artificial_set:
            cost1[a] = Q(1)
        status, red = _run_simplex(tableau, basis, cost1, ncols)
        assert status == OPTIMAL
        if -red[-1] != 0:
            return LPResult(status=INFEASIBLE)
        # drive remaining artificials out of the basis
        for i in range(m - 1, -1, -1):
            if basis[i] in artificial_set:
                col = next((j for j in range(n + nsurp)
                            if tableau[i][j] != 0), None)
                if col is None:
                    del tableau[i]
                    del basis[i]
                else:
                    _pivot(tableau, basis, i, col)
        # freeze artificial columns out
        for row in tableau:
            for a in sorted(artificial_set):
                row[a] = Q(0)

    cost2 = [Q(0)] * ncols
    for j in range(n):
        cost2[j] = lp.objective[j]
    status, _ = _run_simplex(tableau, basis, cost2, n + nsurp)
    if status == UNBOUNDED:
        return LPResult(status=UNBOUNDED)
    xv = [Q(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            xv[b] = tableau[i][-1]
    xq = QVec(xv)
    value = lp.objective.dot(xq)
    tight = tuple(i for i in range(m) if lp.rows[i].dot(xq) == lp.rhs[i])
    return LPResult(status=OPTIMAL, x=xq, value=value, tight_rows=tight)
