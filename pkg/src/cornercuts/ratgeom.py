"""Exact rational scalars, small vectors, and dense rational matrices.

Every quantity in this package (gauge values, cut coefficients, tilting
directions, search bounds) is rational, and the interesting predicates are
rank and sign conditions that floating point cannot certify.  Scalars are
``fractions.Fraction`` (always in lowest terms, positive denominator), so
equality and hashing are canonical for free.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

Q = Fraction

__all__ = [
    "Q",
    "QVec",
    "QMat",
    "GeometryError",
    "qstr",
    "parse_q",
    "solve_linear",
    "null_space",
    "rank",
    "det",
]


class GeometryError(ValueError):
    """A precondition of a geometric operation is violated.

    Carries an optional ``witness`` (e.g. an interior lattice point that
    certifies a body is not lattice-free).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def qstr(x: Q) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1."""
    return str(Q(x))


def parse_q(text: str) -> Q:
    try:
        return Q(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}: {exc}") from None


class QVec(tuple):
    """Immutable vector of Fractions with exact componentwise arithmetic.

    ``+``/``-`` are componentwise, ``*`` is scalar multiplication (tuple
    repetition is never wanted here).
    """

    def __new__(cls, entries: Iterable) -> "QVec":
        return super().__new__(cls, (Q(e) for e in entries))

    # -- arithmetic (results are Fractions already; skip re-normalization) --
    def __add__(self, other):
        return tuple.__new__(QVec,
                             tuple(a + b for a, b in zip(self, other, strict=True)))

    def __sub__(self, other):
        return tuple.__new__(QVec,
                             tuple(a - b for a, b in zip(self, other, strict=True)))

    def __neg__(self):
        return tuple.__new__(QVec, tuple(-a for a in self))

    def __mul__(self, scalar):
        s = Q(scalar)
        return tuple.__new__(QVec, tuple(a * s for a in self))

    __rmul__ = __mul__

    def dot(self, other) -> Q:
        return sum(a * b for a, b in zip(self, other, strict=True))

    def cross(self, other) -> Q:
        """2D cross product (signed area)."""
        if len(self) != 2 or len(other) != 2:
            raise ValueError("cross is 2D only")
        return self[0] * other[1] - self[1] * other[0]

    def perp(self) -> "QVec":
        """Rotate 90 degrees counterclockwise."""
        if len(self) != 2:
            raise ValueError("perp is 2D only")
        return tuple.__new__(QVec, (-self[1], self[0]))

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return all(a == 0 for a in self)

    def is_integer(self) -> bool:
        return all(a.denominator == 1 for a in self)

    # -- misc -------------------------------------------------------------
    def as_strings(self) -> list:
        return [qstr(a) for a in self]

    def __repr__(self):
        return "QVec(%s)" % (", ".join(qstr(a) for a in self))


def vec(*entries) -> QVec:
    return QVec(entries)


class QMat:
    """Dense rational matrix stored as a tuple of QVec rows."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable):
        rs = tuple(QVec(r) for r in rows)
        if rs:
            w = len(rs[0])
            if any(len(r) != w for r in rs):
                raise ValueError("ragged matrix")
        self.rows = rs

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def col(self, j: int) -> QVec:
        return QVec(r[j] for r in self.rows)

    def mul_vec(self, x: Sequence) -> QVec:
        return QVec(r.dot(x) for r in self.rows)

    def transpose(self) -> "QMat":
        return QMat(zip(*self.rows)) if self.rows else QMat([])

    def __eq__(self, other):
        return isinstance(other, QMat) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "QMat(%s)" % (list(list(map(qstr, r)) for r in self.rows),)

    @staticmethod
    def identity(n: int) -> "QMat":
        return QMat([[Q(int(i == j)) for j in range(n)] for i in range(n)])


def _integer_rows(a: QMat):
    """Scale each row to integers; return (int rows, per-row scale factors)."""
    rows, scales = [], []
    for r in a.rows:
        m = 1
        for x in r:
            m = m * x.denominator // gcd(m, x.denominator)
        rows.append([int(x * m) for x in r])
        scales.append(Q(m))
    return rows, scales


def det(a: QMat) -> Q:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = a.nrows
    if n != a.ncols:
        raise ValueError(f"det needs a square matrix, got {n}x{a.ncols}")
    if n == 0:
        return Q(1)
    m, scales = _integer_rows(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Q(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    d = Q(sign * m[n - 1][n - 1])
    for s in scales:
        d /= s
    return d


def rank(a: QMat) -> int:
    """Exact rank by fraction-free elimination with full pivoting on rows."""
    if a.nrows == 0 or a.ncols == 0:
        return 0
    m, _ = _integer_rows(a)
    nr, nc = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == nr:
            break
    return r


def _rref(a: QMat):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    m = [list(r) for r in a.rows]
    nr, nc = len(m), (len(m[0]) if m else 0)
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return m, pivots


def solve_linear(a: QMat, b: Sequence) -> Optional[QVec]:
    """Solve Ax = b for square nonsingular A; None when A is singular."""
    n = a.nrows
    if n != a.ncols:
        raise ValueError(f"solve_linear needs a square matrix, got {n}x{a.ncols}")
    bv = QVec(b)
    if len(bv) != n:
        raise ValueError("right-hand side has wrong length")
    aug = QMat([list(r) + [bv[i]] for i, r in enumerate(a.rows)])
    m, pivots = _rref(aug)
    if len([p for p in pivots if p < n]) < n:
        return None
    return QVec(m[i][n] for i in range(n))


def null_space(a: QMat) -> list:
    """A basis of {x : Ax = 0} as a list of QVec (empty at full column rank).

    Deterministic: the basis vector for free column j has a 1 in slot j.
    """
    if a.ncols == 0:
        return []
    m, pivots = _rref(a)
    free = [c for c in range(a.ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q(0)] * a.ncols
        v[fc] = Q(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(QVec(v))
    return basis
