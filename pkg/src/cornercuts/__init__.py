"""Exact cut generation for the two-row corner relaxation.

Generates intersection cuts from maximal lattice-free bodies, describes and
separates over the blocking polyhedron of valid inequalities, computes
minimum-norm cuts, certifies non-extremality by facet tilting, and
enumerates all facets of the convex hull of the relaxation.
"""

from .ratgeom import Q, QVec, QMat, GeometryError

__version__ = "0.1.0"

__all__ = ["Q", "QVec", "QMat", "GeometryError", "__version__"]
