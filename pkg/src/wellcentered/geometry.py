"""Coordinate-level primitives for simplices.

Circumcenters are computed from the bordered Gram system

    [ 2 <v_i, v_j>   1 ] [alpha ]   [ <v_i, v_i> ]
    [      1^T       0 ] [lambda] = [     1      ]

after translating the first vertex to the origin, which reduces it to the
n x n system ``2 V^T V alpha' = diag(V^T V)`` on the edge vectors
``V = [v_1 - v_0, ..., v_n - v_0]``.  Only Gram entries appear, so the same
code handles simplices embedded in a higher-dimensional ambient space.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "Simplex",
    "CircumData",
    "DegenerateSimplexError",
    "as_simplex",
    "circumcenter",
    "circumcenters",
    "edge_gram",
    "det_A",
    "det_Ai",
    "system_matrix",
    "project_to_aff",
    "barycentric_coordinates",
    "signed_volume",
    "diameter",
]


class DegenerateSimplexError(ValueError):
    """Raised when an operation needs affinely independent vertices."""


@dataclass(frozen=True)
class Tolerance:
    """Relative band and absolute floor used to decide near-boundary cases.

    Quantities are compared after normalization by a scale (usually a
    circumradius); ``band(scale)`` is the half-width of the BOUNDARY zone.
    """

    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if not (self.rel > 0 and self.abs > 0):
            raise ValueError("tolerances must be positive")

    def band(self, scale: float = 1.0) -> float:
        return max(self.rel * abs(scale), self.abs)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True, eq=False)
class Simplex:
    """An ordered list of ``dim + 1`` points in R^m with m >= dim."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("vertices must be a 2-d array with at least one row")
        if v.shape[0] - 1 > v.shape[1]:
            raise ValueError(
                f"{v.shape[0] - 1}-simplex does not fit in ambient dimension {v.shape[1]}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex coordinates must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def ambient_dim(self) -> int:
        return self.vertices.shape[1]

    def __len__(self):
        return self.vertices.shape[0]

    def __getitem__(self, i):
        return self.vertices[i]

    def facet(self, i: int) -> "Simplex":
        """The facet opposite vertex ``i``."""
        return Simplex(np.delete(self.vertices, i, axis=0))

    def face(self, idx) -> "Simplex":
        return Simplex(self.vertices[list(idx)])

    def cone(self, apex) -> "Simplex":
        """``cone(apex, self)`` with the apex appended as the last vertex."""
        return Simplex(np.vstack([self.vertices, np.asarray(apex, dtype=float)]))

    def __repr__(self):
        return f"Simplex(dim={self.dim}, vertices={self.vertices.tolist()})"


def as_simplex(obj) -> Simplex:
    return obj if isinstance(obj, Simplex) else Simplex(obj)


@dataclass(frozen=True, eq=False)
class CircumData:
    barycentric: np.ndarray
    lam: float
    center: np.ndarray
    radius: float
    degenerate: bool


def diameter(points) -> float:
    p = np.asarray(points, dtype=float)
    if len(p) < 2:
        return 0.0
    d = p[:, None, :] - p[None, :, :]
    return float(np.sqrt((d * d).sum(-1).max()))


def _edge_basis(v: np.ndarray):
    """Orthonormal basis of the edge span and the edge vectors in that basis.

    QR is Gram-Schmidt on the edge vectors; ``vt`` is the square matrix of
    edge coordinates in the basis, so ``det(vt)`` is n! times the signed
    n-volume measured inside aff(simplex).
    """
    e = (v[1:] - v[0]).T  # m x n
    q, r = np.linalg.qr(e)
    return q, r


def _vtilde_det(v: np.ndarray) -> float:
    n = v.shape[0] - 1
    if n == 0:
        return 1.0
    e = v[1:] - v[0]
    if e.shape[0] == e.shape[1]:
        return float(np.linalg.det(e))
    r = np.linalg.qr(e.T, mode="r")
    return float(np.prod(np.diag(r)))


def circumcenter(simplex, tol: Tolerance = DEFAULT_TOL) -> CircumData:
    s = as_simplex(simplex)
    v = s.vertices
    n = s.dim
    if n == 0:
        return CircumData(np.ones(1), 0.0, v[0].copy(), 0.0, False)
    scale = diameter(v)
    vt_det = _vtilde_det(v)
    degenerate = scale == 0.0 or abs(vt_det) < tol.rel * scale**n
    if degenerate:
        nan = np.full(n + 1, np.nan)
        return CircumData(nan, np.nan, np.full(s.ambient_dim, np.nan), np.nan, True)
    e = v[1:] - v[0]
    g = e @ e.T
    rhs = np.diag(g).copy()
    a = np.linalg.solve(2.0 * g, rhs)
    alpha = np.concatenate([[1.0 - a.sum()], a])
    center = alpha @ v
    radius = float(np.linalg.norm(center - v[0]))
    lam = radius**2 - float(center @ center)
    return CircumData(alpha, lam, center, radius, False)


def circumcenters(vertices: np.ndarray):
    """Vectorized circumcenters for a stack of simplices.

    ``vertices`` has shape (k, n+1, m).  Returns ``(alpha, center, radius)``
    with shapes (k, n+1), (k, m), (k,).  No degeneracy screening; callers
    that need it use :func:`circumcenter`.
    """
    v = np.asarray(vertices, dtype=float)
    e = v[:, 1:, :] - v[:, :1, :]
    g = e @ np.swapaxes(e, 1, 2)
    rhs = np.diagonal(g, axis1=1, axis2=2)
    a = np.linalg.solve(2.0 * g, rhs[..., None])[..., 0]
    alpha = np.concatenate([1.0 - a.sum(-1, keepdims=True), a], axis=1)
    center = np.einsum("ki,kim->km", alpha, v)
    radius = np.linalg.norm(center - v[:, 0, :], axis=1)
    return alpha, center, radius


def edge_gram(simplex) -> np.ndarray:
    v = as_simplex(simplex).vertices
    e = v[1:] - v[0]
    return e @ e.T


def system_matrix(vertices) -> tuple[np.ndarray, np.ndarray]:
    """The bordered matrix ``A`` and right-hand side ``b`` for a simplex.

    Vertices are translated by the first vertex first; determinants of ``A``
    and of every column-replaced ``A_i`` are unchanged by that translation.
    """
    v = np.asarray(vertices, dtype=float)
    v = v - v[0]
    k = v.shape[0]
    gram = v @ v.T
    a = np.zeros((k + 1, k + 1))
    a[:k, :k] = 2.0 * gram
    a[:k, k] = 1.0
    a[k, :k] = 1.0
    b = np.empty(k + 1)
    b[:k] = np.diag(gram)
    b[k] = 1.0
    return a, b


def _cone_vertices(facet, apex) -> np.ndarray:
    f = as_simplex(facet).vertices
    apex = np.asarray(apex, dtype=float)
    if apex.shape != (f.shape[1],):
        raise ValueError("apex must live in the facet's ambient space")
    return np.vstack([f, apex])


def det_A(facet, apex) -> float:
    """Determinant of the circumcenter system for ``cone(apex, facet)``.

    Equals ``-2**n * det(Vt)**2``: never positive, and zero exactly when the
    cone is degenerate.
    """
    a, _ = system_matrix(_cone_vertices(facet, apex))
    return float(np.linalg.det(a))


def det_Ai(facet, apex, i: int) -> float:
    """Determinant of ``A`` with column ``i`` replaced by ``b``.

    Vertex order is the facet's vertices followed by the apex, so
    ``i == len(facet)`` addresses the apex.  As a function of the apex
    coordinates this is a polynomial of total degree at most 3.
    """
    v = _cone_vertices(facet, apex)
    if not 0 <= i < v.shape[0]:
        raise IndexError(f"vertex index {i} out of range for a {v.shape[0] - 1}-simplex")
    a, b = system_matrix(v)
    a[:, i] = b
    return float(np.linalg.det(a))


def project_to_aff(point, simplex, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projection of ``point`` onto the affine hull of ``simplex``."""
    s = as_simplex(simplex)
    v = s.vertices
    p = np.asarray(point, dtype=float)
    if s.dim == 0:
        return v[0].copy()
    if circumcenter(s, tol).degenerate:
        raise DegenerateSimplexError("degenerate affine hull")
    q, _ = _edge_basis(v)
    d = p - v[0]
    return v[0] + q @ (q.T @ d)


def barycentric_coordinates(point, simplex, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Barycentric coordinates of the projection of ``point`` onto aff(simplex)."""
    s = as_simplex(simplex)
    v = s.vertices
    if s.dim == 0:
        return np.ones(1)
    if circumcenter(s, tol).degenerate:
        raise DegenerateSimplexError("degenerate affine hull")
    e = (v[1:] - v[0]).T
    d = np.asarray(point, dtype=float) - v[0]
    a, *_ = np.linalg.lstsq(e, d, rcond=None)
    return np.concatenate([[1.0 - a.sum()], a])


def signed_volume(simplex) -> float:
    s = as_simplex(simplex)
    if s.ambient_dim != s.dim:
        raise ValueError("signed volume needs ambient dimension equal to simplex dimension")
    v = s.vertices
    n = s.dim
    if n == 0:
        return 1.0
    return float(np.linalg.det(v[1:] - v[0])) / factorial(n)
