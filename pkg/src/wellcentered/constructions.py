"""Explicit well-centered constructions and coordinate fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .complex import (
    InvalidMeshError,
    SphereTriangulation,
    TetMesh,
    degree_list,
    face_angles_acute_at,
    link_of,
)
from .geometry import DEFAULT_TOL, Tolerance, circumcenter
from .predicates import is_acute_triangle, is_n_well_centered

__all__ = [
    "KgonSpec",
    "Surface",
    "kgon_sphere",
    "icosahedron_surface",
    "octahedron_surface",
    "cone_to_origin",
    "insert_degree3_3wc",
    "insert_degree3_2wc",
    "insert_degree4_2wc",
    "remove_link_vertex",
    "FIXTURES",
    "load_fixture",
    "fixture_info",
    "PreconditionError",
]


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class KgonSpec:
    k: int
    ring_height: float = 0.352
    ring_radius: float = 0.936
    rings: int = 2

    def __post_init__(self):
        if self.k < 4:
            raise ValueError("k must be at least 4")
        if self.rings < 2:
            raise ValueError("need at least two rings")
        if abs(self.ring_radius**2 + self.ring_height**2 - 1.0) > 1e-12:
            raise ValueError("ring vertices must lie on the unit sphere")


@dataclass(frozen=True, eq=False)
class Surface:
    """A triangulated sphere with coordinates."""

    points: np.ndarray
    sphere: SphereTriangulation

    @property
    def triangles(self):
        return self.sphere.triangles


def _ring_latitudes(spec: KgonSpec):
    if spec.rings == 2:
        return [(spec.ring_height, spec.ring_radius), (-spec.ring_height, spec.ring_radius)]
    # equal-area bands: z is uniform on the sphere
    zs = [1.0 - 2.0 * (j + 1) / (spec.rings + 1) for j in range(spec.rings)]
    return [(z, sqrt(1.0 - z * z)) for z in zs]


def kgon_sphere(spec: KgonSpec | int, check: bool = True) -> Surface:
    """Poles plus stacked regular k-gons, each ring a half step out of phase.

    Vertex 0 is the north pole, vertex 1 the south pole, ring ``j`` vertex
    ``i`` is ``2 + j*k + i``.  With ``check`` every triangle is verified acute
    and farther than ``1/sqrt(2)`` from the origin.
    """
    if isinstance(spec, int):
        spec = KgonSpec(spec)
    k = spec.k
    pts = [(0.0, 0.0, 1.0), (0.0, 0.0, -1.0)]
    lats = _ring_latitudes(spec)
    for j, (z, r) in enumerate(lats):
        for i in range(k):
            t = (2 * i + j) * np.pi / k
            pts.append((r * np.cos(t), r * np.sin(t), z))
    pts = np.array(pts)

    def v(j, i):
        return 2 + j * k + i % k

    tris = []
    last = len(lats) - 1
    for i in range(k):
        tris.append((0, v(0, i), v(0, i + 1)))
        tris.append((1, v(last, i + 1), v(last, i)))
    for j in range(last):
        # ring j+1 vertex i sits between ring j vertices i and i+1
        for i in range(k):
            tris.append((v(j, i), v(j + 1, i), v(j, i + 1)))
            tris.append((v(j, i + 1), v(j + 1, i), v(j + 1, i + 1)))
    surf = Surface(pts, SphereTriangulation(len(pts), tris))
    if check:
        _check_isosceles_surface(surf)
    return surf


def _check_isosceles_surface(surf: Surface):
    for t in surf.triangles:
        p = surf.points[list(t)]
        if not is_acute_triangle(p).satisfied:
            raise ValueError(f"triangle {t} is not acute")
        n = np.cross(p[1] - p[0], p[2] - p[0])
        dist = abs(n @ p[0]) / np.linalg.norm(n)
        if dist <= 1.0 / sqrt(2.0):
            raise ValueError(f"triangle {t} is too close to the center")


def icosahedron_surface() -> Surface:
    g = (1.0 + sqrt(5.0)) / 2.0
    raw = []
    for a in (-1.0, 1.0):
        for b in (-g, g):
            raw += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    pts = np.array(raw)
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    d = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
    edge = d[d > 1e-9].min()
    adj = np.abs(d - edge) < 1e-9
    tris = [(a, b, c) for a in range(12) for b in range(a + 1, 12) for c in range(b + 1, 12)
            if adj[a, b] and adj[b, c] and adj[a, c]]
    return Surface(pts, SphereTriangulation(12, tris))


def octahedron_surface() -> Surface:
    pts = np.array([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)], float)
    tris = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return Surface(pts, SphereTriangulation(6, tris))


def cone_to_origin(surface: Surface, tol: Tolerance = DEFAULT_TOL) -> TetMesh:
    """One tetrahedron per surface triangle with apex at the origin (vertex 0)."""
    r = np.linalg.norm(surface.points, axis=1)
    if r.min() <= 0 or np.ptp(r) > 1e-9 * r.max():
        raise ValueError("surface is not on a sphere about the origin")
    pts = np.vstack([np.zeros((1, 3)), surface.points])
    tets = [(0, a + 1, b + 1, c + 1) for a, b, c in surface.triangles]
    return TetMesh(pts, tets, tol=tol)


# --- vertex insertion ------------------------------------------------------

def _angle_cos(at, p, q):
    a = p - at
    b = q - at
    return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))


def _replace_tets(mesh: TetMesh, remove, add, new_point):
    verts = np.vstack([mesh.vertices, np.asarray(new_point, dtype=float)[None]])
    keep = [t for i, t in enumerate(mesh.tets.tolist()) if i not in set(remove)]
    return TetMesh(verts, keep + [list(t) for t in add], tol=mesh.tol)


def insert_degree3_3wc(mesh: TetMesh, u: int, tet: int, tol: Tolerance = DEFAULT_TOL,
                       max_halvings: int = 64) -> TetMesh:
    """Split tetrahedron ``[u v2 v3 v4]`` by a new vertex just inside the
    circumsphere, opposite ``u``.

    The new vertex is ``(1 - eps) u' + eps u`` where ``u'`` is the point of
    the circumsphere antipodal to ``u``.  ``eps`` starts at half the value
    where this point crosses the face ``[v2 v3 v4]`` and is halved until the
    three new tetrahedra are 3-well-centered and the new face angles at the
    link vertices are acute.  The face must be on the mesh boundary.
    """
    t = mesh.tets[tet].tolist()
    if u not in t:
        raise PreconditionError(f"vertex {u} is not in tetrahedron {tet}")
    others = [x for x in t if x != u]
    face = tuple(sorted(others))
    if mesh.face_counts()[face] != 1:
        raise PreconditionError(f"face {face} is not on the mesh boundary")
    P = mesh.vertices
    sigma = P[[u] + others]
    if not is_n_well_centered(sigma, tol).satisfied:
        raise PreconditionError(f"tetrahedron {tet} is not 3-well-centered")
    for a in others:
        for b in others:
            if a != b and _angle_cos(P[a], P[u], P[b]) <= 0:
                raise PreconditionError(f"face angle at {a} in triangle ({u}, {a}, {b}) is not acute")
    c = circumcenter(sigma, tol).center
    pu = P[u]
    u_anti = 2.0 * c - pu
    v2, v3, v4 = (P[x] for x in others)
    n = np.cross(v3 - v2, v4 - v2)
    # n . ((1-e) u' + e u - v2) = 0
    denom = n @ (pu - u_anti)
    eps0 = float(n @ (v2 - u_anti) / denom)
    if not 0.0 < eps0 < 1.0:
        raise PreconditionError("antipode of u is not beyond the opposite face")
    eps = eps0 / 2.0
    pairs = [(others[0], others[1]), (others[1], others[2]), (others[2], others[0])]
    w = mesh.num_vertices
    for _ in range(max_halvings):
        v1 = (1.0 - eps) * u_anti + eps * pu
        ok = True
        for a, b in pairs:
            cell = np.array([pu, v1, P[a], P[b]])
            if circumcenter(cell, tol).degenerate or not is_n_well_centered(cell, tol).satisfied:
                ok = False
                break
            if _angle_cos(v1, pu, P[a]) <= 0 or _angle_cos(P[a], pu, v1) <= 0:
                ok = False
                break
        if ok:
            add = [(u, w, a, b) for a, b in pairs]
            return _replace_tets(mesh, [tet], add, v1)
        eps /= 2.0
    raise RuntimeError("no epsilon found")


def _require_acute_star(mesh: TetMesh, u: int, tol: Tolerance):
    lk = link_of(mesh, u)
    if not lk.is_interior:
        raise PreconditionError(f"vertex {u} is not interior: {lk.diagnostic}")
    v = face_angles_acute_at(mesh, u, tol)
    if not v.satisfied:
        raise PreconditionError(f"face angle at {u} over edge {v.detail['worst_edge']} is not acute")
    return lk


def _link_radius(mesh: TetMesh, u: int, lk) -> float:
    return float(np.linalg.norm(mesh.vertices[lk.vertices] - mesh.vertices[u], axis=1).mean())


def _find_tet(mesh: TetMesh, verts) -> int:
    key = sorted(verts)
    for i, t in enumerate(mesh.tets.tolist()):
        if sorted(t) == key:
            return i
    raise PreconditionError(f"no tetrahedron {tuple(key)}")


def insert_degree3_2wc(mesh: TetMesh, u: int, face, tol: Tolerance = DEFAULT_TOL) -> TetMesh:
    """Add a link vertex over the centroid direction of the link face ``face``."""
    lk = _require_acute_star(mesh, u, tol)
    face = tuple(int(x) for x in face)
    tet = _find_tet(mesh, (u,) + face)
    P = mesh.vertices
    d = P[list(face)].mean(axis=0) - P[u]
    v1 = P[u] + _link_radius(mesh, u, lk) * d / np.linalg.norm(d)
    w = mesh.num_vertices
    a, b, c = face
    out = _replace_tets(mesh, [tet], [(u, w, a, b), (u, w, b, c), (u, w, c, a)], v1)
    if not face_angles_acute_at(out, u, tol).satisfied:
        raise RuntimeError("insertion lost face-angle acuteness")
    return out


def insert_degree4_2wc(mesh: TetMesh, u: int, edge, tol: Tolerance = DEFAULT_TOL) -> TetMesh:
    """Split the link edge ``edge`` at its (renormalized) midpoint."""
    lk = _require_acute_star(mesh, u, tol)
    v2, v4 = (int(x) for x in edge)
    fan = [t for t in lk.triangles if v2 in t and v4 in t]
    if len(fan) != 2:
        raise PreconditionError(f"({v2}, {v4}) is not a link edge")
    v3, v5 = (next(x for x in t if x not in (v2, v4)) for t in fan)
    tets = [_find_tet(mesh, (u, v2, v3, v4)), _find_tet(mesh, (u, v2, v4, v5))]
    P = mesh.vertices
    mid = 0.5 * (P[v2] + P[v4]) - P[u]
    if np.linalg.norm(mid) == 0:
        raise PreconditionError("edge midpoint coincides with u")
    v1 = P[u] + _link_radius(mesh, u, lk) * mid / np.linalg.norm(mid)
    w = mesh.num_vertices
    add = [(u, w, v2, v3), (u, w, v3, v4), (u, w, v4, v5), (u, w, v5, v2)]
    out = _replace_tets(mesh, tets, add, v1)
    if not face_angles_acute_at(out, u, tol).satisfied:
        raise RuntimeError("insertion lost face-angle acuteness")
    return out


def remove_link_vertex(mesh: TetMesh, u: int, v: int, diagonal=None) -> TetMesh:
    """Inverse of the insertions: drop link vertex ``v`` of degree 3 or 4.

    Degree 4 needs ``diagonal``, the pair of opposite link neighbors to join.
    Vertices above ``v`` shift down by one.
    """
    lk = link_of(mesh, u)
    if not lk.is_interior:
        raise PreconditionError(f"vertex {u} is not interior")
    local = lk.vertices.index(v)
    ring = [lk.vertices[x] for x in lk.sphere.rotation()[local]]
    star = [i for i, t in enumerate(mesh.tets.tolist()) if u in t and v in t]
    if sum(1 for t in mesh.tets.tolist() if v in t) != len(star):
        raise PreconditionError(f"vertex {v} has tetrahedra outside the star of {u}")
    if len(ring) == 3:
        fill = [(u, *ring)]
    elif len(ring) == 4:
        if diagonal is None:
            raise PreconditionError("degree-4 removal needs a diagonal")
        i = ring.index(diagonal[0])
        r = ring[i:] + ring[:i]
        if r[2] != diagonal[1]:
            raise PreconditionError(f"{diagonal} is not a pair of opposite neighbors")
        fill = [(u, r[0], r[1], r[2]), (u, r[0], r[2], r[3])]
    else:
        raise PreconditionError("only degree 3 or 4 link vertices can be removed")
    keep = [t for i, t in enumerate(mesh.tets.tolist()) if i not in set(star)]
    shift = [x if x < v else x - 1 for x in range(mesh.num_vertices)]
    tets = [[shift[x] for x in t] for t in keep + [list(f) for f in fill]]
    verts = np.delete(mesh.vertices, v, axis=0)
    return TetMesh(verts, tets, tol=mesh.tol)


# --- fixtures --------------------------------------------------------------

# Star fixtures: row 0 is the center vertex u, the rest are its link.
FIXTURES = {
    # 3-well-centered star, link degree list (5,5,5,4,4,4,3)
    "wc3-deg5554443": dict(points=[
        (0, 0, 0), (0, 0, 1),
        (-0.1041, -0.0601, 0.0117), (0.1041, -0.0601, 0.0117), (0, 0.1202, 0.0117),
        (0, -0.3622, -0.8656), (0.3137, 0.1811, -0.8656), (-0.3137, 0.1811, -0.8656),
    ], degree_list=(5, 5, 5, 4, 4, 4, 3)),
    # 3-well-centered star, link degree list (6,5,5,5,3,3,3)
    "wc3-deg6555333": dict(points=[
        (0, 0, 0), (0, 0, 1),
        (0, 0.8334, -0.8588), (-0.7217, -0.4167, -0.8588), (0.7217, -0.4167, -0.8588),
        (0, -5.0494, 1.0696), (4.3729, 2.5247, 1.0696), (-4.3729, 2.5247, 1.0696),
    ], degree_list=(6, 5, 5, 5, 3, 3, 3)),
    # completely well-centered star, link degree list (5,5,5,5,5,5,4,4,4)
    "cwc-deg555555444": dict(points=[
        (0, 0, 0), (0, 0, 1),
        (0, 0.533, 0.164), (0.533, 0, 0.164), (0, -0.533, 0.164), (-0.533, 0, 0.164),
        (0.63, 0.63, -0.7), (-0.63, -0.63, -0.7), (0.594, -0.594, -0.9), (-0.594, 0.594, -0.9),
    ], degree_list=(5, 5, 5, 5, 5, 5, 4, 4, 4)),
    # circumcenter at the origin; cylinder holds at every vertex, one
    # equatorial-ball test fails
    "tet-A": dict(points=[
        (-0.152, 0.864, -0.48), (-0.64, -0.6, -0.48), (0.6, -0.64, -0.48), (-0.192, -0.64, 0.744),
    ]),
    "tet-B": dict(points=[(-0.01, -0.01, -0.01), (1, 0, 0), (0, 1, 0), (0, 0, 1)]),
    # obtuse bottom facet, apex satisfying the rest of the prism test
    "tet-C": dict(points=[
        (0.224, -0.768, -0.6), (0.8, 0, -0.6), (0.224, 0.768, -0.6), (-0.28, 0, 0.96),
    ]),
    "cube-corner": dict(points=[(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]),
}


def _star_candidates(link_pts):
    from scipy.spatial import ConvexHull, Delaunay

    yield "convex hull", ConvexHull(link_pts).simplices.tolist()
    radial = link_pts / np.linalg.norm(link_pts, axis=1, keepdims=True)
    yield "radial hull", ConvexHull(radial).simplices.tolist()
    # star of the center in the Delaunay tetrahedralization of all points
    pts = np.vstack([np.zeros((1, 3)), link_pts])
    star = [t for t in Delaunay(pts).simplices.tolist() if 0 in t]
    yield "delaunay star", [[x - 1 for x in t if x != 0] for t in star]


def fixture_info(name: str) -> dict:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
    spec = FIXTURES[name]
    info = {"name": name, "points": np.array(spec["points"], dtype=float)}
    if "degree_list" in spec:
        info["degree_list"] = spec["degree_list"]
        info["center"] = 0
    return info


def load_fixture(name: str) -> TetMesh:
    """Mesh for a named coordinate fixture.

    Star fixtures get their connectivity from the convex hull of the link
    points coned to ``u``, falling back to the hull of the radially projected
    link points (a star-shaped triangulation seen from ``u``) and then to the
    star of ``u`` in the Delaunay tetrahedralization.  The first one
    reproducing the stated link degree list wins; ``mesh.reconstruction``
    records which.
    """
    info = fixture_info(name)
    pts = info["points"]
    if "degree_list" not in info:
        return TetMesh(pts, [(0, 1, 2, 3)])
    link_pts = pts[1:] - pts[0]
    for how, tris in _star_candidates(link_pts):
        mesh = TetMesh(pts, [(0, a + 1, b + 1, c + 1) for a, b, c in tris], check=False)
        try:
            mesh.validate()
        except InvalidMeshError:
            continue
        lk = link_of(mesh, 0)
        if lk.is_interior and degree_list(lk.sphere) == info["degree_list"]:
            break
    else:
        raise ValueError(f"fixture reconstruction failed for {name}")
    mesh.reconstruction = how
    return mesh
