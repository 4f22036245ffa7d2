"""Checks specific to triangulations of the unit cube."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import ceil

import numpy as np

from .complex import TetMesh
from .geometry import DEFAULT_TOL, Tolerance
from .predicates import is_k_well_centered, is_n_well_centered

__all__ = ["CubeAudit", "cube_audit", "cube_five_tets", "cube_six_tets", "NotACubeError"]

# per-face minimum triangle counts in a 3- and 2-well-centered mesh
MIN_FACE_TRIANGLES = {3: 3, 2: 8}

_CORNERS = np.array([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)], dtype=float)


class NotACubeError(ValueError):
    pass


def _corner(x, y, z) -> int:
    return 4 * x + 2 * y + z


def cube_five_tets() -> TetMesh:
    """A regular central tetrahedron plus four corner tetrahedra."""
    center = [_corner(0, 0, 0), _corner(1, 1, 0), _corner(1, 0, 1), _corner(0, 1, 1)]
    tets = [center]
    for c in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]:
        nb = [tuple(c[j] if j != i else 1 - c[i] for j in range(3)) for i in range(3)]
        tets.append([_corner(*c)] + [_corner(*p) for p in nb])
    return TetMesh(_CORNERS, tets)


def cube_six_tets() -> TetMesh:
    """Six tetrahedra around the main diagonal from (0,0,0) to (1,1,1)."""
    tets = []
    for perm in permutations(range(3)):
        p = [0, 0, 0]
        path = [_corner(*p)]
        for axis in perm:
            p[axis] = 1
            path.append(_corner(*p))
        tets.append(path)
    return TetMesh(_CORNERS, tets)


def _cube_face_of(points, tol):
    """``(axis, side)`` of the cube face containing all points, or ``None``."""
    for axis in range(3):
        for side in (0.0, 1.0):
            if np.all(np.abs(points[:, axis] - side) <= tol.abs * 1e3):
                return axis, int(side)
    return None


@dataclass
class CubeAudit:
    corner_tets: list  # tet indices with three facets in cube faces
    right_pairs: dict  # face -> list of triangle pairs meeting along a shared hypotenuse
    face_counts: dict  # face -> number of surface triangles
    lower_bounds: dict  # k -> minimum tet count implied by the face counts argument
    num_tets: int
    below_bound: dict  # k -> bool
    faces_below: dict  # k -> faces with too few triangles
    tet_status: list = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return bool(self.corner_tets or any(self.right_pairs.values())
                    or any(self.below_bound.values()))

    def to_record(self) -> dict:
        name = lambda f: "xyz"[f[0]] + "=" + str(f[1])  # noqa: E731
        return {
            "num_tets": self.num_tets,
            "corner_tets": self.corner_tets,
            "right_triangle_pairs": {name(f): p for f, p in sorted(self.right_pairs.items())},
            "face_triangle_counts": {name(f): c for f, c in sorted(self.face_counts.items())},
            "lower_bounds": {f"{k}wc": v for k, v in sorted(self.lower_bounds.items())},
            "below_bound": {f"{k}wc": v for k, v in sorted(self.below_bound.items())},
            "faces_below": {f"{k}wc": [name(f) for f in v] for k, v in sorted(self.faces_below.items())},
            "tet_status": self.tet_status,
            "flagged": self.flagged,
        }


def cube_audit(mesh: TetMesh, tol: Tolerance = DEFAULT_TOL) -> CubeAudit:
    P = mesh.vertices
    eps = tol.abs * 1e3
    if len(mesh) == 0 or P.min() < -eps or P.max() > 1 + eps:
        raise NotACubeError("mesh is not a triangulation of the unit cube")
    vol = sum(abs(np.linalg.det(mesh.tet_points(i)[1:] - mesh.tet_points(i)[0])) / 6
              for i in range(len(mesh)))
    if abs(vol - 1.0) > 1e-9:
        raise NotACubeError(f"tetrahedra fill volume {vol}, not 1")
    faces = {(a, s): [] for a in range(3) for s in (0, 1)}
    for tri in mesh.boundary_faces():
        f = _cube_face_of(P[list(tri)], tol)
        if f is None:
            raise NotACubeError(f"boundary triangle {tri} is not in a cube face")
        faces[f].append(tri)

    corner = []
    for i, t in enumerate(mesh.tets.tolist()):
        n = sum(1 for j in range(4)
                if _cube_face_of(P[[x for k, x in enumerate(t) if k != j]], tol) is not None)
        if n >= 3:
            corner.append(i)

    right_pairs = {}
    for f, tris in faces.items():
        pairs = []
        for a in range(len(tris)):
            for b in range(a + 1, len(tris)):
                shared = set(tris[a]) & set(tris[b])
                if len(shared) != 2:
                    continue
                # the angles opposite the shared edge must both be right
                ok = True
                for t in (tris[a], tris[b]):
                    apex = next(x for x in t if x not in shared)
                    p, q = (P[x] - P[apex] for x in shared)
                    cos = p @ q / (np.linalg.norm(p) * np.linalg.norm(q))
                    ok &= abs(cos) <= tol.band()
                if ok:
                    pairs.append([list(tris[a]), list(tris[b])])
        right_pairs[f] = pairs

    counts = {f: len(t) for f, t in faces.items()}
    # each tetrahedron touches at most two cube faces, hence the halving
    bounds = {k: ceil(len(faces) * need / 2) for k, need in MIN_FACE_TRIANGLES.items()}
    faces_below = {k: [f for f, c in sorted(counts.items()) if c < need]
                   for k, need in MIN_FACE_TRIANGLES.items()}
    status = []
    for i in range(len(mesh)):
        p = mesh.tet_points(i)
        status.append({"tet": i, "3wc": is_n_well_centered(p, tol).status.value,
                       "2wc": is_k_well_centered(p, 2, tol).status.value})
    return CubeAudit(
        corner_tets=corner,
        right_pairs=right_pairs,
        face_counts=counts,
        lower_bounds=bounds,
        num_tets=len(mesh),
        below_bound={k: len(mesh) < b for k, b in bounds.items()},
        faces_below=faces_below,
        tet_status=status,
    )
