"""Embedded tetrahedral meshes and abstract triangulations of the 2-sphere."""

from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .geometry import DEFAULT_TOL, Tolerance, diameter
from .predicates import Status, WcVerdict, classify_margin

__all__ = [
    "InvalidTriangulationError",
    "InvalidMeshError",
    "TetMesh",
    "SphereTriangulation",
    "VertexLink",
    "validate_sphere",
    "degree_list",
    "canonical_form",
    "is_isomorphic",
    "enumerate_sphere_triangulations",
    "link_of",
    "interior_vertices",
    "face_angles_acute_at",
    "cone_mesh",
    "tetrahedron_boundary",
    "octahedron_boundary",
    "double_pyramid",
]


class InvalidTriangulationError(ValueError):
    pass


class InvalidMeshError(ValueError):
    pass


def _tri_key(t):
    return tuple(sorted(t))


def _edges_of(tri):
    a, b, c = tri
    return ((a, b), (b, c), (c, a))


def validate_sphere(num_vertices: int, triangles) -> tuple[bool, str]:
    """Check that ``triangles`` form a simplicial 2-sphere on ``num_vertices``.

    Returns ``(ok, diagnostic)``; the diagnostic names the first failed check.
    """
    m = int(num_vertices)
    tris = [tuple(int(x) for x in t) for t in triangles]
    if m < 4:
        return False, f"need at least 4 vertices, got {m}"
    if not tris:
        return False, "no triangles"
    for t in tris:
        if len(t) != 3 or len(set(t)) != 3:
            return False, f"triangle {t} is not three distinct vertices"
        if min(t) < 0 or max(t) >= m:
            return False, f"triangle {t} has a vertex index out of range"
    keys = [_tri_key(t) for t in tris]
    if len(set(keys)) != len(keys):
        dup = next(k for k, c in Counter(keys).items() if c > 1)
        return False, f"duplicate triangle {dup}"
    used = {x for t in tris for x in t}
    if len(used) != m:
        missing = sorted(set(range(m)) - used)
        return False, f"vertices {missing} are in no triangle"
    edge_count = Counter(_tri_key(e) for t in tris for e in _edges_of(t))
    for e, c in sorted(edge_count.items()):
        if c != 2:
            return False, f"edge {e} lies in {c} triangle(s), expected 2"
    adj = defaultdict(set)
    for a, b in edge_count:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != m:
        return False, "edge graph is not connected"
    # link of each vertex must be a single cycle
    for v in range(m):
        ring = defaultdict(list)
        for t in tris:
            if v in t:
                a, b = [x for x in t if x != v]
                ring[a].append(b)
                ring[b].append(a)
        if any(len(nb) != 2 for nb in ring.values()):
            return False, f"link of vertex {v} is not a cycle"
        start = next(iter(ring))
        prev, cur, steps = None, start, 0
        while True:
            nxt = ring[cur][0] if ring[cur][0] != prev else ring[cur][1]
            prev, cur = cur, nxt
            steps += 1
            if cur == start:
                break
        if steps != len(ring):
            return False, f"link of vertex {v} is not a single cycle"
    e = len(edge_count)
    f = len(tris)
    if m - e + f != 2:
        return False, f"Euler characteristic {m - e + f} != 2"
    return True, "ok"


def _orient(tris):
    """Consistently orient a closed orientable surface by propagation."""
    tris = [tuple(t) for t in tris]
    by_edge = defaultdict(list)
    for i, t in enumerate(tris):
        for a, b in _edges_of(t):
            by_edge[_tri_key((a, b))].append(i)
    out = [None] * len(tris)
    out[0] = tris[0]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for a, b in _edges_of(out[i]):
            for j in by_edge[_tri_key((a, b))]:
                if j == i or out[j] is not None:
                    continue
                t = tris[j]
                # neighbor must traverse the shared edge as (b, a)
                c = next(x for x in t if x not in (a, b))
                out[j] = (b, a, c)
                queue.append(j)
    return out


@dataclass(frozen=True, eq=False)
class SphereTriangulation:
    """An abstract triangulation of S^2 on vertices ``0..m-1``.

    Triangles are stored consistently oriented.
    """

    num_vertices: int
    triangles: tuple

    def __post_init__(self):
        ok, why = validate_sphere(self.num_vertices, self.triangles)
        if not ok:
            raise InvalidTriangulationError(why)
        object.__setattr__(self, "num_vertices", int(self.num_vertices))
        object.__setattr__(self, "triangles", tuple(_orient(self.triangles)))

    @property
    def m(self) -> int:
        return self.num_vertices

    @property
    def edges(self) -> list:
        return sorted({_tri_key(e) for t in self.triangles for e in _edges_of(t)})

    @property
    def triangle_set(self) -> frozenset:
        return frozenset(frozenset(t) for t in self.triangles)

    def degrees(self) -> list:
        d = [0] * self.m
        for a, b in self.edges:
            d[a] += 1
            d[b] += 1
        return d

    def neighbors(self, v: int) -> list:
        return list(self.rotation()[v])

    def rotation(self) -> list:
        """Cyclic neighbor order around each vertex, following the orientation."""
        succ = [dict() for _ in range(self.m)]
        for a, b, c in self.triangles:
            succ[a][b] = c
            succ[b][c] = a
            succ[c][a] = b
        rot = []
        for v in range(self.m):
            s = succ[v]
            start = min(s)
            order = [start]
            x = s[start]
            while x != start:
                order.append(x)
                x = s[x]
            rot.append(tuple(order))
        return rot

    def relabel(self, perm) -> "SphereTriangulation":
        """Apply ``v -> perm[v]``."""
        return SphereTriangulation(self.m, [tuple(perm[x] for x in t) for t in self.triangles])

    def mirror(self) -> "SphereTriangulation":
        return SphereTriangulation(self.m, [(b, a, c) for a, b, c in self.triangles])

    def remove_vertex(self, v: int, diagonal=None) -> "SphereTriangulation":
        """Delete a vertex of degree 3 or 4 and re-triangulate the hole.

        Degree 4 needs ``diagonal``, a pair of opposite neighbors to join.
        Vertices above ``v`` shift down by one.
        """
        ring = self.rotation()[v]
        keep = [t for t in self.triangles if v not in t]
        if len(ring) == 3:
            fill = [tuple(ring)]
        elif len(ring) == 4:
            if diagonal is None:
                raise ValueError("degree-4 removal needs a diagonal")
            i = ring.index(diagonal[0])
            r = ring[i:] + ring[:i]
            if r[2] != diagonal[1]:
                raise ValueError(f"{diagonal} is not a pair of opposite neighbors")
            fill = [(r[0], r[1], r[2]), (r[0], r[2], r[3])]
        else:
            raise ValueError("only degree 3 or 4 vertices can be removed")
        shift = [x if x < v else x - 1 for x in range(self.m)]
        tris = [tuple(shift[x] for x in t) for t in keep + fill]
        return SphereTriangulation(self.m - 1, tris)

    def __repr__(self):
        return f"SphereTriangulation(m={self.m}, degrees={degree_list(self)})"


def degree_list(tri: SphereTriangulation) -> tuple:
    if not isinstance(tri, SphereTriangulation):
        raise InvalidTriangulationError("degree_list needs a validated SphereTriangulation")
    d = tuple(sorted(tri.degrees(), reverse=True))
    if sum(d) != 6 * (tri.m - 2):
        raise InvalidTriangulationError("degree sum violates Euler's formula")
    return d


def _bfs_code(rot_maps, root, first, forward, best):
    """Breadth-first code of a rooted, oriented rotation system.

    Returns None as soon as the partial code exceeds ``best``.
    """
    label = {root: 1}
    ref = {root: first}
    queue = deque([root])
    code = []
    nxt = 2
    pos = 0
    while queue:
        x = queue.popleft()
        order = rot_maps[x]
        start = ref[x]
        y = start
        while True:
            if y not in label:
                label[y] = nxt
                nxt += 1
                ref[y] = x
                queue.append(y)
            c = label[y]
            if best is not None:
                b = best[pos]
                if c > b:
                    return None
                if c < b:
                    best = None
            code.append(c)
            pos += 1
            y = order[y] if forward else order[("r", y)]
            if y == start:
                break
        if best is not None:
            if best[pos] != 0:
                # best has a nonzero where we end the block: 0 is smaller
                best = None
        code.append(0)
        pos += 1
    return code


def _canonical_code(tri: SphereTriangulation) -> tuple:
    rot = tri.rotation()
    maps = []
    for v, order in enumerate(rot):
        d = {}
        k = len(order)
        for i, x in enumerate(order):
            d[x] = order[(i + 1) % k]
            d[("r", x)] = order[(i - 1) % k]
        maps.append(d)
    best = None
    mindeg = min(len(r) for r in rot)
    # roots restricted to minimum-degree vertices: the code begins with the
    # root's degree worth of entries, so this is a relabeling-invariant choice
    for v, order in enumerate(rot):
        if len(order) != mindeg:
            continue
        for w in order:
            for forward in (True, False):
                code = _bfs_code(maps, v, w, forward, best)
                if code is not None:
                    best = code
    return tuple(best)


def canonical_form(tri: SphereTriangulation) -> bytes:
    """Isomorphism-invariant encoding (orientation ignored)."""
    code = _canonical_code(tri)
    return (f"{tri.m}:" + ",".join(map(str, code))).encode("ascii")


def is_isomorphic(a: SphereTriangulation, b: SphereTriangulation) -> bool:
    return a.m == b.m and canonical_form(a) == canonical_form(b)


def _vertex_splits(tri: SphereTriangulation):
    rot = tri.rotation()
    m = tri.m
    w = m
    for v, ring in enumerate(rot):
        d = len(ring)
        fan = [(v, ring[k], ring[(k + 1) % d]) for k in range(d)]
        others = [t for t in tri.triangles if v not in t]
        for i, j in combinations(range(d), 2):
            keep = fan[i:j]
            move = fan[j:] + fan[:i]
            new = list(others) + keep
            new += [(w if x == v else x for x in t) for t in move]
            new = [tuple(t) for t in new]
            new.append((v, w, ring[i]))
            new.append((v, w, ring[j]))
            yield SphereTriangulation(m + 1, new)


@lru_cache(maxsize=None)
def _enumerate(m: int) -> tuple:
    if m == 4:
        return (tetrahedron_boundary(),)
    seen = {}
    for base in _enumerate(m - 1):
        for t in _vertex_splits(base):
            key = canonical_form(t)
            if key not in seen:
                seen[key] = t
    return tuple(seen[k] for k in sorted(seen))


def enumerate_sphere_triangulations(m: int) -> list:
    """All triangulations of S^2 on ``m`` vertices, one per isomorphism class.

    Grown from the tetrahedron by vertex splits (inverse edge contractions),
    deduplicated on :func:`canonical_form`; order is by canonical form.
    """
    if not 4 <= m <= 10:
        raise ValueError("m must be between 4 and 10")
    return list(_enumerate(m))


def tetrahedron_boundary() -> SphereTriangulation:
    return SphereTriangulation(4, [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)])


def double_pyramid(k: int) -> SphereTriangulation:
    """Suspension of a k-cycle: apexes ``0`` and ``1``, ring ``2..k+1``."""
    ring = list(range(2, k + 2))
    tris = []
    for i in range(k):
        a, b = ring[i], ring[(i + 1) % k]
        tris.append((0, a, b))
        tris.append((1, b, a))
    return SphereTriangulation(k + 2, tris)


def octahedron_boundary() -> SphereTriangulation:
    return double_pyramid(4)


def _tet_faces(t):
    a, b, c, d = t
    return ((b, c, d), (a, c, d), (a, b, d), (a, b, c))


class TetMesh:
    """Tetrahedra embedded in R^3, stored positively oriented."""

    def __init__(self, vertices, tets, tol: Tolerance = DEFAULT_TOL, check: bool = True):
        self.vertices = np.asarray(vertices, dtype=float).reshape(-1, 3)
        tets = np.asarray(tets, dtype=int).reshape(-1, 4)
        self.tol = tol
        if tets.size and (tets.min() < 0 or tets.max() >= len(self.vertices)):
            raise InvalidMeshError("tetrahedron vertex index out of range")
        self.degenerate = []
        out = tets.copy()
        for i, t in enumerate(tets):
            p = self.vertices[t]
            vol = np.linalg.det(p[1:] - p[0]) / 6.0
            scale = diameter(p)
            if scale == 0 or abs(vol) < tol.rel * scale**3:
                self.degenerate.append(i)
            elif vol < 0:
                out[i] = t[[1, 0, 2, 3]]
        self.tets = out
        if check:
            self.validate()

    def validate(self):
        if self.degenerate:
            raise InvalidMeshError(f"degenerate tetrahedra: {self.degenerate}")
        keys = [tuple(sorted(t)) for t in self.tets.tolist()]
        if len(set(keys)) != len(keys):
            raise InvalidMeshError("duplicate tetrahedra")
        for t in keys:
            if len(set(t)) != 4:
                raise InvalidMeshError(f"tetrahedron {t} repeats a vertex")
        for f, c in self.face_counts().items():
            if c > 2:
                raise InvalidMeshError(f"triangle {f} is shared by {c} tetrahedra")

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def __len__(self):
        return len(self.tets)

    def face_counts(self) -> Counter:
        return Counter(_tri_key(f) for t in self.tets.tolist() for f in _tet_faces(t))

    def boundary_faces(self) -> list:
        return sorted(f for f, c in self.face_counts().items() if c == 1)

    def tets_at(self, v: int) -> list:
        return [i for i, t in enumerate(self.tets.tolist()) if v in t]

    def edges(self) -> list:
        return sorted({tuple(sorted(e)) for t in self.tets.tolist() for e in combinations(t, 2)})

    def neighbors(self, v: int) -> list:
        return sorted({x for t in self.tets.tolist() if v in t for x in t if x != v})

    def tet_points(self, i: int) -> np.ndarray:
        return self.vertices[self.tets[i]]

    def __repr__(self):
        return f"TetMesh(nv={self.num_vertices}, nt={len(self.tets)})"


class VertexLink(NamedTuple):
    vertex: int
    triangles: list  # oriented, in mesh vertex ids
    vertices: list  # sorted mesh ids; local id i <-> vertices[i]
    is_interior: bool
    sphere: SphereTriangulation | None
    diagnostic: str


def link_of(mesh: TetMesh, v: int) -> VertexLink:
    if not 0 <= v < mesh.num_vertices:
        raise IndexError(f"vertex {v} out of range")
    tris = []
    for t in mesh.tets.tolist():
        if v not in t:
            continue
        p = t.index(v)
        rest = [x for x in t if x != v]
        # even permutation moving v to the front keeps the orientation
        if p % 2 == 1:
            rest[0], rest[1] = rest[1], rest[0]
        tris.append(tuple(rest))
    verts = sorted({x for t in tris for x in t})
    local = {g: i for i, g in enumerate(verts)}
    ltris = [tuple(local[x] for x in t) for t in tris]
    ok, why = validate_sphere(len(verts), ltris) if tris else (False, "vertex in no tetrahedron")
    sphere = SphereTriangulation(len(verts), ltris) if ok else None
    return VertexLink(v, tris, verts, ok, sphere, why)


def interior_vertices(mesh: TetMesh) -> list:
    return [v for v in range(mesh.num_vertices) if link_of(mesh, v).is_interior]


def face_angles_acute_at(mesh: TetMesh, u: int, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    """All face angles at ``u`` acute; margin is the smallest angle cosine."""
    lk = link_of(mesh, u)
    pu = mesh.vertices[u]
    cosines = {}
    for t in lk.triangles:
        for a, b in _edges_of(t):
            key = _tri_key((a, b))
            if key in cosines:
                continue
            x = mesh.vertices[a] - pu
            y = mesh.vertices[b] - pu
            cosines[key] = float(x @ y / (np.linalg.norm(x) * np.linalg.norm(y)))
    if not cosines:
        return WcVerdict(Status.SATISFIED, np.inf, {"cosines": {}})
    worst = min(cosines, key=cosines.get)
    margin = cosines[worst]
    return WcVerdict(classify_margin(margin, tol.band()), margin,
                     {"cosines": cosines, "worst_edge": worst})


def cone_mesh(apex, points, triangles, tol: Tolerance = DEFAULT_TOL, check: bool = True) -> TetMesh:
    """Cone a triangulated surface to ``apex``; the apex becomes vertex 0."""
    pts = np.vstack([np.asarray(apex, dtype=float).reshape(1, 3), np.asarray(points, dtype=float)])
    tets = [(0, a + 1, b + 1, c + 1) for a, b, c in triangles]
    return TetMesh(pts, tets, tol=tol, check=check)
