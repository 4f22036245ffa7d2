"""Combinatorial obstructions for vertex links of tetrahedral meshes.

A *certificate* for a sphere triangulation ``L`` is an abstract
tetrahedral 3-manifold ``K`` with boundary exactly ``L`` in which every
tetrahedron has at least two of its triangles in ``L``.  Its existence rules
out ``L`` as the link of an interior vertex of a 3-well-centered mesh.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .complex import (
    SphereTriangulation,
    TetMesh,
    canonical_form,
    degree_list,
    link_of,
)
from .geometry import circumcenters

__all__ = [
    "CertificateComplex",
    "CheckResult",
    "SearchCapExceeded",
    "LinkClassification",
    "verify_certificate",
    "candidate_tets",
    "search_certificate",
    "nminus3_test",
    "degree3_reduction_blocked",
    "min_edge_audit",
    "generate_band_family",
    "acute_link_embedding",
    "wc3_link_embedding",
    "embedding_is_valid",
    "classify_link",
]


class SearchCapExceeded(RuntimeError):
    pass


class CheckResult(NamedTuple):
    ok: bool
    diagnostic: str

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class CertificateComplex:
    tets: tuple

    def __post_init__(self):
        object.__setattr__(self, "tets", tuple(tuple(sorted(int(x) for x in t)) for t in self.tets))

    @property
    def vertices(self) -> list:
        return sorted({x for t in self.tets for x in t})

    def __len__(self):
        return len(self.tets)


def _faces(t):
    a, b, c, d = t
    return (frozenset((b, c, d)), frozenset((a, c, d)), frozenset((a, b, d)), frozenset((a, b, c)))


def _is_path_or_cycle(edges) -> bool:
    adj = defaultdict(set)
    for a, b in edges:
        if b in adj[a]:
            return False
        adj[a].add(b)
        adj[b].add(a)
    if not adj:
        return False
    if any(len(n) > 2 for n in adj.values()):
        return False
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(adj):
        return False
    ends = sum(1 for n in adj.values() if len(n) == 1)
    return ends in (0, 2)


def _manifold_check(tets) -> CheckResult:
    face_count = Counter(f for t in tets for f in _faces(t))
    for f, c in face_count.items():
        if c > 2:
            return CheckResult(False, f"triangle {sorted(f)} lies in {c} tetrahedra")
    edge_link = defaultdict(list)
    vertex_link = defaultdict(list)
    for t in tets:
        for a, b in combinations(t, 2):
            c, d = [x for x in t if x not in (a, b)]
            edge_link[(a, b)].append((c, d))
        for v in t:
            vertex_link[v].append(frozenset(x for x in t if x != v))
    for e, opp in sorted(edge_link.items()):
        if not _is_path_or_cycle(opp):
            return CheckResult(False, f"link of edge {e} is not a path or cycle")
    for v, tris in sorted(vertex_link.items()):
        ecount = Counter(frozenset(p) for t in tris for p in combinations(sorted(t), 2))
        if any(c > 2 for c in ecount.values()):
            return CheckResult(False, f"link of vertex {v} is not a surface")
        # connectivity through shared edges
        by_edge = defaultdict(list)
        for i, t in enumerate(tris):
            for p in combinations(sorted(t), 2):
                by_edge[frozenset(p)].append(i)
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for p in combinations(sorted(tris[i]), 2):
                for j in by_edge[frozenset(p)]:
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
        if len(seen) != len(tris):
            return CheckResult(False, f"link of vertex {v} is disconnected")
        nv = len({x for t in tris for x in t})
        chi = nv - len(ecount) + len(tris)
        has_boundary = any(c == 1 for c in ecount.values())
        if not ((has_boundary and chi == 1) or (not has_boundary and chi == 2)):
            return CheckResult(False, f"link of vertex {v} is neither a disk nor a sphere")
    return CheckResult(True, "ok")


def verify_certificate(K: CertificateComplex, L: SphereTriangulation) -> CheckResult:
    """Check the three certificate conditions for ``K`` against ``L``."""
    tets = list(K.tets)
    if not tets:
        return CheckResult(False, "empty complex")
    for t in tets:
        if len(set(t)) != 4:
            return CheckResult(False, f"tetrahedron {t} repeats a vertex")
    if len(set(tets)) != len(tets):
        return CheckResult(False, "duplicate tetrahedra")
    lverts = set(range(L.m))
    extra = set(K.vertices) - lverts
    if extra:
        return CheckResult(False, f"vertices {sorted(extra)} of K are not vertices of L")
    ltris = L.triangle_set
    for t in tets:
        n = sum(1 for f in _faces(t) if f in ltris)
        if n < 2:
            return CheckResult(False, f"tetrahedron {t} has only {n} triangle(s) in L")
    man = _manifold_check(tets)
    if not man:
        return man
    face_count = Counter(f for t in tets for f in _faces(t))
    boundary = {f for f, c in face_count.items() if c == 1}
    if boundary != set(ltris):
        missing = sorted(sorted(f) for f in set(ltris) - boundary)
        stray = sorted(sorted(f) for f in boundary - set(ltris))
        return CheckResult(False, f"boundary mismatch: missing {missing}, extra {stray}")
    return CheckResult(True, "ok")


def candidate_tets(L: SphereTriangulation) -> list:
    """Four-vertex sets having at least two triangles in ``L``.

    Two faces of a tetrahedron share an edge, so every candidate is the union
    of the two triangles of ``L`` on some edge.
    """
    by_edge = defaultdict(list)
    for t in L.triangles:
        for p in combinations(sorted(t), 2):
            by_edge[p].append(frozenset(t))
    pool = set()
    for tris in by_edge.values():
        u = tris[0] | tris[1]
        if len(u) == 4:
            pool.add(tuple(sorted(u)))
    return sorted(pool)


def search_certificate(L: SphereTriangulation, max_tets: int | None = None,
                       pool_cap: int = 64):
    """Exhaustive search for a certificate complex; ``None`` if there is none.

    Every tetrahedron of a certificate comes from :func:`candidate_tets`, so
    exhausting the pool is a complete search.  Deterministic for a given
    ``L``.
    """
    pool = candidate_tets(L)
    if len(pool) > pool_cap:
        raise SearchCapExceeded(f"search cap exceeded: pool of {len(pool)} > {pool_cap}")
    ltris = L.triangle_set
    pool_faces = [_faces(t) for t in pool]
    by_face = defaultdict(list)
    for i, fs in enumerate(pool_faces):
        for f in fs:
            by_face[f].append(i)
    limit = max_tets if max_tets is not None else len(pool)
    count = Counter()
    chosen = []
    in_use = [False] * len(pool)

    def compatible(i):
        for f in pool_faces[i]:
            c = count[f]
            if f in ltris:
                if c >= 1:
                    return False
            elif c >= 2:
                return False
        return True

    def open_faces():
        # internal triangles needing a second tetrahedron first, then
        # uncovered triangles of L
        need = [f for f, c in count.items() if c == 1 and f not in ltris]
        if need:
            return need
        return [f for f in ltris if count[f] == 0]

    def dfs():
        todo = open_faces()
        if not todo:
            K = CertificateComplex([pool[i] for i in chosen])
            return K if verify_certificate(K, L) else None
        if len(chosen) >= limit:
            return None
        best = None
        for f in todo:
            opts = [i for i in by_face[f] if not in_use[i] and compatible(i)]
            if best is None or len(opts) < len(best[1]) or (
                    len(opts) == len(best[1]) and sorted(f) < sorted(best[0])):
                best = (f, opts)
            if not opts:
                return None
        for i in best[1]:
            in_use[i] = True
            chosen.append(i)
            for f in pool_faces[i]:
                count[f] += 1
            found = dfs()
            for f in pool_faces[i]:
                count[f] -= 1
            chosen.pop()
            in_use[i] = False
            if found is not None:
                return found
        return None

    return dfs()


def nminus3_test(L: SphereTriangulation) -> bool:
    """True when some vertex has degree >= m - 3 (no 2-well-centered star)."""
    return max(L.degrees()) >= L.m - 3


def degree3_reduction_blocked(L: SphereTriangulation) -> bool:
    """Strip degree-3 vertices (which never changes 2-WC feasibility) and retest."""
    cur = L
    while True:
        if nminus3_test(cur):
            return True
        deg = cur.degrees()
        v = next((i for i, d in enumerate(deg) if d == 3), None)
        if v is None or cur.m <= 4:
            return False
        cur = cur.remove_vertex(v)


class EdgeAuditRow(NamedTuple):
    vertex: int
    incident_edges: int
    violates_3wc_bound: bool
    violates_2wc_bound: bool


def min_edge_audit(mesh: TetMesh) -> list:
    """Incident-edge counts at interior vertices against the 7 / 9 bounds."""
    rows = []
    for v in range(mesh.num_vertices):
        lk = link_of(mesh, v)
        if not lk.is_interior:
            continue
        k = len(lk.vertices)
        rows.append(EdgeAuditRow(v, k, k < 7, k < 9))
    return rows


def generate_band_family(m: int, closed: bool = True):
    """Tetrahedra fanned around the edge ``(0, 1)`` and their boundary.

    Closed: ``m - 2`` tetrahedra around the edge, boundary degrees
    ``(m-2, m-2, 4, ..., 4)``.  Open: one tetrahedron fewer, boundary
    degrees ``(m-1, m-1, 4, ..., 4, 3, 3)``.
    """
    if closed and m < 6:
        raise ValueError("closed band family needs m >= 6")
    if not closed and m < 5:
        raise ValueError("open band family needs m >= 5")
    ring = list(range(2, m))
    k = len(ring)
    if closed:
        pairs = [(ring[i], ring[(i + 1) % k]) for i in range(k)]
    else:
        pairs = [(ring[i], ring[i + 1]) for i in range(k - 1)]
    tets = [(0, 1, c, d) for c, d in pairs]
    tris = []
    for c, d in pairs:
        tris.append((0, c, d))
        tris.append((1, d, c))
    if not closed:
        tris.append((0, 1, ring[0]))
        tris.append((0, ring[-1], 1))
    return CertificateComplex(tets), SphereTriangulation(m, tris)


# --- numerical embeddings -------------------------------------------------

def _spectral_init(L: SphereTriangulation) -> np.ndarray:
    m = L.m
    lap = np.zeros((m, m))
    for a, b in L.edges:
        lap[a, b] = lap[b, a] = -1.0
        lap[a, a] += 1.0
        lap[b, b] += 1.0
    _, vec = np.linalg.eigh(lap)
    x = vec[:, 1:4]
    n = np.linalg.norm(x, axis=1, keepdims=True)
    return x / np.where(n == 0, 1.0, n)


def _orientation_sign(x, tris) -> float:
    d = np.einsum("ij,ij->i", x[tris[:, 0]], np.cross(x[tris[:, 1]], x[tris[:, 2]]))
    return 1.0 if d.sum() >= 0 else -1.0


def embedding_is_valid(points, L: SphereTriangulation) -> bool:
    """Cone from the origin over ``L`` is an embedding (star-shaped, no inversion).

    All link triangles must have the same orientation seen from the origin
    and their solid angles must add up to one full sphere.
    """
    x = np.asarray(points, dtype=float)
    tris = np.array(L.triangles)
    a, b, c = x[tris[:, 0]], x[tris[:, 1]], x[tris[:, 2]]
    det = np.einsum("ij,ij->i", a, np.cross(b, c))
    if not (np.all(det > 0) or np.all(det < 0)):
        return False
    det = np.abs(det)
    na, nb, nc = (np.linalg.norm(p, axis=1) for p in (a, b, c))
    denom = (na * nb * nc + np.einsum("ij,ij->i", a, b) * nc
             + np.einsum("ij,ij->i", b, c) * na + np.einsum("ij,ij->i", c, a) * nb)
    omega = 2.0 * np.arctan2(det, denom)
    return bool(abs(omega.sum() - 4.0 * np.pi) < 1e-6)


def _acute_penalty(x, edges, non_edges, tris, sign, margin, spread, delta):
    xa, xb = x[edges[:, 0]], x[edges[:, 1]]
    dots = np.einsum("ij,ij->i", xa, xb)
    s = np.maximum(0.0, margin - dots)
    val = float((s * s).sum())
    g = np.zeros_like(x)
    np.add.at(g, edges[:, 0], -2.0 * s[:, None] * xb)
    np.add.at(g, edges[:, 1], -2.0 * s[:, None] * xa)
    if len(non_edges):
        ya, yb = x[non_edges[:, 0]], x[non_edges[:, 1]]
        nd = np.einsum("ij,ij->i", ya, yb)
        q = np.maximum(0.0, nd - spread)
        val += 0.1 * float((q * q).sum())
        np.add.at(g, non_edges[:, 0], 0.2 * q[:, None] * yb)
        np.add.at(g, non_edges[:, 1], 0.2 * q[:, None] * ya)
    a, b, c = x[tris[:, 0]], x[tris[:, 1]], x[tris[:, 2]]
    det = sign * np.einsum("ij,ij->i", a, np.cross(b, c))
    r = np.maximum(0.0, delta - det)
    val += float((r * r).sum())
    w = (-2.0 * sign * r)[:, None]
    np.add.at(g, tris[:, 0], w * np.cross(b, c))
    np.add.at(g, tris[:, 1], w * np.cross(c, a))
    np.add.at(g, tris[:, 2], w * np.cross(a, b))
    return val, g


def _normalize(x):
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def acute_link_embedding(L: SphereTriangulation, restarts: int = 64, margin: float = 0.05,
                         seed: int = 0, max_iter: int = 5000):
    """Search for unit vectors making every face angle at the origin acute.

    Penalty descent on the sphere with backtracking line search.  Returns an
    ``(m, 3)`` array or ``None``; ``None`` is inconclusive.
    """
    edges = np.array(L.edges)
    eset = set(map(tuple, edges.tolist()))
    non_edges = np.array([p for p in combinations(range(L.m), 2) if p not in eset],
                         dtype=int).reshape(-1, 2)
    tris = np.array(L.triangles)
    rng = np.random.default_rng(seed)
    delta = 1e-3

    def success(x):
        dots = np.einsum("ij,ij->i", x[edges[:, 0]], x[edges[:, 1]])
        return bool(dots.min() >= margin) and embedding_is_valid(x, L)

    for r in range(restarts):
        if r == 0:
            x = _spectral_init(L)
        else:
            x = _normalize(rng.standard_normal((L.m, 3)))
        sign = _orientation_sign(x, tris)
        target = margin * 1.5
        val, g = _acute_penalty(x, edges, non_edges, tris, sign, target, 0.5, delta)
        step = 1.0
        last = val
        for it in range(max_iter):
            # zero penalty means every target inequality holds with slack
            if val == 0.0 and success(x):
                return x
            if it % 250 == 249:
                if val > 0.999 * last:
                    break
                last = val
            gt = g - np.einsum("ij,ij->i", g, x)[:, None] * x
            gn = float((gt * gt).sum())
            if gn < 1e-20:
                break
            while step > 1e-12:
                xn = _normalize(x - step * gt)
                vn, gnew = _acute_penalty(xn, edges, non_edges, tris, sign, target, 0.5, delta)
                if vn <= val - 1e-4 * step * gn:
                    break
                step *= 0.5
            else:
                break
            x, val, g = xn, vn, gnew
            step = min(step * 2.0, 4.0)
        if success(x):
            return x
    return None


def _cone_alphas(points, tris):
    # u at the origin is vertex 0 of every cone tetrahedron
    p = np.asarray(points)
    k = len(tris)
    v = np.zeros((k, 4, 3))
    v[:, 1:, :] = p[tris]
    alpha, _, _ = circumcenters(v)
    return alpha


def wc3_link_embedding(L: SphereTriangulation, restarts: int = 48, margin: float = 0.01,
                       seed: int = 0, init=None):
    """Search for link positions making every cone tetrahedron 3-well-centered.

    A positive result is a realization witness, checked with the exact
    predicates; failure is inconclusive.
    """
    from scipy.optimize import minimize

    from .predicates import is_n_well_centered

    tris = np.array(L.triangles)
    rng = np.random.default_rng(seed)
    m = L.m

    def objective(flat, sign):
        x = flat.reshape(m, 3)
        alpha = _cone_alphas(x, tris)
        a, b, c = x[tris[:, 0]], x[tris[:, 1]], x[tris[:, 2]]
        det = sign * np.einsum("ij,ij->i", a, np.cross(b, c))
        s = np.maximum(0.0, 2 * margin - alpha)
        o = np.maximum(0.0, 1e-3 - det)
        scale = (np.einsum("ij,ij->i", x, x).mean() - 1.0) ** 2
        val = (s * s).sum() + 10.0 * (o * o).sum() + 0.01 * scale
        return float(val) if np.isfinite(val) else 1e6

    def witness(x):
        if not embedding_is_valid(x, L):
            return False
        for t in tris:
            simplex = np.vstack([np.zeros(3), x[t]])
            if is_n_well_centered(simplex).margin <= margin / 2:
                return False
        return True

    starts = []
    if init is not None:
        starts.append(np.asarray(init, dtype=float))
    acute = acute_link_embedding(L, restarts=4, seed=seed, max_iter=2000)
    if acute is not None:
        starts.append(acute)
    starts.append(_spectral_init(L))
    # irregular stars need very different radii, so vary them log-normally
    while len(starts) < restarts:
        d = _normalize(rng.standard_normal((m, 3)))
        starts.append(d * np.exp(rng.normal(0.0, 0.8, (m, 1))))
    for x0 in starts[:restarts]:
        sign = _orientation_sign(x0, tris)
        res = minimize(objective, x0.ravel(), args=(sign,), method="L-BFGS-B",
                       options={"maxiter": 400})
        x = res.x.reshape(m, 3)
        if witness(x):
            return x
    return None


@dataclass
class LinkClassification:
    link: SphereTriangulation
    canonical: bytes
    degree_list: tuple
    wc3_status: str  # BLOCKED | UNKNOWN | REALIZED
    wc3_certificate: CertificateComplex | None
    wc2_degree_blocked: bool
    wc2_status: str  # BLOCKED | UNKNOWN | FEASIBLE
    wc2_reason: str | None = None
    wc3_witness: np.ndarray | None = None
    wc2_embedding: np.ndarray | None = None
    notes: list = field(default_factory=list)

    def to_record(self) -> dict:
        rec = {
            "canonical": self.canonical.decode("ascii"),
            "m": self.link.m,
            "degree_list": list(self.degree_list),
            "triangles": [list(t) for t in self.link.triangles],
            "wc3": {"status": self.wc3_status},
            "wc2": {"status": self.wc2_status},
            "notes": list(self.notes),
        }
        if self.wc3_certificate is not None:
            rec["wc3"]["certificate"] = [list(t) for t in self.wc3_certificate.tets]
        if self.wc3_witness is not None:
            rec["wc3"]["witness"] = self.wc3_witness.tolist()
        if self.wc2_reason is not None:
            rec["wc2"]["reason"] = self.wc2_reason
        if self.wc2_embedding is not None:
            rec["wc2"]["embedding"] = self.wc2_embedding.tolist()
        return rec


def classify_link(L: SphereTriangulation, witness: bool = False, restarts: int = 64,
                  seed: int = 0, pool_cap: int = 64) -> LinkClassification:
    """Run every available test on ``L``; witnesses are searched only on request."""
    notes = []
    cert = search_certificate(L, pool_cap=pool_cap)
    wc3_witness = None
    if cert is not None:
        wc3 = "BLOCKED"
        notes.append("one-ring certificate")
    else:
        wc3 = "UNKNOWN"
        if witness:
            wc3_witness = wc3_link_embedding(L, restarts=max(1, restarts // 4), seed=seed)
            if wc3_witness is not None:
                wc3 = "REALIZED"
    blocked = nminus3_test(L)
    embedding = None
    reason = None
    if blocked:
        wc2 = "BLOCKED"
        reason = "degree"
    elif degree3_reduction_blocked(L):
        wc2 = "BLOCKED"
        reason = "degree3-reduction"
    else:
        wc2 = "UNKNOWN"
        if witness:
            embedding = acute_link_embedding(L, restarts=restarts, seed=seed)
            if embedding is not None:
                wc2 = "FEASIBLE"
    if wc2 == "BLOCKED" and wc3 == "REALIZED":
        notes.append("3-well-centered star possible but no 2-well-centered one")
    return LinkClassification(
        link=L,
        canonical=canonical_form(L),
        degree_list=degree_list(L),
        wc3_status=wc3,
        wc3_certificate=cert,
        wc2_degree_blocked=blocked,
        wc2_status=wc2,
        wc2_reason=reason,
        wc3_witness=wc3_witness,
        wc2_embedding=embedding,
        notes=notes,
    )
