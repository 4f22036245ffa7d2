"""Plain-text mesh, link and report formats (see docs/FORMATS.md)."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .complex import InvalidTriangulationError, SphereTriangulation, TetMesh, validate_sphere

__all__ = [
    "ParseError",
    "MeshFile",
    "read_mesh",
    "write_mesh",
    "read_link",
    "write_link",
    "read_off",
    "RECORDS_VERSION",
    "write_records",
    "read_records",
]

RECORDS_VERSION = 1


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass(eq=False)
class MeshFile:
    dim: int
    vertices: np.ndarray  # (nv, ambient)
    cells: np.ndarray  # (nc, dim + 1)

    def to_tetmesh(self, check: bool = True) -> TetMesh:
        if self.dim != 3 or self.vertices.shape[1] != 3:
            raise ValueError("need a tetrahedral mesh in R^3")
        return TetMesh(self.vertices, self.cells, check=check)


def _content_lines(fh):
    for no, raw in enumerate(fh, start=1):
        s = raw.split("#", 1)[0].strip()
        if s:
            yield no, s


def _ints(no, s, n=None):
    try:
        out = [int(x) for x in s.split()]
    except ValueError:
        raise ParseError(no, f"expected integers, got {s!r}") from None
    if n is not None and len(out) != n:
        raise ParseError(no, f"expected {n} integers, got {len(out)}")
    return out


def _floats(no, s, n=None):
    try:
        out = [float(x) for x in s.split()]
    except ValueError:
        raise ParseError(no, f"expected numbers, got {s!r}") from None
    if n is not None and len(out) != n:
        raise ParseError(no, f"expected {n} numbers, got {len(out)}")
    if not all(np.isfinite(out)):
        raise ParseError(no, "non-finite coordinate")
    return out


def read_mesh(fh) -> MeshFile:
    """Read ``dim nv nc`` followed by vertex and cell lines."""
    lines = _content_lines(fh)
    try:
        no, s = next(lines)
    except StopIteration:
        raise ParseError(1, "empty file") from None
    dim, nv, nc = _ints(no, s, 3)
    if dim < 1 or nv < 0 or nc < 0:
        raise ParseError(no, "bad header")
    verts = []
    width = None
    for _ in range(nv):
        try:
            no, s = next(lines)
        except StopIteration:
            raise ParseError(no + 1, f"expected {nv} vertex lines, file ended") from None
        row = _floats(no, s, width)
        width = len(row)
        if width < dim:
            raise ParseError(no, f"ambient dimension {width} below {dim}")
        verts.append(row)
    cells = []
    for _ in range(nc):
        try:
            no, s = next(lines)
        except StopIteration:
            raise ParseError(no + 1, f"expected {nc} cell lines, file ended") from None
        row = _ints(no, s, dim + 1)
        if min(row) < 0 or max(row) >= nv:
            raise ParseError(no, "vertex index out of range")
        cells.append(row)
    for no, s in lines:
        raise ParseError(no, "unexpected trailing content")
    v = np.array(verts, dtype=float).reshape(nv, width if width else dim)
    c = np.array(cells, dtype=int).reshape(nc, dim + 1)
    return MeshFile(dim, v, c)


def write_mesh(mesh, fh) -> None:
    """Write a :class:`TetMesh` or :class:`MeshFile`; floats use ``repr``."""
    if isinstance(mesh, TetMesh):
        dim, verts, cells = 3, mesh.vertices, mesh.tets
    else:
        dim, verts, cells = mesh.dim, mesh.vertices, mesh.cells
    fh.write(f"{dim} {len(verts)} {len(cells)}\n")
    for p in verts:
        fh.write(" ".join(repr(float(x)) for x in p) + "\n")
    for c in cells:
        fh.write(" ".join(str(int(x)) for x in c) + "\n")


def read_link(fh) -> SphereTriangulation:
    lines = _content_lines(fh)
    try:
        no, s = next(lines)
    except StopIteration:
        raise ParseError(1, "empty file") from None
    m, t = _ints(no, s, 2)
    tris = []
    for _ in range(t):
        try:
            no, s = next(lines)
        except StopIteration:
            raise ParseError(no + 1, f"expected {t} triangle lines, file ended") from None
        tris.append(tuple(_ints(no, s, 3)))
    for no, s in lines:
        raise ParseError(no, "unexpected trailing content")
    ok, why = validate_sphere(m, tris)
    if not ok:
        raise InvalidTriangulationError(why)
    return SphereTriangulation(m, tris)


def write_link(tri: SphereTriangulation, fh) -> None:
    fh.write(f"{tri.m} {len(tri.triangles)}\n")
    for t in tri.triangles:
        fh.write(" ".join(str(x) for x in t) + "\n")


def read_off(fh):
    """Minimal OFF reader for triangulated spheres: ``(points, triangulation)``."""
    lines = _content_lines(fh)
    try:
        no, s = next(lines)
    except StopIteration:
        raise ParseError(1, "empty file") from None
    if not s.startswith("OFF"):
        raise ParseError(no, "missing OFF header")
    rest = s[3:].strip()
    if rest:
        counts = _ints(no, rest)
    else:
        no, s = next(lines)
        counts = _ints(no, s)
    if len(counts) < 2:
        raise ParseError(no, "expected vertex and face counts")
    nv, nf = counts[:2]
    pts = []
    for _ in range(nv):
        no, s = next(lines)
        pts.append(_floats(no, s)[:3])
    tris = []
    for _ in range(nf):
        no, s = next(lines)
        row = _ints(no, s)
        if row[0] != 3 or len(row) < 4:
            raise ParseError(no, "only triangular faces are supported")
        tris.append(tuple(row[1:4]))
    ok, why = validate_sphere(nv, tris)
    if not ok:
        raise InvalidTriangulationError(why)
    return np.array(pts, dtype=float), SphereTriangulation(nv, tris)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if isinstance(x, bytes):
        return x.decode("ascii")
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def write_records(fh, kind: str, records, summary: dict) -> None:
    """Line-delimited JSON: a header line, one line per record, a summary line."""
    dump = lambda obj: json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))  # noqa: E731
    fh.write(dump({"format": "wellcentered-records", "version": RECORDS_VERSION, "kind": kind}) + "\n")
    for r in records:
        fh.write(dump({"record": r}) + "\n")
    fh.write(dump({"summary": summary}) + "\n")


def read_records(fh):
    """Inverse of :func:`write_records`: ``(header, records, summary)``."""
    lines = [json.loads(s) for s in fh if s.strip()]
    if not lines or lines[0].get("format") != "wellcentered-records":
        raise ValueError("not a records stream")
    if lines[0].get("version") != RECORDS_VERSION:
        raise ValueError(f"unsupported records version {lines[0].get('version')}")
    return lines[0], [x["record"] for x in lines[1:-1]], lines[-1]["summary"]
