"""Sampling the set of apex positions that give a well-centered cone.

For a fixed facet, ``max_i det(A_i)`` is negative exactly where the cone
over the facet is well-centered.  The grid stores raw values so external
isosurface tools can pick their own level.

Grid text format (``write_region_grid``)::

    # wellcentered region grid v1
    bbox <xmin> <xmax> <ymin> <ymax> <zmin> <zmax>
    resolution <nx> <ny> <nz>
    facet <k>
    <x> <y> <z>            (k lines)
    values
    <nx floats>            (ny * nz lines; z outermost, then y)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import DEFAULT_TOL, DegenerateSimplexError, Tolerance, as_simplex, circumcenter

__all__ = ["RegionGrid", "sample_region", "region_values", "write_region_grid", "read_region_grid"]

GRID_HEADER = "# wellcentered region grid v1"


@dataclass(eq=False)
class RegionGrid:
    bbox: np.ndarray  # (3, 2) rows are [min, max] per axis
    resolution: tuple
    values: np.ndarray  # indexed [iz, iy, ix]
    facet: np.ndarray

    def axes(self):
        return [np.linspace(lo, hi, n) for (lo, hi), n in zip(self.bbox, self.resolution)]

    def node(self, ix: int, iy: int, iz: int) -> np.ndarray:
        xs, ys, zs = self.axes()
        return np.array([xs[ix], ys[iy], zs[iz]])


def region_values(facet, points) -> np.ndarray:
    """``max_i det(A_i)`` for the cone over ``facet`` with apex at each point."""
    f = as_simplex(facet).vertices
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    k = f.shape[0] + 1
    origin = f[0]
    fv = f - origin
    pv = pts - origin
    n = len(pts)
    verts = np.empty((n, k, f.shape[1]))
    verts[:, :-1, :] = fv
    verts[:, -1, :] = pv
    gram = verts @ np.swapaxes(verts, 1, 2)
    a = np.zeros((n, k + 1, k + 1))
    a[:, :k, :k] = 2.0 * gram
    a[:, :k, k] = 1.0
    a[:, k, :k] = 1.0
    b = np.empty((n, k + 1))
    b[:, :k] = np.diagonal(gram, axis1=1, axis2=2)
    b[:, k] = 1.0
    out = np.full(n, -np.inf)
    for i in range(k):
        ai = a.copy()
        ai[:, :, i] = b
        out = np.maximum(out, np.linalg.det(ai))
    return out


def sample_region(facet, bbox, resolution, tol: Tolerance = DEFAULT_TOL) -> RegionGrid:
    f = as_simplex(facet)
    if f.ambient_dim != 3 or f.dim != 2:
        raise ValueError("region sampling needs a triangle in R^3")
    if circumcenter(f, tol).degenerate:
        raise DegenerateSimplexError("degenerate facet")
    box = np.asarray(bbox, dtype=float).reshape(3, 2)
    if np.any(box[:, 1] <= box[:, 0]):
        raise ValueError("empty bounding box")
    res = tuple(int(r) for r in np.broadcast_to(resolution, (3,)))
    if min(res) < 2:
        raise ValueError("resolution must be at least 2 per axis")
    xs, ys, zs = [np.linspace(lo, hi, n) for (lo, hi), n in zip(box, res)]
    zz, yy, xx = np.meshgrid(zs, ys, xs, indexing="ij")
    pts = np.stack([xx.ravel(), yy.ravel(), zz.ravel()], axis=1)
    vals = region_values(f, pts).reshape(res[2], res[1], res[0])
    return RegionGrid(box, res, vals, f.vertices.copy())


def write_region_grid(grid: RegionGrid, fh) -> None:
    fh.write(GRID_HEADER + "\n")
    fh.write("bbox " + " ".join(repr(float(x)) for x in grid.bbox.ravel()) + "\n")
    fh.write("resolution " + " ".join(str(r) for r in grid.resolution) + "\n")
    fh.write(f"facet {len(grid.facet)}\n")
    for p in grid.facet:
        fh.write(" ".join(repr(float(x)) for x in p) + "\n")
    fh.write("values\n")
    for plane in grid.values:
        for row in plane:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def read_region_grid(fh) -> RegionGrid:
    lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != GRID_HEADER:
        raise ValueError("line 1: not a region grid file")
    bbox = np.array([float(x) for x in lines[1].split()[1:]]).reshape(3, 2)
    res = tuple(int(x) for x in lines[2].split()[1:])
    k = int(lines[3].split()[1])
    facet = np.array([[float(x) for x in ln.split()] for ln in lines[4:4 + k]])
    if lines[4 + k] != "values":
        raise ValueError(f"line {5 + k}: expected 'values'")
    rows = [[float(x) for x in ln.split()] for ln in lines[5 + k:]]
    vals = np.array(rows).reshape(res[2], res[1], res[0])
    return RegionGrid(bbox, res, vals, facet)
