from itertools import permutations

import numpy as np
import pytest

from wellcentered.complex import (
    InvalidMeshError,
    InvalidTriangulationError,
    SphereTriangulation,
    TetMesh,
    canonical_form,
    cone_mesh,
    degree_list,
    double_pyramid,
    enumerate_sphere_triangulations,
    face_angles_acute_at,
    interior_vertices,
    is_isomorphic,
    link_of,
    octahedron_boundary,
    tetrahedron_boundary,
    validate_sphere,
)


def brute_isomorphic(a, b):
    if a.m != b.m or len(a.triangles) != len(b.triangles):
        return False
    target = b.triangle_set
    return any(frozenset(frozenset(p[x] for x in t) for t in a.triangles) == target
               for p in permutations(range(a.m)))


@pytest.mark.parametrize("m,count", [(4, 1), (5, 1), (6, 2), (7, 5), (8, 14)])
def test_enumeration_counts(m, count):
    tris = enumerate_sphere_triangulations(m)
    assert len(tris) == count
    for t in tris:
        assert validate_sphere(t.m, t.triangles)[0]
        assert sum(degree_list(t)) == 6 * (m - 2)


@pytest.mark.parametrize("m", [5, 6, 7])
def test_enumerated_classes_are_distinct(m):
    tris = enumerate_sphere_triangulations(m)
    for i in range(len(tris)):
        for j in range(i + 1, len(tris)):
            assert not brute_isomorphic(tris[i], tris[j])


@pytest.mark.parametrize("m", [4, 5, 6])
def test_canonical_form_invariant_under_every_relabeling(m):
    for t in enumerate_sphere_triangulations(m):
        key = canonical_form(t)
        for p in permutations(range(m)):
            assert canonical_form(t.relabel(p)) == key


def test_canonical_form_ignores_orientation():
    rng = np.random.default_rng(2)
    for t in enumerate_sphere_triangulations(8):
        p = rng.permutation(8)
        assert canonical_form(t.mirror().relabel(p)) == canonical_form(t)


def test_canonical_form_separates_brute_force_classes():
    tris = enumerate_sphere_triangulations(7)
    rng = np.random.default_rng(3)
    for a in tris:
        for b in tris:
            q = b.relabel(rng.permutation(7))
            assert is_isomorphic(a, q) == brute_isomorphic(a, q)


def test_validate_diagnostics():
    assert validate_sphere(3, [(0, 1, 2)]) == (False, "need at least 4 vertices, got 3")
    ok, why = validate_sphere(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3)])
    assert not ok and "lies in 1 triangle" in why
    ok, why = validate_sphere(5, tetrahedron_boundary().triangles)
    assert not ok and "in no triangle" in why
    # two tetrahedra glued at a vertex: every edge is fine, the pinch is not
    pinch = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2), (0, 4, 5), (0, 6, 4), (0, 5, 6), (4, 6, 5)]
    ok, why = validate_sphere(7, pinch)
    assert not ok and "not a single cycle" in why
    with pytest.raises(InvalidTriangulationError):
        SphereTriangulation(4, [(0, 1, 2)])


def test_degree_lists():
    assert degree_list(tetrahedron_boundary()) == (3, 3, 3, 3)
    assert degree_list(octahedron_boundary()) == (4,) * 6
    assert degree_list(double_pyramid(5)) == (5, 5, 4, 4, 4, 4, 4)


def test_remove_vertex():
    o = octahedron_boundary()
    r = o.remove_vertex(0, diagonal=(2, 4))
    assert r.m == 5 and degree_list(r) == (4, 4, 4, 3, 3)
    with pytest.raises(ValueError):
        o.remove_vertex(0)
    d = double_pyramid(5)
    with pytest.raises(ValueError, match="only degree 3 or 4"):
        d.remove_vertex(0)


def test_rotation_is_cyclic_order():
    o = octahedron_boundary()
    for v, ring in enumerate(o.rotation()):
        for i in range(len(ring)):
            a, b = ring[i], ring[(i + 1) % len(ring)]
            assert frozenset((v, a, b)) in o.triangle_set


# octahedron coordinates matching double_pyramid(4): apexes first, then the ring
OCTA_POINTS = np.array([(0, 0, 1), (0, 0, -1), (1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)], float)


def test_link_of_cone_is_the_surface():
    o = octahedron_boundary()
    mesh = cone_mesh((0, 0, 0), OCTA_POINTS, o.triangles)
    lk = link_of(mesh, 0)
    assert lk.is_interior
    assert is_isomorphic(lk.sphere, o)
    assert lk.vertices == list(range(1, 7))
    assert interior_vertices(mesh) == [0]
    assert not link_of(mesh, 1).is_interior


def test_tetmesh_orients_and_validates():
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    m = TetMesh(pts, [(1, 0, 2, 3)])
    p = m.tet_points(0)
    assert np.linalg.det(p[1:] - p[0]) > 0
    with pytest.raises(InvalidMeshError, match="degenerate"):
        TetMesh([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)], [(0, 1, 2, 3)])
    with pytest.raises(InvalidMeshError, match="out of range"):
        TetMesh(pts, [(0, 1, 2, 4)])
    with pytest.raises(InvalidMeshError, match="duplicate"):
        TetMesh(pts, [(0, 1, 2, 3), (3, 2, 1, 0)])


def test_face_angles_at_cone_apex():
    o = octahedron_boundary()
    mesh = cone_mesh((0, 0, 0), OCTA_POINTS, o.triangles)
    assert face_angles_acute_at(mesh, 0).boundary  # right angles everywhere
