"""
Building well-centered meshes
=============================

Two stacked, twisted regular polygons plus two poles make an acute
triangulation of the sphere. Coning it to the center gives a completely
well-centered ball, and local insertions grow it further.
"""

from wellcentered.complex import face_angles_acute_at, link_of
from wellcentered.constructions import (
    cone_to_origin,
    insert_degree3_2wc,
    insert_degree3_3wc,
    kgon_sphere,
    load_fixture,
)
from wellcentered.predicates import is_completely_well_centered, is_n_well_centered


def count_ok(mesh, test):
    return sum(test(mesh.tet_points(i)).satisfied for i in range(len(mesh)))


############################################################
# The heptagon version: 16 surface points, 28 triangles.

surface = kgon_sphere(7)
mesh = cone_to_origin(surface)
print(len(surface.points), "points,", len(surface.triangles), "triangles")
print(count_ok(mesh, is_completely_well_centered), "of", len(mesh), "cones completely well-centered")

############################################################
# Split a tetrahedron at the center, five times, always picking the best
# shaped candidate that still faces the boundary.

for step in range(5):
    bf = set(mesh.boundary_faces())
    cands = [i for i, t in enumerate(mesh.tets.tolist())
             if 0 in t and tuple(sorted(x for x in t if x != 0)) in bf]
    best = max(cands, key=lambda i: is_n_well_centered(mesh.tet_points(i)).margin)
    mesh = insert_degree3_3wc(mesh, 0, best)
    print(f"step {step}: {len(mesh)} tets, link of the center has {len(link_of(mesh, 0).vertices)} vertices,",
          f"{count_ok(mesh, is_n_well_centered)} well-centered")

############################################################
# A completely well-centered star and a 2-well-centered insertion.

star = load_fixture("cwc-deg555555444")
face = link_of(star, 0).triangles[0]
grown = insert_degree3_2wc(star, 0, face)
print("face angles at the center:", face_angles_acute_at(grown, 0).status)
