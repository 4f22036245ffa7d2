"""
Why the cube is hard
====================

The familiar 5- and 6-tetrahedron cube splits both fail, for different
reasons. The audit finds those reasons and recomputes the counting bounds.
"""

from wellcentered.cube import cube_audit, cube_five_tets, cube_six_tets

for name, mesh in [("5-tet", cube_five_tets()), ("6-tet", cube_six_tets())]:
    a = cube_audit(mesh)
    print(name, "| corner tets", a.corner_tets,
          "| faces with two right triangles", sum(bool(p) for p in a.right_pairs.values()),
          "| tet statuses", sorted({s["3wc"] for s in a.tet_status}))

############################################################
# Each face needs at least 3 triangles for a 3-well-centered mesh and 8 for
# a 2-well-centered one; a tetrahedron touches at most two faces.

print("lower bounds:", cube_audit(cube_five_tets()).lower_bounds)
