"""
Testing one simplex
===================

A simplex is well-centered when its circumcenter sits strictly inside it.
Here we run the direct test next to the cheaper geometric criteria on a few
hand-picked tetrahedra.
"""

import numpy as np

from wellcentered.constructions import FIXTURES
from wellcentered.predicates import (
    cylinder_condition,
    equatorial_ball_test,
    is_n_well_centered,
    prism_condition,
)

############################################################
# A tetrahedron with its circumcenter at the origin. Every vertex projects
# inside the circumcircle of the opposite face, yet the tetrahedron is not
# well-centered: vertex 1 sits inside the equatorial ball of its facet.

tet = np.array(FIXTURES["tet-A"]["points"])
print("well-centered:", is_n_well_centered(tet).status)
for i in range(4):
    facet = np.delete(tet, i, axis=0)
    print(f"  vertex {i}: cylinder {cylinder_condition(facet, tet[i]).status}")
print("equatorial balls failing at:", equatorial_ball_test(tet).detail["failing"])

############################################################
# The prism test is sufficient but not necessary. On this tetrahedron two of
# its three parts pass; the bottom face is obtuse, so the first part fails.

tet = np.array(FIXTURES["tet-C"]["points"])
verdict = prism_condition(tet[:3], tet[3])
for part in "abc":
    print(f"  part {part}: {verdict.detail[part].status}  margin {verdict.detail[part].margin:+.4f}")
print("well-centered:", is_n_well_centered(tet).status)

############################################################
# Margins are scale free, and values too close to zero are reported as
# BOUNDARY instead of being forced either way. A cube corner is the classic
# example: its faces are right triangles.

corner = np.array(FIXTURES["cube-corner"]["points"])
print("cube corner:", is_n_well_centered(corner).status,
      "| cylinder at vertex 1:", cylinder_condition(corner[[0, 2, 3]], corner[1]).status)
