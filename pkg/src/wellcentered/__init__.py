"""Well-centered simplices, vertex-link obstructions and explicit constructions."""

from .complex import (
    SphereTriangulation,
    TetMesh,
    canonical_form,
    degree_list,
    enumerate_sphere_triangulations,
    link_of,
)
from .constructions import KgonSpec, cone_to_origin, kgon_sphere, load_fixture
from .geometry import DEFAULT_TOL, Simplex, Tolerance, circumcenter
from .links import classify_link, nminus3_test, search_certificate, verify_certificate
from .predicates import (
    Status,
    WcVerdict,
    cylinder_condition,
    equatorial_ball_test,
    is_completely_well_centered,
    is_k_well_centered,
    is_n_well_centered,
    polynomial_region_test,
    prism_condition,
)

__all__ = [
    "DEFAULT_TOL",
    "KgonSpec",
    "Simplex",
    "SphereTriangulation",
    "Status",
    "TetMesh",
    "Tolerance",
    "WcVerdict",
    "canonical_form",
    "circumcenter",
    "classify_link",
    "cone_to_origin",
    "cylinder_condition",
    "degree_list",
    "enumerate_sphere_triangulations",
    "equatorial_ball_test",
    "is_completely_well_centered",
    "is_k_well_centered",
    "is_n_well_centered",
    "kgon_sphere",
    "link_of",
    "load_fixture",
    "nminus3_test",
    "polynomial_region_test",
    "prism_condition",
    "search_certificate",
    "verify_certificate",
]
