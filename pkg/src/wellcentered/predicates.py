"""Well-centeredness predicates for single simplices.

Every test returns a :class:`WcVerdict` with a signed, scale-free margin.
Positive margins mean the open condition holds; margins inside the
tolerance band are reported as BOUNDARY instead of being forced either way.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from math import sqrt

import numpy as np

from .geometry import (
    DEFAULT_TOL,
    DegenerateSimplexError,
    Tolerance,
    as_simplex,
    barycentric_coordinates,
    circumcenter,
    det_A,
    det_Ai,
    project_to_aff,
)

__all__ = [
    "Status",
    "WcVerdict",
    "classify_margin",
    "combine",
    "is_n_well_centered",
    "is_k_well_centered",
    "is_completely_well_centered",
    "equatorial_ball_test",
    "one_facet_equatorial_ball",
    "cylinder_condition",
    "prism_condition",
    "polynomial_region_test",
    "isosceles_cone_test",
    "is_acute_triangle",
]


class Status(str, enum.Enum):
    SATISFIED = "SATISFIED"
    VIOLATED = "VIOLATED"
    BOUNDARY = "BOUNDARY"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class WcVerdict:
    status: Status
    margin: float
    detail: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.status is Status.SATISFIED

    @property
    def satisfied(self) -> bool:
        return self.status is Status.SATISFIED

    @property
    def violated(self) -> bool:
        return self.status is Status.VIOLATED

    @property
    def boundary(self) -> bool:
        return self.status is Status.BOUNDARY


def classify_margin(margin: float, band: float) -> Status:
    if margin > band:
        return Status.SATISFIED
    if margin < -band:
        return Status.VIOLATED
    return Status.BOUNDARY


def combine(verdicts, detail=None) -> WcVerdict:
    """Conjunction: worst status wins, margin is the minimum."""
    verdicts = list(verdicts)
    if not verdicts:
        return WcVerdict(Status.SATISFIED, np.inf, detail or {})
    if any(v.violated for v in verdicts):
        status = Status.VIOLATED
    elif any(v.boundary for v in verdicts):
        status = Status.BOUNDARY
    else:
        status = Status.SATISFIED
    return WcVerdict(status, min(v.margin for v in verdicts), detail or {})


def _nondegenerate(simplex, tol):
    cd = circumcenter(simplex, tol)
    if cd.degenerate:
        raise DegenerateSimplexError("degenerate simplex")
    return cd


def is_n_well_centered(simplex, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    """Circumcenter strictly inside: every barycentric coordinate positive."""
    s = as_simplex(simplex)
    cd = _nondegenerate(s, tol)
    alpha = cd.barycentric
    margin = float(alpha.min())
    return WcVerdict(
        classify_margin(margin, tol.band()),
        margin,
        {"barycentric": alpha.tolist(), "center": cd.center.tolist(), "radius": cd.radius},
    )


def is_k_well_centered(simplex, k: int, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    s = as_simplex(simplex)
    if not 1 <= k <= s.dim:
        raise ValueError(f"k must be in 1..{s.dim}")
    _nondegenerate(s, tol)
    if k == 1:
        # every edge contains its midpoint
        return WcVerdict(Status.SATISFIED, 0.5, {"k": 1, "faces": {}})
    faces = {}
    verdicts = []
    for idx in combinations(range(s.dim + 1), k + 1):
        v = is_n_well_centered(s.face(idx), tol)
        faces[idx] = v
        verdicts.append(v)
    worst = min(faces, key=lambda f: faces[f].margin)
    return combine(verdicts, {"k": k, "faces": faces, "worst_face": worst})


def is_completely_well_centered(simplex, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    s = as_simplex(simplex)
    per_k = {k: is_k_well_centered(s, k, tol) for k in range(1, s.dim + 1)}
    return combine(per_k.values(), {"per_k": per_k})


def one_facet_equatorial_ball(facet, apex, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    """Apex strictly outside the equatorial ball of ``facet``."""
    cd = _nondegenerate(facet, tol)
    dist = float(np.linalg.norm(np.asarray(apex, dtype=float) - cd.center))
    margin = (dist - cd.radius) / cd.radius
    return WcVerdict(
        classify_margin(margin, tol.band()),
        margin,
        {"distance": dist, "radius": cd.radius, "center": cd.center.tolist()},
    )


def equatorial_ball_test(simplex, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    """Each vertex outside the equatorial ball of its opposite facet."""
    s = as_simplex(simplex)
    _nondegenerate(s, tol)
    per_vertex = [one_facet_equatorial_ball(s.facet(i), s[i], tol) for i in range(s.dim + 1)]
    return combine(
        per_vertex,
        {
            "per_vertex": per_vertex,
            "failing": [i for i, v in enumerate(per_vertex) if not v.satisfied],
        },
    )


def cylinder_condition(facet, apex, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    """Apex projects into the open circumball of ``facet``."""
    cd = _nondegenerate(facet, tol)
    p = project_to_aff(apex, facet, tol)
    dist = float(np.linalg.norm(p - cd.center))
    margin = (cd.radius - dist) / cd.radius
    return WcVerdict(
        classify_margin(margin, tol.band()),
        margin,
        {"projection": p.tolist(), "distance": dist, "radius": cd.radius,
         "center": cd.center.tolist()},
    )


def prism_condition(facet, apex, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    """Sufficient condition for ``cone(apex, facet)`` to be well-centered.

    (a) the facet is well-centered in its own dimension, (b) the apex is
    outside the facet's equatorial ball, (c) the reflection of the apex's
    projection through the facet circumcenter lies inside the facet.
    """
    f = as_simplex(facet)
    cd = _nondegenerate(f, tol)
    if f.dim >= 1:
        a = is_n_well_centered(f, tol)
    else:
        a = WcVerdict(Status.SATISFIED, 1.0)
    b = one_facet_equatorial_ball(f, apex, tol)
    p = project_to_aff(apex, f, tol)
    reflected = 2.0 * cd.center - p
    bary = barycentric_coordinates(reflected, f, tol)
    c_margin = float(bary.min())
    c = WcVerdict(classify_margin(c_margin, tol.band()), c_margin,
                  {"reflection": reflected.tolist(), "barycentric": bary.tolist()})
    parts = {"a": a, "b": b, "c": c}
    out = combine(parts.values())
    return WcVerdict(out.status, out.margin,
                     {**parts, "failing": [k for k, v in parts.items() if not v.satisfied]})


def polynomial_region_test(facet, apex, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    """Sign test on the cubic polynomials ``det(A_i)``; margin is ``min alpha_i``."""
    f = as_simplex(facet)
    _nondegenerate(f, tol)
    cone = f.cone(apex)
    if circumcenter(cone, tol).degenerate:
        raise DegenerateSimplexError("apex in facet plane")
    da = det_A(f, apex)
    dai = np.array([det_Ai(f, apex, i) for i in range(f.dim + 2)])
    margin = float(-dai.max() / abs(da))
    return WcVerdict(
        classify_margin(margin, tol.band()),
        margin,
        {"det_A": da, "det_Ai": dai.tolist()},
    )


def isosceles_cone_test(apex, facet, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    """Well-centeredness of a cone whose base lies on a sphere about the apex.

    Satisfied when the base is well-centered and its plane is farther than
    ``r / sqrt(2)`` from the apex.  The conclusion is re-checked directly on
    the cone rather than taken on faith.
    """
    f = as_simplex(facet)
    apex = np.asarray(apex, dtype=float)
    radii = np.linalg.norm(f.vertices - apex, axis=1)
    r = float(radii.mean())
    if r == 0 or np.ptp(radii) > max(tol.rel * r, tol.abs) * 1e3:
        raise ValueError("not isosceles")
    base = is_n_well_centered(f, tol) if f.dim >= 1 else WcVerdict(Status.SATISFIED, 1.0)
    height = float(np.linalg.norm(apex - project_to_aff(apex, f, tol)))
    h_margin = height / r - 1.0 / sqrt(2.0)
    h = WcVerdict(classify_margin(h_margin, tol.band()), h_margin, {"height": height, "radius": r})
    out = combine([base, h])
    cone_check = is_n_well_centered(f.cone(apex), tol)
    if out.satisfied and not cone_check.satisfied:
        raise AssertionError("isosceles criterion satisfied but cone is not well-centered")
    return WcVerdict(out.status, out.margin, {"base": base, "height": h, "cone": cone_check})


def is_acute_triangle(simplex, tol: Tolerance = DEFAULT_TOL) -> WcVerdict:
    """Dot-product angle test; margin is the smallest angle cosine."""
    v = as_simplex(simplex).vertices
    if len(v) != 3:
        raise ValueError("need a triangle")
    cosines = []
    for i in range(3):
        a = v[(i + 1) % 3] - v[i]
        b = v[(i + 2) % 3] - v[i]
        cosines.append(float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b))))
    margin = min(cosines)
    return WcVerdict(classify_margin(margin, tol.band()), margin, {"cosines": cosines})
