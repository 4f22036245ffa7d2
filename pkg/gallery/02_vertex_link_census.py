"""
Which vertex links are possible?
================================

The link of an interior vertex is a triangulated sphere. Some triangulations
can never appear around a vertex of a well-centered mesh, and for many of
them a small combinatorial object proves it.
"""

from collections import Counter

from wellcentered.complex import degree_list, enumerate_sphere_triangulations
from wellcentered.links import classify_link, generate_band_family, verify_certificate

############################################################
# Classify every sphere triangulation with up to 9 vertices.

for m in range(4, 10):
    links = enumerate_sphere_triangulations(m)
    results = [classify_link(L) for L in links]
    wc3 = Counter(r.wc3_status for r in results)
    wc2 = Counter(r.wc2_status for r in results)
    print(f"m={m}: {len(links):3d} links | 3-WC blocked {wc3['BLOCKED']:3d} | 2-WC blocked {wc2['BLOCKED']:3d}")

############################################################
# On seven vertices exactly two links escape the certificate search.

for L in enumerate_sphere_triangulations(7):
    r = classify_link(L)
    if r.wc3_status != "BLOCKED":
        print("no certificate:", r.degree_list)

############################################################
# A fan of tetrahedra around one edge is its own certificate, for every m.

for m in (6, 8, 12):
    K, L = generate_band_family(m)
    print(m, degree_list(L), bool(verify_certificate(K, L)))
