import pytest

from wellcentered.complex import (
    degree_list,
    double_pyramid,
    enumerate_sphere_triangulations,
    octahedron_boundary,
    tetrahedron_boundary,
)
from wellcentered.links import (
    CertificateComplex,
    SearchCapExceeded,
    acute_link_embedding,
    candidate_tets,
    classify_link,
    degree3_reduction_blocked,
    embedding_is_valid,
    generate_band_family,
    nminus3_test,
    search_certificate,
    verify_certificate,
)


def brute_force_has_certificate(L):
    """Scan every subset of the candidate pool that covers L exactly once."""
    pool = candidate_tets(L)
    ltris = sorted(tuple(sorted(t)) for t in L.triangles)
    index = {t: i for i, t in enumerate(ltris)}
    masks = []
    for t in pool:
        mask = 0
        for j in range(4):
            f = tuple(x for k, x in enumerate(t) if k != j)
            if f in index:
                mask |= 1 << index[f]
        masks.append(mask)
    full = (1 << len(ltris)) - 1
    for s in range(1, 1 << len(pool)):
        acc = 0
        ok = True
        bits = s
        while bits:
            i = (bits & -bits).bit_length() - 1
            if acc & masks[i]:
                ok = False
                break
            acc |= masks[i]
            bits &= bits - 1
        if ok and acc == full:
            K = CertificateComplex([pool[i] for i in range(len(pool)) if s >> i & 1])
            if verify_certificate(K, L):
                return True
    return False


@pytest.mark.parametrize("m", [4, 5, 6, 7, 8])
def test_search_matches_brute_force(m):
    for L in enumerate_sphere_triangulations(m):
        K = search_certificate(L)
        assert (K is not None) == brute_force_has_certificate(L)
        if K is not None:
            assert verify_certificate(K, L)


@pytest.mark.parametrize("m,certified", [(7, 3), (8, 5)])
def test_brute_force_counts(m, certified):
    assert sum(brute_force_has_certificate(L) for L in enumerate_sphere_triangulations(m)) == certified


def test_small_links_certified():
    for m in (4, 5, 6):
        assert all(search_certificate(L) is not None for L in enumerate_sphere_triangulations(m))


def test_tetrahedron_certificate_is_single_tet():
    K = search_certificate(tetrahedron_boundary())
    assert K.tets == ((0, 1, 2, 3),)


def test_verify_diagnostics():
    L = octahedron_boundary()
    assert verify_certificate(CertificateComplex([]), L).diagnostic == "empty complex"
    bad = verify_certificate(CertificateComplex([(0, 1, 2, 9)]), L)
    assert not bad and "not vertices of L" in bad.diagnostic
    # four tetrahedra around the axis 0-1 fill the octahedron
    K = CertificateComplex([(0, 1, 2, 3), (0, 1, 3, 4), (0, 1, 4, 5), (0, 1, 5, 2)])
    assert verify_certificate(K, L)
    partial = verify_certificate(CertificateComplex(K.tets[:3]), L)
    assert not partial and "boundary mismatch" in partial.diagnostic


def test_verify_rejects_pinched_complex():
    # two tetrahedra sharing only a vertex: boundary is two spheres, not L
    L = tetrahedron_boundary()
    K = CertificateComplex([(0, 1, 2, 3), (0, 4, 5, 6)])
    assert not verify_certificate(K, L)


@pytest.mark.parametrize("m", [6, 7, 8, 10, 12])
def test_band_family_closed(m):
    K, L = generate_band_family(m)
    assert len(K.tets) == m - 2
    assert degree_list(L) == tuple(sorted([m - 2, m - 2] + [4] * (m - 2), reverse=True))
    assert verify_certificate(K, L)
    assert search_certificate(L) is not None


@pytest.mark.parametrize("m", [5, 7, 9])
def test_band_family_open(m):
    K, L = generate_band_family(m, closed=False)
    assert degree_list(L) == tuple(sorted([m - 1, m - 1] + [4] * (m - 4) + [3, 3], reverse=True))
    assert verify_certificate(K, L)


def test_band_family_rejects_small_m():
    with pytest.raises(ValueError):
        generate_band_family(5)


def test_pool_cap():
    with pytest.raises(SearchCapExceeded, match="search cap exceeded"):
        search_certificate(double_pyramid(8), pool_cap=4)


def test_nminus3():
    assert nminus3_test(double_pyramid(5))  # degree 5 >= 7 - 3
    assert nminus3_test(octahedron_boundary())  # 4 >= 3
    survivors = [L for L in enumerate_sphere_triangulations(9) if not nminus3_test(L)]
    assert all(max(degree_list(L)) <= 5 for L in survivors)


def test_degree3_reduction():
    surv = [L for L in enumerate_sphere_triangulations(9) if not degree3_reduction_blocked(L)]
    assert [degree_list(L) for L in surv] == [(5, 5, 5, 5, 5, 5, 4, 4, 4)]


def icosahedron_link():
    from wellcentered.constructions import icosahedron_surface
    s = icosahedron_surface()
    return s.sphere, s.points


def test_embedding_validity_check():
    L, pts = icosahedron_link()
    assert embedding_is_valid(pts, L)
    flipped = pts.copy()
    flipped[0] = -flipped[0]
    assert not embedding_is_valid(flipped, L)


def test_acute_embedding_found_for_icosahedron():
    L, _ = icosahedron_link()
    x = acute_link_embedding(L, restarts=4, seed=1)
    assert x is not None and embedding_is_valid(x, L)
    for a, b in L.edges:
        assert x[a] @ x[b] > 0


def test_acute_embedding_impossible_for_tetrahedron():
    assert acute_link_embedding(tetrahedron_boundary(), restarts=2, seed=0) is None


def test_classify_record_shape():
    c = classify_link(octahedron_boundary())
    rec = c.to_record()
    assert rec["wc3"]["status"] == "BLOCKED"
    assert rec["wc2"] == {"status": "BLOCKED", "reason": "degree"}
    assert rec["degree_list"] == [4] * 6
