import numpy as np
import pytest

from wellcentered.complex import TetMesh
from wellcentered.cube import NotACubeError, cube_audit, cube_five_tets, cube_six_tets


def test_five_tet_split():
    a = cube_audit(cube_five_tets())
    assert a.corner_tets == [1, 2, 3, 4]
    # each face is still two right triangles on a diagonal
    assert all(len(p) == 1 for p in a.right_pairs.values())
    assert [s["3wc"] for s in a.tet_status] == ["SATISFIED"] + ["VIOLATED"] * 4
    assert a.flagged


def test_six_tet_split():
    a = cube_audit(cube_six_tets())
    assert a.corner_tets == []
    assert all(len(p) == 1 for p in a.right_pairs.values())
    assert all(c == 2 for c in a.face_counts.values())
    assert {s["3wc"] for s in a.tet_status} == {"BOUNDARY"}
    assert a.flagged


@pytest.mark.parametrize("make", [cube_five_tets, cube_six_tets])
def test_bounds(make):
    a = cube_audit(make())
    assert a.lower_bounds == {3: 9, 2: 24}
    assert a.below_bound == {3: True, 2: True}


def test_split_volume_and_record():
    for make in (cube_five_tets, cube_six_tets):
        m = make()
        vol = sum(abs(np.linalg.det(m.tet_points(i)[1:] - m.tet_points(i)[0])) / 6 for i in range(len(m)))
        assert vol == pytest.approx(1.0)
    rec = cube_audit(cube_six_tets()).to_record()
    assert set(rec["face_triangle_counts"]) == {"x=0", "x=1", "y=0", "y=1", "z=0", "z=1"}


def test_rejects_non_cube():
    tet = TetMesh([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2, 3)])
    with pytest.raises(NotACubeError, match="volume"):
        cube_audit(tet)
    big = TetMesh([(0, 0, 0), (2, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2, 3)])
    with pytest.raises(NotACubeError):
        cube_audit(big)
