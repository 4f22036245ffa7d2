import io
import json
import subprocess
import sys

import numpy as np
import pytest

from wellcentered import io as wio
from wellcentered.cli import main
from wellcentered.complex import InvalidTriangulationError, canonical_form, octahedron_boundary
from wellcentered.constructions import cone_to_origin, kgon_sphere, load_fixture


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cwc_file(tmp_path):
    p = tmp_path / "cwc.mesh"
    with open(p, "w") as fh:
        wio.write_mesh(load_fixture("cwc-deg555555444"), fh)
    return p


def test_mesh_round_trip_is_exact():
    mesh = cone_to_origin(kgon_sphere(7))
    buf = io.StringIO()
    wio.write_mesh(mesh, buf)
    back = wio.read_mesh(io.StringIO(buf.getvalue()))
    np.testing.assert_array_equal(back.vertices, mesh.vertices)
    np.testing.assert_array_equal(back.cells, mesh.tets)
    again = io.StringIO()
    wio.write_mesh(back, again)
    assert again.getvalue() == buf.getvalue()


def test_mesh_comments_and_empty():
    text = "# header comment\n2 3 1\n0 0\n1 0 # trailing\n0 1\n0 1 2\n"
    mf = wio.read_mesh(io.StringIO(text))
    assert mf.dim == 2 and mf.cells.tolist() == [[0, 1, 2]]
    empty = wio.read_mesh(io.StringIO("3 0 0\n"))
    assert empty.vertices.shape == (0, 3)


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("3 1 0\n0 0\n", 2),
    ("3 2 0\n0 0 0\n", 3),
    ("3 1 0\n0 0 x\n", 2),
    ("2 3 1\n0 0\n1 0\n0 1\n0 1 5\n", 5),
    ("2 3 1\n0 0\n1 0\n0 1\n0 1 2\nextra\n", 6),
    ("3 1 0\nnan 0 0\n", 2),
])
def test_mesh_errors_name_the_line(text, line):
    with pytest.raises(wio.ParseError) as e:
        wio.read_mesh(io.StringIO(text))
    assert e.value.line == line
    assert str(e.value).startswith(f"line {line}:")


def test_link_round_trip():
    o = octahedron_boundary()
    buf = io.StringIO()
    wio.write_link(o, buf)
    assert canonical_form(wio.read_link(io.StringIO(buf.getvalue()))) == canonical_form(o)
    with pytest.raises(InvalidTriangulationError):
        wio.read_link(io.StringIO("4 1\n0 1 2\n"))


def test_off_reader():
    text = "OFF\n6 8 12\n" + "\n".join(
        " ".join(map(str, p)) for p in [(0, 0, 1), (0, 0, -1), (1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)]
    ) + "\n" + "\n".join(f"3 {a} {b} {c}" for a, b, c in octahedron_boundary().triangles) + "\n"
    pts, tri = wio.read_off(io.StringIO(text))
    assert pts.shape == (6, 3) and tri.m == 6
    with pytest.raises(wio.ParseError, match="only triangular"):
        wio.read_off(io.StringIO("OFF 4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n4 0 1 2 3\n"))


def test_records_round_trip():
    buf = io.StringIO()
    wio.write_records(buf, "demo", [{"a": np.float64(1.5), "b": np.arange(3)}], {"n": np.int64(1)})
    header, recs, summary = wio.read_records(io.StringIO(buf.getvalue()))
    assert header["kind"] == "demo" and recs == [{"a": 1.5, "b": [0, 1, 2]}] and summary == {"n": 1}
    with pytest.raises(ValueError):
        wio.read_records(io.StringIO('{"format":"x"}\n'))


def test_check_command(capsys, cwc_file):
    code, out, _ = run(capsys, "check", cwc_file)
    assert code == 0
    code, out, _ = run(capsys, "check", cwc_file, "--format", "records")
    header, recs, summary = wio.read_records(io.StringIO(out))
    assert header["kind"] == "check"
    assert summary["SATISFIED"] == summary["cells"] == 14 and summary["exit"] == 0
    assert summary["interior_vertices"] == 1


def test_check_fails_on_bad_cell(capsys, tmp_path):
    p = tmp_path / "a.mesh"
    with open(p, "w") as fh:
        wio.write_mesh(load_fixture("tet-A"), fh)
    assert run(capsys, "check", p, "--k", "3")[0] == 1
    assert run(capsys, "check", p, "--k", "1")[0] == 0


def test_bad_input_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.mesh"
    p.write_text("3 2 0\n0 0 0\n")
    code, _, err = run(capsys, "check", p)
    assert code == 2 and err.startswith("error: line 3:")
    code, _, err = run(capsys, "check", tmp_path / "missing.mesh")
    assert code == 2


def test_generate_and_check(capsys, tmp_path):
    out = tmp_path / "k7.mesh"
    assert run(capsys, "generate", "kgon", "--k", 7, "-o", out)[0] == 0
    assert out.read_text().splitlines()[0] == "3 17 28"
    assert run(capsys, "check", out)[0] == 0
    code, text, _ = run(capsys, "generate", "band", "--m", 8)
    assert code == 0 and text.splitlines()[0] == "8 12"


def test_generate_insertion_chain(capsys, tmp_path):
    a, b = tmp_path / "a.mesh", tmp_path / "b.mesh"
    run(capsys, "generate", "kgon", "--k", 7, "-o", a)
    assert run(capsys, "generate", "insert-deg3-3wc", a, "--vertex", 0, "--tet", 0, "-o", b)[0] == 0
    assert b.read_text().splitlines()[0] == "3 18 30"
    assert run(capsys, "check", b, "--k", 3)[0] == 0


def test_classify_link_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "classify-link", "--enumerate", 7, "--format", "records")
    _, recs, summary = wio.read_records(io.StringIO(out))
    assert len(recs) == 5
    assert sum(r["wc3"]["status"] == "BLOCKED" for r in recs) == 3
    p = tmp_path / "band.link"
    run(capsys, "generate", "band", "--m", 10, "-o", p)
    code, out, _ = run(capsys, "classify-link", p)
    assert "BLOCKED" in out


def test_region_command(capsys, tmp_path):
    out = tmp_path / "r.grid"
    args = ["region", "--facet", 0, 0, 0, 1, 0, 0, 0.4, 0.8, 0, "--bbox", -1, 1, -1, 1, -1, 1,
            "--res", 4, "-o", out]
    assert run(capsys, *args)[0] == 0
    assert out.read_text().startswith("# wellcentered region grid v1")
    with pytest.raises(SystemExit):
        main(["region", "--facet"] + ["0"] * 9 + ["--bbox"] + ["0", "1"] * 3 + ["--res", "2", "3"])


def test_cube_audit_command(capsys, tmp_path):
    p = tmp_path / "c5.mesh"
    run(capsys, "generate", "cube", "--split", 5, "-o", p)
    code, out, _ = run(capsys, "cube-audit", p, "--format", "records")
    _, recs, _ = wio.read_records(io.StringIO(out))
    assert code == 1 and recs[0]["corner_tets"] == [1, 2, 3, 4]


def test_seed_determinism(capsys, tmp_path):
    args = ["classify-link", "--enumerate", 7, "--witness", "--restarts", 4, "--format", "records",
            "--seed", 11]
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second
    json.loads(first.splitlines()[0])


def test_console_script_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "wellcentered.cli", "generate", "band", "--m", "6"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("6 8")


@pytest.mark.parametrize("m,records,wc3_blocked,wc2_blocked", [(6, 2, 2, 2), (8, 14, 5, 14)])
def test_enumerate_summary(capsys, m, records, wc3_blocked, wc2_blocked):
    _, out, _ = run(capsys, "classify-link", "--enumerate", m, "--format", "records")
    _, recs, _ = wio.read_records(io.StringIO(out))
    assert len(recs) == records
    assert sum(r["wc3"]["status"] == "BLOCKED" for r in recs) == wc3_blocked
    assert sum(r["wc2"]["status"] == "BLOCKED" for r in recs) == wc2_blocked


def test_generate_fixture_exact(capsys):
    from wellcentered.constructions import FIXTURES

    code, out, _ = run(capsys, "generate", "fixture", "tet-C")
    mf = wio.read_mesh(io.StringIO(out))
    assert code == 0 and mf.cells.shape == (1, 4)
    assert sorted(map(tuple, mf.vertices.tolist())) == sorted(FIXTURES["tet-C"]["points"])


def test_empty_mesh_check(capsys, tmp_path):
    p = tmp_path / "e.mesh"
    p.write_text("3 0 0\n")
    assert run(capsys, "check", p)[0] == 0
