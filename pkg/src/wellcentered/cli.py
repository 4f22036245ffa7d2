"""Command-line interface: ``wellcentered <command> ...``.

Exit codes: 0 when every requested check is satisfied (or the command only
generates output), 1 when something is violated, on the boundary or
flagged, 2 on bad input.  ``--format records`` emits the line-delimited JSON
described in docs/FORMATS.md.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

import numpy as np

from . import io as wio
from .complex import (
    InvalidMeshError,
    InvalidTriangulationError,
    TetMesh,
    degree_list,
    enumerate_sphere_triangulations,
    link_of,
)
from .constructions import (
    FIXTURES,
    KgonSpec,
    PreconditionError,
    cone_to_origin,
    insert_degree3_2wc,
    insert_degree3_3wc,
    insert_degree4_2wc,
    kgon_sphere,
    load_fixture,
)
from .cube import NotACubeError, cube_audit, cube_five_tets, cube_six_tets
from .geometry import DegenerateSimplexError, Tolerance, circumcenter
from .links import SearchCapExceeded, classify_link, generate_band_family, search_certificate
from .predicates import Status, is_k_well_centered
from .region import sample_region, write_region_grid

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _tol(args) -> Tolerance:
    return Tolerance(rel=args.tol)


# --- check -----------------------------------------------------------------

def _ks(arg, dim):
    if arg == "all":
        return list(range(1, dim + 1))
    k = int(arg)
    if not 1 <= k <= dim:
        raise UsageError(f"--k must be between 1 and {dim}")
    return [k]


def cmd_check(args) -> int:
    with open(args.mesh) as fh:
        mf = wio.read_mesh(fh)
    tol = _tol(args)
    ks = _ks(args.k, mf.dim)
    cells = []
    counts = {"SATISFIED": 0, "VIOLATED": 0, "BOUNDARY": 0, "DEGENERATE": 0}
    worst = {}
    for i, c in enumerate(mf.cells.tolist()):
        pts = mf.vertices[c]
        rec = {"cell": i, "vertices": c}
        if circumcenter(pts, tol).degenerate:
            rec["status"] = "DEGENERATE"
            counts["DEGENERATE"] += 1
            cells.append(rec)
            continue
        per_k = {}
        statuses = []
        for k in ks:
            v = is_k_well_centered(pts, k, tol)
            per_k[str(k)] = {"status": v.status.value, "margin": v.margin}
            statuses.append(v.status)
            if k not in worst or v.margin < worst[k]:
                worst[k] = v.margin
        if Status.VIOLATED in statuses:
            st = "VIOLATED"
        elif Status.BOUNDARY in statuses:
            st = "BOUNDARY"
        else:
            st = "SATISFIED"
        rec["status"] = st
        rec["k"] = per_k
        counts[st] += 1
        cells.append(rec)

    vertices = []
    if mf.dim == 3 and mf.vertices.shape[1] == 3 and len(mf.cells) and not counts["DEGENERATE"]:
        mesh = mf.to_tetmesh(check=False)
        for v in range(mesh.num_vertices):
            lk = link_of(mesh, v)
            if not lk.is_interior:
                continue
            rec = {"vertex": v, "incident_edges": len(lk.vertices),
                   "degree_list": list(degree_list(lk.sphere)),
                   "below_3wc_edge_bound": len(lk.vertices) < 7,
                   "below_2wc_edge_bound": len(lk.vertices) < 9}
            try:
                cert = search_certificate(lk.sphere)
                rec["wc3_link"] = "BLOCKED" if cert is not None else "UNKNOWN"
            except SearchCapExceeded:
                rec["wc3_link"] = "SEARCH_CAP"
            vertices.append(rec)

    summary = {"cells": len(cells), "k": ks, **counts,
               "worst_margin": {str(k): m for k, m in sorted(worst.items())},
               "interior_vertices": len(vertices)}
    ok = counts["SATISFIED"] == len(cells)
    summary["exit"] = EXIT_OK if ok else EXIT_FAIL
    if args.format == "records":
        wio.write_records(sys.stdout, "check", cells + vertices, summary)
    else:
        print(f"cells: {len(cells)}  k: {','.join(map(str, ks))}")
        for key in ("SATISFIED", "VIOLATED", "BOUNDARY", "DEGENERATE"):
            print(f"{key.lower()}: {counts[key]}")
        for k, m in sorted(worst.items()):
            print(f"worst margin k={k}: {m:.6g}")
        for label in ("VIOLATED", "BOUNDARY", "DEGENERATE"):
            bad = [r["cell"] for r in cells if r["status"] == label]
            if bad:
                print(f"{label.lower()} cells: {' '.join(map(str, bad))}")
        for r in vertices:
            flags = []
            if r["below_3wc_edge_bound"]:
                flags.append("below 7-edge bound")
            if r["below_2wc_edge_bound"]:
                flags.append("below 9-edge bound")
            print(f"interior vertex {r['vertex']}: {r['incident_edges']} edges, "
                  f"link {tuple(r['degree_list'])}, link 3wc {r['wc3_link']}"
                  + (f" ({', '.join(flags)})" if flags else ""))
    return summary["exit"]


# --- classify-link ---------------------------------------------------------

def _classify_one(job):
    tri, witness, restarts, seed = job
    return classify_link(tri, witness=witness, restarts=restarts, seed=seed).to_record()


def _load_link(path):
    with open(path) as fh:
        if path.lower().endswith(".off"):
            return wio.read_off(fh)[1]
        return wio.read_link(fh)


def cmd_classify_link(args) -> int:
    if (args.link is None) == (args.enumerate is None):
        raise UsageError("give either a link file or --enumerate M")
    links = _load_link_list(args)
    jobs = [(t, args.witness, args.restarts, args.seed) for t in links]
    if args.parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as ex:
            records = list(ex.map(_classify_one, jobs))
    else:
        records = [_classify_one(j) for j in jobs]
    summary = {"links": len(records)}
    for key in ("wc3", "wc2"):
        for st in sorted({r[key]["status"] for r in records}):
            summary[f"{key}_{st}"] = sum(1 for r in records if r[key]["status"] == st)
    if args.format == "records":
        wio.write_records(sys.stdout, "classify-link", records, summary)
    else:
        for r in records:
            line = (f"{r['canonical']}  degrees {tuple(r['degree_list'])}  "
                    f"wc3 {r['wc3']['status']}  wc2 {r['wc2']['status']}")
            if "reason" in r["wc2"]:
                line += f" ({r['wc2']['reason']})"
            print(line)
            if "certificate" in r["wc3"] and args.enumerate is None:
                print("  certificate: " + " ".join("[" + " ".join(map(str, t)) + "]"
                                                   for t in r["wc3"]["certificate"]))
        print(" ".join(f"{k}={v}" for k, v in summary.items()))
    return EXIT_OK


def _load_link_list(args):
    if args.enumerate is not None:
        return enumerate_sphere_triangulations(args.enumerate)
    return [_load_link(args.link)]


# --- generate --------------------------------------------------------------

def _load_tetmesh(path) -> TetMesh:
    with open(path) as fh:
        return wio.read_mesh(fh).to_tetmesh()


def cmd_generate(args) -> int:
    what = args.what
    if what == "kgon":
        out = cone_to_origin(kgon_sphere(KgonSpec(args.k, rings=args.rings)))
    elif what == "band":
        _, link = generate_band_family(args.m, closed=not args.open)
        with _output(args.output) as fh:
            wio.write_link(link, fh)
        return EXIT_OK
    elif what == "fixture":
        out = load_fixture(args.name)
    elif what == "cube":
        out = cube_five_tets() if args.split == 5 else cube_six_tets()
    elif what == "insert-deg3-3wc":
        out = insert_degree3_3wc(_load_tetmesh(args.mesh), args.vertex, args.tet, _tol(args))
    elif what == "insert-deg3-2wc":
        out = insert_degree3_2wc(_load_tetmesh(args.mesh), args.vertex, args.face, _tol(args))
    elif what == "insert-deg4-2wc":
        out = insert_degree4_2wc(_load_tetmesh(args.mesh), args.vertex, args.edge, _tol(args))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(what)
    with _output(args.output) as fh:
        wio.write_mesh(out, fh)
    return EXIT_OK


# --- region ----------------------------------------------------------------

def cmd_region(args) -> int:
    facet = np.array(args.facet, dtype=float).reshape(3, 3)
    grid = sample_region(facet, np.array(args.bbox).reshape(3, 2), args.res, _tol(args))
    with _output(args.output) as fh:
        write_region_grid(grid, fh)
    return EXIT_OK


# --- cube-audit ------------------------------------------------------------

def cmd_cube_audit(args) -> int:
    audit = cube_audit(_load_tetmesh(args.mesh), _tol(args))
    rec = audit.to_record()
    summary = {"num_tets": audit.num_tets, "corner_tets": len(audit.corner_tets),
               "faces_with_right_pairs": sum(1 for p in audit.right_pairs.values() if p),
               "lower_bound_3wc": audit.lower_bounds[3], "lower_bound_2wc": audit.lower_bounds[2],
               "flagged": audit.flagged}
    if args.format == "records":
        wio.write_records(sys.stdout, "cube-audit", [rec], summary)
    else:
        print(f"tetrahedra: {audit.num_tets}")
        print(f"corner tetrahedra: {' '.join(map(str, audit.corner_tets)) or 'none'}")
        for face, pairs in sorted(rec["right_triangle_pairs"].items()):
            print(f"face {face}: {rec['face_triangle_counts'][face]} triangles"
                  + (f", {len(pairs)} right-triangle pair(s) on a shared hypotenuse" if pairs else ""))
        for k in (3, 2):
            below = "below" if audit.below_bound[k] else "meets"
            print(f"{k}-well-centered lower bound: {audit.lower_bounds[k]} tetrahedra ({below})")
        print("flagged" if audit.flagged else "no flags")
    return EXIT_FAIL if audit.flagged else EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="relative tolerance band")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--parallel", type=int, default=1, metavar="N",
                        help="worker processes for per-item work")
    common.add_argument("--format", choices=("text", "records"), default="text")

    p = argparse.ArgumentParser(prog="wellcentered", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="well-centeredness of every cell")
    c.add_argument("mesh")
    c.add_argument("--k", default="all", help="face dimension 1..dim or 'all'")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("classify-link", parents=[common], help="obstructions for vertex links")
    c.add_argument("link", nargs="?", help="link file ('m t' format) or .off surface")
    c.add_argument("--enumerate", type=int, metavar="M", help="all triangulations on M vertices")
    c.add_argument("--witness", action="store_true", help="search for realizations too")
    c.add_argument("--restarts", type=int, default=64)
    c.set_defaults(func=cmd_classify_link)

    c = sub.add_parser("generate", help="write constructed meshes or links")
    c.set_defaults(func=cmd_generate)
    g = c.add_subparsers(dest="what", required=True)
    gen = argparse.ArgumentParser(add_help=False, parents=[common])
    gen.add_argument("-o", "--output", default="-", help="output file (default stdout)")
    x = g.add_parser("kgon", parents=[gen], help="coned two-ring k-gon sphere")
    x.add_argument("--k", type=int, required=True)
    x.add_argument("--rings", type=int, default=2)
    x = g.add_parser("band", parents=[gen], help="boundary of a fan of tetrahedra around an edge")
    x.add_argument("--m", type=int, required=True)
    x.add_argument("--open", action="store_true", help="leave one gap in the fan")
    x = g.add_parser("fixture", parents=[gen], help="named coordinate fixture")
    x.add_argument("name", choices=sorted(FIXTURES))
    x = g.add_parser("cube", parents=[gen], help="standard unit cube split")
    x.add_argument("--split", type=int, choices=(5, 6), required=True)
    x = g.add_parser("insert-deg3-3wc", parents=[gen], help="split a tetrahedron, keeping 3-well-centeredness")
    x.add_argument("mesh")
    x.add_argument("--vertex", type=int, required=True)
    x.add_argument("--tet", type=int, required=True)
    x = g.add_parser("insert-deg3-2wc", parents=[gen], help="add a degree-3 link vertex over a face")
    x.add_argument("mesh")
    x.add_argument("--vertex", type=int, required=True)
    x.add_argument("--face", type=int, nargs=3, required=True)
    x = g.add_parser("insert-deg4-2wc", parents=[gen], help="add a degree-4 link vertex on an edge")
    x.add_argument("mesh")
    x.add_argument("--vertex", type=int, required=True)
    x.add_argument("--edge", type=int, nargs=2, required=True)

    c = sub.add_parser("region", parents=[common], help="sample the well-centered apex region")
    c.add_argument("--facet", type=float, nargs=9, required=True, metavar="X")
    c.add_argument("--bbox", type=float, nargs=6, required=True, metavar="LIM",
                   help="xmin xmax ymin ymax zmin zmax")
    c.add_argument("--res", type=int, nargs="+", default=[32])
    c.add_argument("-o", "--output", default="-")
    c.set_defaults(func=cmd_region)

    c = sub.add_parser("cube-audit", parents=[common], help="unit cube triangulation checks")
    c.add_argument("mesh")
    c.set_defaults(func=cmd_cube_audit)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "region" and len(args.res) not in (1, 3):
        parser.error("--res takes 1 or 3 integers")
    try:
        return args.func(args)
    except (OSError, ValueError, InvalidMeshError, InvalidTriangulationError,
            DegenerateSimplexError, PreconditionError, NotACubeError, SearchCapExceeded,
            UsageError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
