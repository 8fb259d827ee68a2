"""Command line front end: ``assur-kit <command> [options]``.

Exit status: 0 success, 1 bad input or unmet precondition, 2 internal
cross-check failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import corpus
from .assur import (
    classify_drivers,
    drive_propagate,
    is_d_assur,
    monolithic_drive,
    velocity_discrepancy,
    vertex_removal_moving_set,
)
from .counts import counts_imply_orientation
from .decomposition import scc_decompose
from .errors import AssurKitError, CrossCheckFailure, Infeasible, WrongDimension
from .orientation import find_d_orientation
from .pinned_graph import (
    FORMAT,
    PinnedGraph,
    drop_pin_pin_edges,
    dumps,
    ensure_valid,
    load_graph,
    release_pin,
    repin_vertex,
)
from .report import analyze, counts_section, orient
from .rigidity import (
    block_determinant_product,
    block_triangular_verify,
    build_matrix,
    is_pinned_isostatic,
    matrix_rank,
    nullspace,
    resolve_configuration,
)

log = logging.getLogger("assurkit")


def _scalar(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, float):
        return x
    return int(x) if isinstance(x, int) else float(x)


def _velocities(u) -> dict:
    return {v: [_scalar(x) for x in blk] for v, blk in sorted(u.items())}


def _motion_mode(args) -> str:
    return "rational" if args.mode == "exact" else "float"


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(args) -> tuple[PinnedGraph, dict | None]:
    graph, coords = load_graph(args.graph)
    if args.dimension is not None and args.dimension != graph.dimension:
        raise WrongDimension(f"--dimension {args.dimension} but the file declares {graph.dimension}")
    if args.drop_pin_pin:
        graph, dropped = drop_pin_pin_edges(graph)
        for e in dropped:
            log.warning("dropped pin-pin edge %s (%s, %s)", e.id, e.u, e.v)
    return ensure_valid(graph), coords


# -- commands --------------------------------------------------------------

def cmd_validate(args) -> int:
    graph, coords = _load(args)
    _emit(args, graph.to_json(coords))
    return 0


def cmd_analyze(args) -> int:
    graph, coords = _load(args)
    report = analyze(graph, coords, args.seed, args.trials)
    if args.json:
        _emit(args, dumps(report))
    else:
        _emit(args, _format_report(report))
    if report["problems"]:
        for p in report["problems"]:
            log.error("cross-check failed: %s", p)
        return 2
    return 0


def _format_report(r: dict) -> str:
    g = r["graph"]
    lines = [f"graph: d={g['dimension']} inner={g['inner']} pinned={g['pinned']} "
             f"edges={g['edges']} parallel={g['parallel_edges']}"]
    c = r["counts"]
    lines.append(f"counts: top={c['top_count']} pass={c['counts_pass']}"
                 + (f" pinned_laman={c['pinned_laman']}" if "pinned_laman" in c else ""))
    for v in (c["subgraph_violations"] or [])[:10]:
        lines.append(f"  violation {v['clause']}: inner={v['inner']} pins={v['pinned']} "
                     f"edges={v['edges']} > {v['bound']}")
    o = r["orientation"]
    if o["feasible"]:
        lines.append("orientation: " + " ".join(f"{e}<-{t}" for e, t in o["tail"].items()))
    else:
        lines.append(f"orientation: none ({o['reason']}); witness {o['witness']}")
    d = r["decomposition"]
    if d is not None:
        lines.append(f"components: {len(d['components'])}, linear order {d['linear_order']}")
        for comp in r["components"]:
            lines.append(f"  C{comp['index']} {comp['inner']}: isostatic={comp['isostatic']} "
                         f"assur={comp['assur']} strong={comp['strongly_assur']}")
        for e in d["dag_edges"]:
            lines.append(f"  C{e['above']} -> C{e['below']} x{e['multiplicity']}")
    k = r["rank"]
    lines.append(f"rank: {k['generic_rank']}/{k['full_rank']} deficit={k['rank_deficit']} "
                 f"isostatic={k['isostatic']}")
    a = r["assur"]
    lines.append(f"assur: {a['assur']} strongly={a['strongly_assur']} routes={a['routes']}")
    if r.get("drivers"):
        for cls in r["drivers"]["classes"]:
            lines.append(f"  driver {cls['edge']}: {cls['kind']} moves {cls['moving']}")
    for p in r["problems"]:
        lines.append(f"PROBLEM: {p}")
    return "\n".join(lines) + "\n"


def cmd_orient(args) -> int:
    graph, _ = _load(args)
    o, info = orient(graph)
    _emit(args, dumps(dict(info, format=FORMAT)))
    return 0 if o is not None else 1


def cmd_export_dot(args) -> int:
    graph, _ = _load(args)
    o = find_d_orientation(graph)
    decomp = scc_decompose(graph, o)
    _emit(args, decomp.to_dot(graph, o, full=args.full))
    return 0


def cmd_corpus(args) -> int:
    if args.action == "list":
        for name in corpus.names():
            print(f"{name}\t{corpus.get(name).description}")
        return 0
    if not args.name:
        raise corpus.UnknownInstance("corpus emit needs an instance name")
    for p in corpus.emit(args.name, args.out or "."):
        print(p)
    return 0


def cmd_rank(args) -> int:
    graph, coords = _load(args)
    cert = is_pinned_isostatic(graph, args.seed, args.trials)
    out = dict(cert.to_dict(), format=FORMAT)
    if args.mode == "float":
        cfg = resolve_configuration(graph, coords, args.seed, "float")
        out["float_rank"] = matrix_rank(build_matrix(graph, cfg), args.tol)
    if args.dump_matrix:
        cfg = resolve_configuration(graph, coords, args.seed,
                                    "float" if args.mode == "float" else "rational")
        if args.permuted:
            decomp = scc_decompose(graph, find_d_orientation(graph))
            view = block_triangular_verify(graph, cfg, decomp)
            m = view.matrix
            out["block_form"] = {"ok": view.ok, "problems": view.problems,
                                 "row_blocks": view.row_blocks, "column_blocks": view.column_blocks}
            if view.block_determinants and cfg.exact:
                out["block_form"]["determinant"] = _scalar(view.determinant)
                out["block_form"]["block_product"] = _scalar(
                    block_determinant_product(view, cfg.field))
        else:
            m = build_matrix(graph, cfg)
        Path(args.dump_matrix).write_text(m.to_csv(), encoding="utf-8")
    _emit(args, dumps(out))
    return 0


def cmd_nullspace(args) -> int:
    graph, coords = _load(args)
    cfg = resolve_configuration(graph, coords, args.seed, _motion_mode(args))
    basis = nullspace(graph, cfg, args.tol)
    _emit(args, dumps({"format": FORMAT, "mode": cfg.mode, "dimension": len(basis),
                       "basis": [_velocities(b) for b in basis]}))
    return 0


def cmd_check_counts(args) -> int:
    graph, _ = _load(args)
    section = counts_section(graph)
    out = dict(section, format=FORMAT)
    if section["counts_pass"]:
        out["orientation"] = dict(sorted(counts_imply_orientation(graph).tail.items()))
    _emit(args, dumps(out))
    return 0 if section["counts_pass"] else 1


def cmd_check(args) -> int:
    graph, _ = _load(args)
    v = is_d_assur(graph, args.seed, args.trials, strong=args.strong)
    _emit(args, dumps(dict(v.to_dict(), format=FORMAT)))
    if not v.routes_agree:
        return 2
    ok = v.is_assur and (v.is_strongly_assur if args.strong else True)
    return 0 if ok else 1


def cmd_drivers(args) -> int:
    graph, _ = _load(args)
    drivers, order = classify_drivers(graph, args.seed, args.trials)
    _emit(args, dumps({"format": FORMAT, "classes": [c.to_dict() for c in drivers],
                       "order": [list(p) for p in order]}))
    return 0


def cmd_vertex_removal(args) -> int:
    graph, _ = _load(args)
    moving = vertex_removal_moving_set(graph, args.vertex, args.seed, args.trials)
    _emit(args, dumps({"format": FORMAT, "vertex": args.vertex, "moving": sorted(moving)}))
    return 0


def cmd_drive(args) -> int:
    graph, coords = _load(args)
    cfg = resolve_configuration(graph, coords, args.seed, _motion_mode(args))
    rate = Fraction(args.rate) if cfg.exact else float(Fraction(args.rate))
    decomp = scc_decompose(graph, find_d_orientation(graph))
    u = drive_propagate(graph, decomp, cfg, args.edge, rate)
    whole = monolithic_drive(graph, cfg, args.edge, rate)
    _emit(args, dumps({"format": FORMAT, "edge": args.edge, "rate": _scalar(rate),
                       "mode": cfg.mode, "velocities": _velocities(u),
                       "discrepancy": velocity_discrepancy(u, whole),
                       "configuration": cfg.to_dict()}))
    return 0


def cmd_release(args) -> int:
    graph, coords = _load(args)
    _emit(args, release_pin(graph, args.pin, args.anchors).to_json(coords))
    return 0


def cmd_repin(args) -> int:
    graph, coords = _load(args)
    new, deleted = repin_vertex(graph, args.vertex)
    for e in deleted:
        log.info("deleted edge %s between pins", e.id)
    _emit(args, new.to_json(coords))
    return 0


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dimension", type=int, help="expected dimension (must match the file)")
    common.add_argument("--seed", type=int, default=0, help="seed for generic configurations")
    common.add_argument("--mode", choices=("exact", "float"), default=None,
                        help="scalars for motions (default float); rank decisions are always exact")
    common.add_argument("--tol", type=float, default=1e-9, help="relative SVD tolerance in float mode")
    common.add_argument("--trials", type=int, default=3, help="random configurations per rank decision")
    common.add_argument("--drop-pin-pin", action="store_true",
                        help="drop edges between two pins instead of rejecting the graph")
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="assur-kit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, graph=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if graph:
            p.add_argument("graph", help="graph JSON file")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "validate a graph and print its canonical JSON")
    p = add("analyze", cmd_analyze, "full report with cross-checks")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    add("orient", cmd_orient, "a d-directed orientation or an infeasibility witness")
    p = add("export-dot", cmd_export_dot, "Graphviz text of the decomposition")
    p.add_argument("--full", action="store_true", help="also draw the directed graph")
    p = add("corpus", cmd_corpus, "list or emit bundled example graphs", graph=False)
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p = add("rank", cmd_rank, "generic rank and isostatic certificate")
    p.add_argument("--dump-matrix", metavar="CSV", help="write the rigidity matrix as CSV")
    p.add_argument("--permuted", action="store_true", help="dump in block-triangular order")
    add("nullspace", cmd_nullspace, "infinitesimal motions of the pinned framework")
    add("check-counts", cmd_check_counts, "necessary pinned counts")
    p = add("check", cmd_check, "Assur test (exit 0 when Assur)")
    p.add_argument("--assur", action="store_true", help="test d-Assur (the default)")
    p.add_argument("--strong", action="store_true", help="test strongly d-Assur")
    add("drivers", cmd_drivers, "regular and weak drivers")
    p = add("vertex-removal", cmd_vertex_removal, "moving set after removing an inner vertex")
    p.add_argument("--vertex", required=True)
    p = add("drive", cmd_drive, "velocities when one bottom edge is driven")
    p.add_argument("--edge", required=True)
    p.add_argument("--rate", default="1", help="rate of length change (integer, decimal or p/q)")
    p = add("release", cmd_release, "turn a pin into an inner vertex tied to d anchors")
    p.add_argument("--pin", required=True)
    p.add_argument("--anchors", nargs="+", required=True)
    p = add("repin", cmd_repin, "turn an inner vertex into a pin")
    p.add_argument("--vertex", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CrossCheckFailure as exc:
        log.error("internal cross-check failed: %s", exc)
        return 2
    except Infeasible as exc:
        log.error("%s", exc)
        return 1
    except (AssurKitError, OSError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
