"""Whole-graph analysis report with internal cross-checks.

``analyze`` collects everything the tool knows about a pinned graph and
records any disagreement between routes that should agree in theory.
Disagreements end up in ``report["problems"]``; the command line turns a
non-empty list into exit status 2.
"""

from __future__ import annotations

from typing import Mapping

from .assur import classify_drivers, decomposition_routes, is_d_assur
from .counts import BRUTE_FORCE_CAP, pinned_laman_check_2d, subgraph_counts_bruteforce, top_count
from .decomposition import Decomposition, linear_extensions, scc_decompose
from .errors import Infeasible
from .orientation import find_d_orientation
from .pinned_graph import FORMAT, Orientation, PinnedGraph
from .rigidity import block_triangular_verify, is_pinned_isostatic, resolve_configuration

EXTENSION_LIMIT = 20


def graph_summary(graph: PinnedGraph) -> dict:
    return {
        "dimension": graph.dimension,
        "inner": len(graph.inner),
        "pinned": len(graph.pinned),
        "edges": len(graph.edges),
        "parallel_edges": graph.has_parallel_edges(),
    }


def counts_section(graph: PinnedGraph, cap: int = BRUTE_FORCE_CAP) -> dict:
    out: dict = {"top_count": top_count(graph), "subgraph_violations": None, "counts_pass": None}
    if len(graph.inner) <= cap:
        bad = subgraph_counts_bruteforce(graph, cap)
        out["subgraph_violations"] = [v.to_dict() for v in bad]
        out["counts_pass"] = out["top_count"] and not bad
    if graph.dimension == 2:
        out["pinned_laman"] = pinned_laman_check_2d(graph)
        if out["counts_pass"] is None:
            out["counts_pass"] = out["pinned_laman"]
    return out


def orient(graph: PinnedGraph) -> tuple[Orientation | None, dict]:
    try:
        o = find_d_orientation(graph)
    except Infeasible as exc:
        witness = None if exc.witness is None else sorted(exc.witness)
        return None, {"feasible": False, "reason": exc.reason, "message": str(exc),
                      "witness": witness}
    return o, {"feasible": True, "tail": dict(sorted(o.tail.items()))}


def component_verdicts(graph: PinnedGraph, decomp: Decomposition, seed: int, trials: int) -> list[dict]:
    out = []
    for i, comp in enumerate(decomp.components):
        sub = graph.subgraph(comp.inner_vertices, comp.edges)
        v = is_d_assur(sub, seed, trials, strong=True)
        out.append({"index": i, "inner": list(comp.inner_vertices), "isostatic": v.is_isostatic,
                    "assur": v.is_assur, "strongly_assur": v.is_strongly_assur})
    return out


def analyze(graph: PinnedGraph, coords: Mapping | None = None, seed: int = 0,
            trials: int = 3) -> dict:
    """Full report; ``coords`` (if given) is used for the block-form check."""
    problems: list[str] = []
    report: dict = {"format": FORMAT, "graph": graph_summary(graph)}
    counts = counts_section(graph)
    report["counts"] = counts

    orientation, orient_info = orient(graph)
    report["orientation"] = orient_info
    decomp = scc_decompose(graph, orientation) if orientation is not None else None
    if decomp is not None:
        report["decomposition"] = decomp.to_dict()
        exts = linear_extensions(decomp, EXTENSION_LIMIT)
        report["decomposition"]["linear_extensions"] = exts
        report["decomposition"]["linear_extensions_truncated"] = len(exts) >= EXTENSION_LIMIT
    else:
        report["decomposition"] = None

    cert = is_pinned_isostatic(graph, seed, trials)
    report["rank"] = cert.to_dict()
    verdict = is_d_assur(graph, seed, trials, strong=True)
    report["assur"] = verdict.to_dict()

    if counts["counts_pass"] is False and cert.isostatic:
        problems.append("isostatic graph fails the necessary counts")
    if graph.dimension == 2 and counts["counts_pass"] is not None:
        if counts["pinned_laman"] != counts["counts_pass"]:
            problems.append("pebble game and brute-force counts disagree")
        if counts["pinned_laman"] != cert.isostatic:
            problems.append("planar counts and generic rank disagree")
    if cert.isostatic and orientation is None:
        problems.append("isostatic graph has no d-directed orientation")
    if counts["counts_pass"] and orientation is None:
        problems.append("counts pass but no d-directed orientation")
    if not verdict.routes_agree:
        problems.append(f"Assur routes disagree: {verdict.route_agreement}")

    report["components"] = None
    report["drivers"] = None
    if decomp is not None:
        comps = component_verdicts(graph, decomp, seed, trials)
        report["components"] = comps
        if cert.isostatic:
            routes = decomposition_routes(graph, seed)
            report["routes"] = {"scc": len(routes.scc), "block": len(routes.block),
                                "subgraph": None if routes.subgraph is None else len(routes.subgraph),
                                "agree": routes.agree}
            if not routes.agree:
                problems.append("decomposition routes disagree")
            for c in comps:
                if not (c.get("isostatic") and c.get("assur")):
                    problems.append(f"component {c['index']} of an isostatic graph is not Assur")
                if graph.dimension == 2 and c.get("assur") and not c.get("strongly_assur"):
                    problems.append(f"planar Assur component {c['index']} is not strongly Assur")
            if coords is not None:
                cfg = resolve_configuration(graph, coords, seed, "rational")
                view = block_triangular_verify(graph, cfg, decomp)
                report["given_configuration_block_form"] = {
                    "ok": view.ok, "singular_blocks": sum(1 for x in view.block_determinants
                                                          if x == 0)}
                if not view.ok:
                    problems.extend(view.problems)
            drivers, order = classify_drivers(graph, seed, trials)
            report["drivers"] = {"classes": [c.to_dict() for c in drivers],
                                 "order": [list(p) for p in order]}
    report["problems"] = problems
    return report


def expected_view(report: dict) -> dict:
    """The fields frozen in corpus sidecars."""
    decomp = report["decomposition"]
    return {
        "isostatic": report["rank"]["isostatic"],
        "rank_deficit": report["rank"]["rank_deficit"],
        "counts_pass": report["counts"]["counts_pass"],
        "components": None if decomp is None else len(decomp["components"]),
        "assur": report["assur"]["assur"],
        "strongly_assur": bool(report["assur"]["strongly_assur"]),
    }
