"""Assur classification, driver analysis, vertex removal and drive-velocity
propagation through the decomposition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .decomposition import Decomposition, scc_decompose
from .errors import (
    CrossCheckFailure,
    Infeasible,
    NotBottomComponent,
    NotIsostatic,
    SingularConfiguration,
    SizeCapExceeded,
    UnknownEdge,
    UnknownVertex,
)
from .orientation import find_d_orientation
from .pinned_graph import PinnedGraph
from .rigidity import (
    FLOAT_TOL,
    Configuration,
    build_matrix,
    block_triangular_verify,
    is_pinned_isostatic,
    matrix_rank,
    sample_generic_configuration,
)

log = logging.getLogger(__name__)

SUBGRAPH_ROUTE_CAP = 10
MOTION_TOL = 1e-8


# -- the minimal-subgraph route ------------------------------------------------

def _subset_tables(graph: PinnedGraph, cap: int):
    inner = sorted(graph.inner)
    n = len(inner)
    if n > cap:
        raise SizeCapExceeded(f"{n} inner vertices exceed subgraph-route cap {cap}")
    bit = {v: 1 << i for i, v in enumerate(inner)}
    edge_masks = np.array(
        [sum(bit.get(x, 0) for x in set(e.ends)) for e in graph.edges], dtype=np.int64)
    masks = np.arange(1 << n, dtype=np.int64)
    pop = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pop += (masks >> i) & 1
    return inner, bit, edge_masks, masks, pop


def _tight_counts(edge_masks, masks, grounded: int):
    live = edge_masks & ~grounded
    live = live[live != 0]
    counts = np.zeros(masks.shape, dtype=np.int64)
    for m in live:
        counts += (masks & m) == m
    return counts


def assur_components_bruteforce(graph: PinnedGraph, cap: int = SUBGRAPH_ROUTE_CAP) -> list[frozenset]:
    """Peel minimal pinned isostatic subgraphs off the ground, bottom-up.

    Assumes ``graph`` is pinned isostatic: its rows are then independent, so
    a subgraph on inner set ``S`` (all edges from ``S`` into ``S`` and the
    ground) is isostatic exactly when it has ``d|S|`` edges. The smallest such
    ``S`` is minimal; it joins the ground and the search repeats.
    """
    d = graph.dimension
    inner, bit, edge_masks, masks, pop = _subset_tables(graph, cap)
    full = (1 << len(inner)) - 1
    grounded, comps = 0, []
    while grounded != full:
        remaining = full & ~grounded
        counts = _tight_counts(edge_masks, masks, grounded)
        cand = ((masks & ~remaining) == 0) & (masks != 0) & (counts == d * pop)
        idx = np.flatnonzero(cand)
        if idx.size == 0:
            raise NotIsostatic("no pinned isostatic subgraph above the current ground")
        best = int(idx[np.lexsort((idx, pop[idx]))[0]])
        comps.append(frozenset(v for v in inner if bit[v] & best))
        grounded |= best
    return comps


def has_proper_isostatic_subgraph(graph: PinnedGraph, cap: int = SUBGRAPH_ROUTE_CAP) -> bool:
    d = graph.dimension
    inner, _, edge_masks, masks, pop = _subset_tables(graph, cap)
    full = (1 << len(inner)) - 1
    counts = _tight_counts(edge_masks, masks, 0)
    proper = (masks != 0) & (masks != full)
    return bool(np.any(proper & (counts == d * pop)))


# -- verdicts --------------------------------------------------------------

@dataclass
class AssurVerdict:
    is_isostatic: bool
    is_assur: bool
    is_strongly_assur: bool | None
    route_agreement: dict = field(default_factory=dict)
    components: int | None = None

    @property
    def routes_agree(self) -> bool:
        answers = {v for v in self.route_agreement.values() if v is not None}
        return len(answers) <= 1

    def to_dict(self) -> dict:
        return {
            "isostatic": self.is_isostatic,
            "assur": self.is_assur,
            "strongly_assur": self.is_strongly_assur,
            "routes": dict(self.route_agreement),
            "routes_agree": self.routes_agree,
            "components": self.components,
        }


@dataclass
class RouteDecompositions:
    """The same decomposition computed three ways."""

    scc: list[frozenset]
    block: list[frozenset]
    subgraph: list[frozenset] | None

    @property
    def counts(self) -> tuple:
        return (len(self.scc), len(self.block),
                None if self.subgraph is None else len(self.subgraph))

    @property
    def agree(self) -> bool:
        parts = [set(self.scc), set(self.block)]
        if self.subgraph is not None:
            parts.append(set(self.subgraph))
        return all(p == parts[0] for p in parts)


def decomposition_routes(graph: PinnedGraph, seed: int = 0,
                         cap: int = SUBGRAPH_ROUTE_CAP) -> RouteDecompositions:
    """SCC route, block-triangular route and minimal-subgraph route for an
    isostatic graph."""
    decomp = scc_decompose(graph, find_d_orientation(graph))
    cfg = sample_generic_configuration(graph, seed, "prime")
    view = block_triangular_verify(graph, cfg, decomp)
    if not view.ok:
        raise CrossCheckFailure("; ".join(view.problems))
    if any(x == 0 for x in view.block_determinants):
        raise CrossCheckFailure("singular diagonal block in an isostatic matrix")
    block = [frozenset(b) for b in view.column_blocks]
    sub = assur_components_bruteforce(graph, cap) if len(graph.inner) <= cap else None
    return RouteDecompositions([frozenset(c.inner_vertices) for c in decomp.components], block, sub)


def is_d_assur(graph: PinnedGraph, seed: int = 0, trials: int = 3, strong: bool = False,
               cap: int = SUBGRAPH_ROUTE_CAP) -> AssurVerdict:
    """Minimal pinned isostatic test along the three equivalent routes.

    ``subgraph``: no proper pinned isostatic subgraph (skipped above ``cap``
    inner vertices); ``scc``: one strongly connected component; ``block``:
    one diagonal block in the permuted rigidity matrix.
    """
    cert = is_pinned_isostatic(graph, seed, trials)
    routes: dict = {"subgraph": None, "scc": None, "block": None}
    try:
        decomp = scc_decompose(graph, find_d_orientation(graph))
    except Infeasible:
        return AssurVerdict(False, False, False if strong else None, routes)
    routes["scc"] = len(decomp) == 1
    if not cert.isostatic:
        return AssurVerdict(False, False, False if strong else None, routes, len(decomp))
    cfg = sample_generic_configuration(graph, seed, "prime")
    view = block_triangular_verify(graph, cfg, decomp)
    if not view.ok:
        raise CrossCheckFailure("; ".join(view.problems))
    routes["block"] = view.block_count == 1
    if len(graph.inner) <= cap:
        routes["subgraph"] = not has_proper_isostatic_subgraph(graph, cap)
    verdict = AssurVerdict(True, bool(routes["scc"]), None, routes, len(decomp))
    if strong:
        verdict.is_strongly_assur = verdict.is_assur and _all_edges_move_everything(
            graph, seed, trials)
    return verdict


# -- motions after removal ---------------------------------------------------

def _moving(basis: Sequence[Mapping[str, tuple]], exact: bool) -> set[str]:
    moving: set[str] = set()
    for vec in basis:
        if exact:
            moving |= {v for v, block in vec.items() if any(x != 0 for x in block)}
        else:
            norm = np.sqrt(sum(float(x) ** 2 for block in vec.values() for x in block))
            if norm == 0:
                continue
            moving |= {v for v, block in vec.items()
                       if np.linalg.norm(np.array(block, dtype=float)) / norm > MOTION_TOL}
    return moving


def _kernel(graph: PinnedGraph, config: Configuration):
    m = build_matrix(graph, config)
    ncols = m.shape[1]
    verts, d = m.vertices, graph.dimension
    if config.mode == "float":
        basis = linalg.float_nullspace(m.rows.reshape(m.shape[0], ncols), ncols, FLOAT_TOL)
        vecs = [list(basis[:, j]) for j in range(basis.shape[1])]
    else:
        vecs = linalg.nullspace(m.rows, m.field, ncols)
    return [{v: tuple(vec[d * i: d * i + d]) for i, v in enumerate(verts)} for vec in vecs]


def _union_over_trials(sets: list[set[str]], what: str) -> frozenset:
    if any(s != sets[0] for s in sets):
        log.warning("moving set for %s differs across trials: %s", what,
                    [sorted(s) for s in sets])
    out: set[str] = set()
    for s in sets:
        out |= s
    return frozenset(out)


def _require_isostatic(graph: PinnedGraph, seed: int, trials: int) -> None:
    if not is_pinned_isostatic(graph, seed, trials).isostatic:
        raise NotIsostatic("graph is not pinned isostatic")


def moving_set_on_edge_removal(graph: PinnedGraph, edge_id: str, trials: int = 3, seed: int = 0,
                               mode: str = "prime", check: bool = True) -> frozenset:
    """Inner vertices with nonzero velocity once ``edge_id`` is removed."""
    if not graph.has_edge(edge_id):
        raise UnknownEdge(edge_id)
    if check:
        _require_isostatic(graph, seed, trials)
    reduced = graph.without_edges([edge_id])
    sets = []
    for k in range(trials):
        cfg = sample_generic_configuration(reduced, seed * 7919 + k, mode)
        sets.append(_moving(_kernel(reduced, cfg), cfg.exact))
    return _union_over_trials(sets, f"edge {edge_id}")


def edge_removal_moving_sets(graph: PinnedGraph, trials: int = 3, seed: int = 0) -> dict[str, frozenset]:
    """Moving set of every edge at once.

    For an invertible matrix the motion left by deleting row ``e`` spans the
    ``e``-th column of the inverse, so one inversion per trial suffices.
    """
    d = graph.dimension
    n = len(graph.edges)
    per_edge: dict[str, list[set[str]]] = {e.id: [] for e in graph.edges}
    for k in range(trials):
        cfg = sample_generic_configuration(graph, seed * 7919 + k, "prime")
        m = build_matrix(graph, cfg)
        f = m.field
        aug = [list(row) + [f.one if i == j else f.zero for j in range(n)]
               for i, row in enumerate(m.rows)]
        red, piv = linalg.rref(aug, f, n)
        if piv != list(range(n)):
            raise NotIsostatic("pinned rigidity matrix is singular at a sampled configuration")
        for col, e in enumerate(graph.edges):
            moving = set()
            for i, v in enumerate(m.vertices):
                if any(red[r][n + col] != 0 for r in range(d * i, d * i + d)):
                    moving.add(v)
            per_edge[e.id].append(moving)
    return {eid: _union_over_trials(sets, f"edge {eid}") for eid, sets in per_edge.items()}


def _all_edges_move_everything(graph: PinnedGraph, seed: int, trials: int) -> bool:
    d = graph.dimension
    everyone = graph.inner_set
    if len(graph.inner) > 1 and any(graph.valence(v) < d + 1 for v in graph.inner):
        return False
    return all(s == everyone for s in edge_removal_moving_sets(graph, trials, seed).values())


def is_strongly_d_assur(graph: PinnedGraph, seed: int = 0, trials: int = 3) -> bool:
    """d-Assur, and removing any single edge sets every inner vertex in motion."""
    verdict = is_d_assur(graph, seed, trials)
    if not verdict.is_assur:
        return False
    return _all_edges_move_everything(graph, seed, trials)


@dataclass(frozen=True)
class DriverClass:
    edge_id: str
    moving_set: frozenset
    kind: str

    def to_dict(self) -> dict:
        return {"edge": self.edge_id, "moving": sorted(self.moving_set), "kind": self.kind}


def classify_drivers(graph: PinnedGraph, seed: int = 0, trials: int = 3
                     ) -> tuple[list[DriverClass], list[tuple[str, str]]]:
    """Regular/weak class of every edge, plus the inclusion order on drivers.

    The order lists pairs ``(a, b)`` with ``moving(a)`` a proper subset of
    ``moving(b)``; regular drivers sit at the top.
    """
    _require_isostatic(graph, seed, trials)
    sets = edge_removal_moving_sets(graph, trials, seed)
    everyone = graph.inner_set
    drivers = [DriverClass(e.id, sets[e.id], "regular" if sets[e.id] == everyone else "weak")
               for e in graph.edges]
    order = [(a.edge_id, b.edge_id) for a in drivers for b in drivers
             if a.moving_set < b.moving_set]
    return drivers, order


def vertex_removal_moving_set(graph: PinnedGraph, v: str, seed: int = 0, trials: int = 3,
                              mode: str = "prime", check: bool = True) -> frozenset:
    """Surviving inner vertices that move once inner vertex ``v`` and its edges go."""
    if v not in graph.inner_set:
        raise UnknownVertex(f"{v} is not an inner vertex")
    if check:
        _require_isostatic(graph, seed, trials)
    reduced = graph.without_vertex(v)
    if not reduced.inner:
        return frozenset()
    sets = []
    for k in range(trials):
        cfg = sample_generic_configuration(reduced, seed * 7919 + k, mode)
        sets.append(_moving(_kernel(reduced, cfg), cfg.exact))
    return _union_over_trials(sets, f"vertex {v}")


# -- drives ----------------------------------------------------------------

def drive_vector(graph: PinnedGraph, config: Configuration, drive: Mapping[str, Sequence]) -> list:
    """Right-hand side: ``(p_i - p_k) . r_k`` on rows of pin edges, 0 elsewhere."""
    unknown = [k for k in drive if k not in graph.pinned_set]
    if unknown:
        raise UnknownVertex(f"drive velocities given for non-pinned vertices {unknown}")
    f = config.field
    zero = 0.0 if f is None else f.zero
    rhs = []
    inner = graph.inner_set
    for e in graph.edges:
        if e.u in inner and e.v in inner:
            rhs.append(zero)
            continue
        i, k = (e.u, e.v) if e.u in inner else (e.v, e.u)
        r = drive.get(k)
        if r is None:
            rhs.append(zero)
            continue
        pi, pk = config.point(i), config.point(k)
        if f is None:
            rhs.append(sum((float(a) - float(b)) * float(c) for a, b, c in zip(pi, pk, r)))
        else:
            rhs.append(f.dot([f.sub(f.coerce(a), f.coerce(b)) for a, b in zip(pi, pk)],
                             [f.coerce(c) for c in r]))
    return rhs


def _solve_square(m, rhs, config: Configuration, what: str):
    n = m.shape[1]
    if m.shape[0] != n:
        raise NotIsostatic(f"{what}: rigidity matrix is {m.shape}, not square")
    if config.mode == "float":
        a = np.asarray(m.rows, dtype=float).reshape(m.shape)
        b = np.asarray(rhs, dtype=float)
        if n == 0:
            return []
        if matrix_rank(m) < n:
            raise SingularConfiguration(f"{what}: rigidity matrix is singular")
        return list(np.linalg.solve(a, b))
    x = linalg.solve(m.rows, rhs, m.field)
    if x is None:
        raise SingularConfiguration(f"{what}: rigidity matrix is singular")
    return x


def _blocks(vec, verts, d) -> dict[str, tuple]:
    return {v: tuple(vec[d * i: d * i + d]) for i, v in enumerate(verts)}


def drive_solve(component_graph: PinnedGraph, config: Configuration,
                drive: Mapping[str, Sequence]) -> dict[str, tuple]:
    """Unique velocities of the inner vertices of an isostatic component whose
    pins move with the prescribed drive velocities."""
    m = build_matrix(component_graph, config)
    rhs = drive_vector(component_graph, config, drive)
    x = _solve_square(m, rhs, config, "drive equation")
    return _blocks(x, m.vertices, component_graph.dimension)


def _edge_rate_row(graph: PinnedGraph, config: Configuration, edge_id: str):
    """Coefficients of ``(p_i - p_j) . (U_i - U_j)`` over the inner columns."""
    m = build_matrix(graph, config, edge_order=[edge_id] + [e.id for e in graph.edges
                                                           if e.id != edge_id])
    return m.rows[0]


def monolithic_drive(graph: PinnedGraph, config: Configuration, driver_edge: str, rate) -> dict[str, tuple]:
    """Whole-graph solve of ``R U = rate * e_driver``."""
    m = build_matrix(graph, config)
    f = config.field
    rhs = []
    for e in graph.edges:
        if e.id == driver_edge:
            rhs.append(float(rate) if f is None else f.coerce(rate))
        else:
            rhs.append(0.0 if f is None else f.zero)
    x = _solve_square(m, rhs, config, "monolithic drive")
    return _blocks(x, m.vertices, graph.dimension)


def drive_propagate(graph: PinnedGraph, decomp: Decomposition, config: Configuration,
                    driver_edge: str, rate=1, check: bool = True) -> dict[str, tuple]:
    """Velocities of all inner vertices when ``driver_edge`` (in a bottom
    component) changes length at ``rate``, solved one component at a time
    up the linear order and checked against the monolithic solve.
    """
    if not graph.has_edge(driver_edge):
        raise UnknownEdge(driver_edge)
    comp_of_edge = {eid: i for i, c in enumerate(decomp.components) for eid in c.edges}
    home = comp_of_edge[driver_edge]
    if home not in decomp.bottom_components():
        raise NotBottomComponent(f"{driver_edge} lies in a component that sits on other components")
    f = config.field
    d = graph.dimension
    zero = tuple([0.0] * d) if f is None else tuple([f.zero] * d)
    velocity: dict[str, tuple] = {p: zero for p in graph.pinned}
    for ci in decomp.linear_order:
        comp = decomp.components[ci]
        sub = graph.subgraph(comp.inner_vertices, comp.edges)
        if ci == home:
            velocity.update(_driven_bottom(sub, config, driver_edge, rate))
        else:
            drive = {p: velocity[p] for p in sub.pinned}
            velocity.update(drive_solve(sub, config, drive))
    result = {v: velocity[v] for v in graph.sorted_inner}
    if check:
        whole = monolithic_drive(graph, config, driver_edge, rate)
        _compare(result, whole, config)
    return result


def _driven_bottom(sub: PinnedGraph, config: Configuration, driver_edge: str, rate):
    reduced = sub.without_edges([driver_edge])
    basis = _kernel(reduced, config)
    if len(basis) != 1:
        raise SingularConfiguration(
            f"removing {driver_edge} leaves a {len(basis)}-dimensional motion space")
    m = build_matrix(sub, config)
    verts, d = m.vertices, sub.dimension
    vec = [x for v in verts for x in basis[0][v]]
    row = _edge_rate_row(sub, config, driver_edge)
    f = config.field
    if f is None:
        s = float(np.dot(np.asarray(row, dtype=float), np.asarray(vec, dtype=float)))
        if abs(s) <= FLOAT_TOL * max(np.linalg.norm(row), 1e-300) * max(np.linalg.norm(vec), 1e-300):
            raise SingularConfiguration(f"motion does not change the length of {driver_edge}")
        scale = float(rate) / s
        vec = [x * scale for x in vec]
    else:
        s = f.dot(row, vec)
        if s == 0:
            raise SingularConfiguration(f"motion does not change the length of {driver_edge}")
        scale = f.div(f.coerce(rate), s)
        vec = [f.mul(x, scale) for x in vec]
    return _blocks(vec, verts, d)


def _compare(a: Mapping[str, tuple], b: Mapping[str, tuple], config: Configuration) -> None:
    if config.exact:
        bad = [v for v in a if tuple(a[v]) != tuple(b[v])]
        if bad:
            raise CrossCheckFailure(f"propagated velocities differ from monolithic solve at {bad}")
        return
    gap = velocity_discrepancy(a, b)
    if gap > FLOAT_TOL:
        raise CrossCheckFailure(f"propagated velocities differ from monolithic solve by {gap:g}")


def velocity_discrepancy(a: Mapping[str, tuple], b: Mapping[str, tuple]) -> float:
    """Largest per-coordinate difference relative to the largest velocity."""
    scale = max((abs(float(x)) for blk in b.values() for x in blk), default=0.0)
    worst = max((abs(float(x) - float(y)) for v in a for x, y in zip(a[v], b[v])), default=0.0)
    return worst / scale if scale else worst


def as_fraction_map(u: Mapping[str, tuple]) -> dict[str, tuple]:
    return {v: tuple(Fraction(x) for x in blk) for v, blk in u.items()}
