"""Strongly connected decomposition of the grounded digraph, extended
components, the condensation DAG and its linear extensions.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import NotDDirected, SizeCapExceeded
from .pinned_graph import GROUND, Digraph, Orientation, PinnedGraph, condense_to_ground

BRUTE_FORCE_CAP = 12


def strongly_connected_components(vertices: Sequence[Hashable],
                                  successors: Mapping[Hashable, Iterable[Hashable]]) -> list[list]:
    """Tarjan's algorithm, iterative. Components come out sinks first."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(successors.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def brute_force_scc(vertices: Sequence[Hashable], arcs: Iterable[tuple[Hashable, Hashable]],
                    cap: int = BRUTE_FORCE_CAP) -> list[frozenset]:
    """Partition by mutual reachability from a transitive closure (test oracle)."""
    verts = list(vertices)
    n = len(verts)
    if n > cap:
        raise SizeCapExceeded(f"{n} vertices exceed brute-force cap {cap}")
    idx = {v: i for i, v in enumerate(verts)}
    reach = [[i == j for j in range(n)] for i in range(n)]
    for a, b in arcs:
        reach[idx[a]][idx[b]] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    classes: list[frozenset] = []
    placed = set()
    for i in range(n):
        if i in placed:
            continue
        cls = {j for j in range(n) if reach[i][j] and reach[j][i]}
        placed |= cls
        classes.append(frozenset(verts[j] for j in cls))
    return classes


@dataclass(frozen=True)
class ExtendedComponent:
    inner_vertices: tuple[str, ...]
    edges: tuple[str, ...]

    @property
    def key(self) -> str:
        return min(self.inner_vertices)

    def to_dict(self) -> dict:
        return {"inner": list(self.inner_vertices), "edges": list(self.edges)}


@dataclass
class Decomposition:
    components: list[ExtendedComponent]
    dag_edges: set[tuple[int, int]]          # (i, j): component i has an edge into component j
    linear_order: list[int]                  # bottom-up
    multiplicity: dict[tuple[int, int], int] = field(default_factory=dict)
    ground_edges: dict[int, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.components)

    def component_of(self) -> dict[str, int]:
        return {v: i for i, c in enumerate(self.components) for v in c.inner_vertices}

    def partition(self) -> set[frozenset]:
        return {frozenset(c.inner_vertices) for c in self.components}

    def bottom_components(self) -> list[int]:
        depends = {i for i, _ in self.dag_edges}
        return [i for i in range(len(self.components)) if i not in depends]

    def ordered(self) -> list[ExtendedComponent]:
        return [self.components[i] for i in self.linear_order]

    def to_dict(self) -> dict:
        return {
            "components": [
                dict(c.to_dict(), index=i, ground_edges=self.ground_edges.get(i, 0))
                for i, c in enumerate(self.components)
            ],
            "dag_edges": [
                {"above": i, "below": j, "multiplicity": self.multiplicity.get((i, j), 1)}
                for i, j in sorted(self.dag_edges)
            ],
            "linear_order": list(self.linear_order),
        }

    def to_dot(self, graph: PinnedGraph | None = None, orientation: Orientation | None = None,
               full: bool = False) -> str:
        """Graphviz text for the condensation DAG; with ``full`` the directed
        graph is drawn too, one cluster per component."""
        lines = ["digraph assur {", "  rankdir=BT;", "  node [shape=box];",
                 f'  "{GROUND}" [shape=box, peripheries=2, label="ground"];']
        for i, c in enumerate(self.components):
            label = ", ".join(c.inner_vertices)
            lines.append(f'  "C{i}" [label="{{{label}}}"];')
        for i, j in sorted(self.dag_edges):
            lines.append(f'  "C{i}" -> "C{j}";')
        for i in sorted(self.ground_edges):
            if self.ground_edges[i]:
                lines.append(f'  "C{i}" -> "{GROUND}";')
        if full and graph is not None and orientation is not None:
            for i, c in enumerate(self.components):
                lines.append(f"  subgraph cluster_{i} {{")
                lines.append(f'    label="C{i}";')
                for v in c.inner_vertices:
                    lines.append(f'    "v:{v}" [shape=circle, label="{v}"];')
                lines.append("  }")
            for p in graph.pinned:
                lines.append(f'  "v:{p}" [shape=doublecircle, label="{p}"];')
            for eid, t, h in orientation.arcs(graph):
                lines.append(f'  "v:{t}" -> "v:{h}" [label="{eid}", style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def scc_decompose(graph: PinnedGraph, orientation: Orientation) -> Decomposition:
    """Extended strongly connected components of the grounded digraph."""
    deg = orientation.out_degrees(graph)
    busy = [p for p in graph.pinned if deg[p] > 0]
    if busy:
        raise NotDDirected(f"pinned vertices with outgoing edges: {busy}")
    dg: Digraph = condense_to_ground(graph, orientation)
    succ = dg.successors()
    verts = sorted(graph.inner) + [GROUND]
    sccs = strongly_connected_components(verts, succ)
    comps_v = sorted((sorted(c) for c in sccs if GROUND not in c), key=lambda c: c[0])
    comp_of = {v: i for i, c in enumerate(comps_v) for v in c}
    edges_of: list[list[str]] = [[] for _ in comps_v]
    multiplicity: dict[tuple[int, int], int] = {}
    ground_edges: dict[int, int] = {}
    for eid, t, h in dg.arcs:
        i = comp_of[t]
        edges_of[i].append(eid)
        if h == GROUND:
            ground_edges[i] = ground_edges.get(i, 0) + 1
        elif comp_of[h] != i:
            key = (i, comp_of[h])
            multiplicity[key] = multiplicity.get(key, 0) + 1
    components = [ExtendedComponent(tuple(c), tuple(es)) for c, es in zip(comps_v, edges_of)]
    dag = set(multiplicity)
    return Decomposition(components, dag, _kahn(components, dag), multiplicity, ground_edges)


def _kahn(components: Sequence[ExtendedComponent], dag: set[tuple[int, int]]) -> list[int]:
    # bottom-up: a component comes after everything it depends on
    pending = {i: 0 for i in range(len(components))}
    above: dict[int, list[int]] = {i: [] for i in range(len(components))}
    for i, j in dag:
        pending[i] += 1
        above[j].append(i)
    heap = [(components[i].key, i) for i, k in pending.items() if k == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, j = heapq.heappop(heap)
        order.append(j)
        for i in above[j]:
            pending[i] -= 1
            if pending[i] == 0:
                heapq.heappush(heap, (components[i].key, i))
    if len(order) != len(components):
        raise ValueError("component graph has a cycle")  # pragma: no cover
    return order


def linear_extensions(decomp: Decomposition, limit: int = 100) -> list[list[int]]:
    """Up to ``limit`` bottom-up orders of the components extending the DAG.

    The first order is ``decomp.linear_order``.
    """
    n = len(decomp.components)
    below: dict[int, set[int]] = {i: set() for i in range(n)}
    for i, j in decomp.dag_edges:
        below[i].add(j)
    keyed = sorted(range(n), key=lambda i: decomp.components[i].key)
    out: list[list[int]] = []
    order: list[int] = []
    placed: set[int] = set()

    def rec():
        if len(out) >= limit:
            return
        if len(order) == n:
            out.append(list(order))
            return
        for i in keyed:
            if i not in placed and below[i] <= placed:
                placed.add(i)
                order.append(i)
                rec()
                order.pop()
                placed.discard(i)
                if len(out) >= limit:
                    return

    if limit > 0:
        rec()
    return out


def is_linear_extension(decomp: Decomposition, order: Sequence[int]) -> bool:
    pos = {c: k for k, c in enumerate(order)}
    if sorted(order) != list(range(len(decomp.components))):
        return False
    return all(pos[j] < pos[i] for i, j in decomp.dag_edges)


def with_order(decomp: Decomposition, order: Sequence[int]) -> Decomposition:
    if not is_linear_extension(decomp, order):
        raise ValueError("order does not extend the component partial order")
    return Decomposition(decomp.components, decomp.dag_edges, list(order),
                         decomp.multiplicity, decomp.ground_edges)
