"""d-directed orientations: flow-based construction, the Laplace-expansion
oracle, equivalence, and cycle-reversal traces between equivalent
orientations.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from typing import Iterable

from . import linalg
from .errors import GraphMismatch, Infeasible, NotEquivalent, OrientationMismatch, SizeCapExceeded
from .pinned_graph import Orientation, PinnedGraph
from .rigidity import Configuration, point_block, sample_generic_configuration

ORACLE_CAP = 6


class _Flow:
    """Unit-augmenting max-flow on a small network with deterministic arc order."""

    def __init__(self):
        self.adj: dict = {}
        self.cap: dict = {}

    def add(self, a, b, c: int):
        self.adj.setdefault(a, [])
        self.adj.setdefault(b, [])
        if (a, b) not in self.cap:
            self.adj[a].append(b)
            self.adj[b].append(a)
            self.cap[(a, b)] = 0
            self.cap.setdefault((b, a), 0)
        self.cap[(a, b)] += c

    def push_unit(self, source, sink) -> tuple[bool, set]:
        parent = {source: None}
        q = deque([source])
        while q:
            x = q.popleft()
            if x == sink:
                break
            for y in self.adj[x]:
                if y not in parent and self.cap[(x, y)] > 0:
                    parent[y] = x
                    q.append(y)
        if sink not in parent:
            return False, set(parent)
        y = sink
        while parent[y] is not None:
            x = parent[y]
            self.cap[(x, y)] -= 1
            self.cap[(y, x)] += 1
            y = x
        return True, set(parent)


def _assign(graph: PinnedGraph, split_parallel: bool) -> tuple[dict, list[str], set]:
    """Greedy unit augmentation edge by edge (sorted by edge id).

    Returns ``(tail_map, failed_edges, witness_of_first_failure)``.
    """
    d = graph.dimension
    inner = graph.inner_set
    net = _Flow()
    sink = ("sink",)
    for v in sorted(inner):
        net.add(("v", v), sink, d)
    edges = sorted(graph.edges, key=lambda e: e.id)
    for e in edges:
        for x in sorted(set(e.ends) & inner):
            if split_parallel:
                other = e.other(x)
                bundle = ("b", x, other)
                net.add(("e", e.id), bundle, 1)
                net.add(bundle, ("v", x), 1)
            else:
                net.add(("e", e.id), ("v", x), 1)
    failed, witness = [], set()
    for e in edges:
        node = ("e", e.id)
        if node not in net.adj:
            net.adj[node] = []
        ok, reached = net.push_unit(node, sink)
        if not ok:
            if not failed:
                witness = {n[1] for n in reached if n[0] == "v"}
            failed.append(e.id)
    tail = {}
    for e in edges:
        for x in sorted(set(e.ends) & inner):
            hop = ("b", x, e.other(x)) if split_parallel else ("v", x)
            if net.cap.get((hop, ("e", e.id)), 0) > 0:
                tail[e.id] = x
    return tail, failed, witness


def _block_product_nonzero(graph: PinnedGraph, orientation: Orientation, config: Configuration) -> bool:
    f = config.field
    by_tail: dict[str, list[str]] = {}
    for eid, t in orientation.tail.items():
        by_tail.setdefault(t, []).append(eid)
    for v in graph.inner:
        rows = point_block(graph, config, v, sorted(by_tail.get(v, [])))
        if len(rows) != graph.dimension or linalg.det(rows, f) == 0:
            return False
    return True


def find_d_orientation(graph: PinnedGraph) -> Orientation:
    """Orientation with out-degree ``d`` at every inner vertex and 0 at pins.

    Each edge picks one inner endpoint as its tail; inner vertices have
    capacity ``d`` and pins capacity 0. Raises ``Infeasible`` with a witness
    vertex set carrying more than ``d`` edges per vertex when no orientation
    exists.
    """
    d = graph.dimension
    n_edges, cap = len(graph.edges), d * len(graph.inner)
    if n_edges > cap:
        raise Infeasible(f"{n_edges} edges exceed capacity {cap}", witness=graph.inner)
    tail, failed, witness = _assign(graph, split_parallel=False)
    if failed:
        raise Infeasible(f"edge {failed[0]} cannot be oriented; vertices {sorted(witness)} "
                         "are saturated", witness=witness)
    if n_edges < cap:
        deg = {v: 0 for v in graph.inner}
        for t in tail.values():
            deg[t] += 1
        short = {v for v, k in deg.items() if k < d}
        raise Infeasible(f"{n_edges} edges cannot give out-degree {d} to all "
                         f"{len(graph.inner)} inner vertices", witness=short, reason="undercount")
    orientation = Orientation(tail)
    if graph.has_parallel_edges():
        cfg = sample_generic_configuration(graph, 0, "prime")
        if not _block_product_nonzero(graph, orientation, cfg):
            # a vertex tails two copies of one bar: identical rows, zero Laplace term
            tail, failed, _ = _assign(graph, split_parallel=True)
            if failed or len(tail) != n_edges:
                raise Infeasible("every d-directed orientation tails parallel edges at one "
                                 "vertex, so every Laplace term vanishes",
                                 witness=None, reason="parallel")
            orientation = Orientation(tail)
    return orientation


def all_d_orientations(graph: PinnedGraph, cap: int = ORACLE_CAP) -> list[Orientation]:
    """Every orientation with out-degree d at inner vertices (exponential; tests only)."""
    return [o for o, _ in _enumerate_partitions(graph, cap, None)]


def _enumerate_partitions(graph: PinnedGraph, cap: int, config: Configuration | None):
    d = graph.dimension
    inner = sorted(graph.inner)
    if len(inner) > cap:
        raise SizeCapExceeded(f"{len(inner)} inner vertices exceed oracle cap {cap}")
    if len(graph.edges) != d * len(inner):
        return
    f = config.field if config is not None else None
    order = {v: i for i, v in enumerate(inner)}
    inner_set = set(inner)
    incident = {v: [e for e in graph.edges if v in e.ends] for v in inner}
    # edges whose last inner endpoint (in order) is v must be taken by v or earlier
    last = {}
    for e in graph.edges:
        last[e.id] = max(order[x] for x in e.ends if x in inner_set)

    def rec(i, used: frozenset, tail: dict):
        if i == len(inner):
            yield Orientation(tail), None
            return
        v = inner[i]
        free = [e for e in incident[v] if e.id not in used]
        forced = [e for e in free if last[e.id] == i]
        optional = [e for e in free if last[e.id] != i]
        need = d - len(forced)
        if need < 0 or need > len(optional):
            return
        for extra in itertools.combinations(optional, need):
            chosen = forced + list(extra)
            if f is not None:
                rows = point_block(graph, config, v, [e.id for e in chosen])
                if linalg.det(rows, f) == 0:
                    continue
            t2 = dict(tail)
            for e in chosen:
                t2[e.id] = v
            yield from rec(i + 1, used | {e.id for e in chosen}, t2)

    yield from rec(0, frozenset(), {})


def laplace_orientation_oracle(graph: PinnedGraph, config: Configuration,
                               cap: int = ORACLE_CAP) -> list[Orientation]:
    """Orientations read off the nonzero terms of the block Laplace expansion.

    Enumerates every assignment of ``d`` incident edges to each inner vertex
    and keeps those whose ``d x d`` block determinants at ``config`` are all
    nonzero. Exponential; intended as a reference oracle.
    """
    if config.mode == "float":
        raise ValueError("the Laplace oracle needs exact arithmetic")
    if len(graph.inner) > cap:
        raise SizeCapExceeded(f"{len(graph.inner)} inner vertices exceed oracle cap {cap}")
    return [o for o, _ in _enumerate_partitions(graph, cap, config)]


def _same_graph(graph: PinnedGraph, *orientations: Orientation) -> None:
    for o in orientations:
        try:
            o.check(graph)
        except OrientationMismatch as exc:
            raise GraphMismatch(str(exc)) from None


def is_equivalent(graph: PinnedGraph, o1: Orientation, o2: Orientation) -> bool:
    """Same out-degree at every vertex."""
    _same_graph(graph, o1, o2)
    return o1.out_degrees(graph) == o2.out_degrees(graph)


def cycle_reversal_path(graph: PinnedGraph, o1: Orientation, o2: Orientation) -> list[list[str]]:
    """Directed cycles of ``o1`` whose successive reversal yields ``o2``.

    Walks only along edges on which the two orientations disagree: entering a
    vertex on such an edge, equal out-degrees force a disagreeing edge leaving
    it, so the walk closes a cycle.
    """
    if not is_equivalent(graph, o1, o2):
        raise NotEquivalent("orientations have different out-degrees")
    cur = dict(o1.tail)
    target = o2.tail
    trace: list[list[str]] = []
    out_bad: dict[str, list[str]] = {}

    def disagreeing():
        return sorted(eid for eid in cur if cur[eid] != target[eid])

    bad = disagreeing()
    while bad:
        out_bad.clear()
        for eid in bad:
            out_bad.setdefault(cur[eid], []).append(eid)
        start = bad[0]
        walk = [start]
        first_seen = {cur[start]: 0}
        v = graph.edge(start).other(cur[start])
        while v not in first_seen:
            first_seen[v] = len(walk)
            nxt = out_bad.get(v)
            if not nxt:
                raise NotEquivalent(f"no disagreeing edge leaves {v}")  # pragma: no cover
            eid = nxt[0]
            walk.append(eid)
            v = graph.edge(eid).other(cur[eid])
        cycle = walk[first_seen[v]:]
        for eid in cycle:
            cur[eid] = graph.edge(eid).other(cur[eid])
        trace.append(cycle)
        remaining = disagreeing()
        assert len(remaining) < len(bad)
        bad = remaining
    return trace


def apply_reversals(graph: PinnedGraph, orientation: Orientation,
                    cycles: Iterable[Iterable[str]]) -> Orientation:
    for cycle in cycles:
        orientation = orientation.reversed(graph, cycle)
    return orientation


def random_directed_cycle(graph: PinnedGraph, orientation: Orientation,
                          rng: random.Random, attempts: int = 50) -> list[str] | None:
    """A directed cycle found by a random walk, or None."""
    out: dict[str, list[tuple[str, str]]] = {v: [] for v in graph.vertices}
    for eid, t, h in orientation.arcs(graph):
        out[t].append((eid, h))
    starts = [v for v in graph.inner if out[v]]
    if not starts:
        return None
    for _ in range(attempts):
        v = rng.choice(starts)
        walk: list[str] = []
        seen = {v: 0}
        while True:
            choices = out[v]
            if not choices:
                break
            eid, h = rng.choice(choices)
            walk.append(eid)
            if h in seen:
                return walk[seen[h]:]
            seen[h] = len(walk)
            v = h
    return None


def random_equivalent(graph: PinnedGraph, orientation: Orientation, rng: random.Random,
                      reversals: int = 5) -> tuple[Orientation, int]:
    """Perturb ``orientation`` by up to ``reversals`` random cycle reversals.

    Returns the new orientation and the number of reversals performed.
    """
    done = 0
    for _ in range(reversals):
        cycle = random_directed_cycle(graph, orientation, rng)
        if cycle is None:
            break
        orientation = orientation.reversed(graph, cycle)
        done += 1
    return orientation, done
