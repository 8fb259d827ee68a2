"""Necessary pinned d-counts, the planar pinned Laman test, and the
counts-to-orientation bridge.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import CountsViolated, CrossCheckFailure, Infeasible, SizeCapExceeded, WrongDimension
from .orientation import find_d_orientation
from .pinned_graph import Orientation, PinnedGraph

BRUTE_FORCE_CAP = 16


@dataclass(frozen=True)
class CountViolation:
    inner: tuple[str, ...]
    pinned: tuple[str, ...]
    edges: int
    bound: int
    clause: str

    def to_dict(self) -> dict:
        return {"inner": list(self.inner), "pinned": list(self.pinned), "edges": self.edges,
                "bound": self.bound, "clause": self.clause}


def top_count(graph: PinnedGraph) -> bool:
    return len(graph.edges) == graph.dimension * len(graph.inner)


def count_bound(d: int, n_inner: int, k: int) -> int:
    """Largest number of independent edges on ``n_inner`` inner vertices and ``k`` pins.

    ``d*n - C(d+1-k, 2)``, the rotational deficit vanishing once ``k >= d``.
    Subgraphs spanning fewer than ``d`` points get back the motions that fix
    all of them, ``C(d+1-n-k, 2)``; without this term a lone inner vertex
    would already violate the ``k = 0`` clause.
    """
    n = n_inner + k
    return d * n_inner - comb(max(d + 1 - k, 0), 2) + comb(max(d + 1 - n, 0), 2)


def _clause(d: int, k: int) -> str:
    return "2(i)" if k >= d else f"2(ii) k={k}"


def subgraph_counts_bruteforce(graph: PinnedGraph, cap: int = BRUTE_FORCE_CAP) -> list[CountViolation]:
    """Every violated subgraph count, by enumeration of inner subsets.

    For a fixed inner set ``I'`` and pin count ``k`` the subgraph with the
    most edges takes every induced inner edge and the ``k`` pins sending the
    most edges into ``I'``; once ``k >= d`` the bound stops growing, so all
    touched pins are taken. Checking these maximal subgraphs is enough.
    """
    d = graph.dimension
    inner = sorted(graph.inner)
    n = len(inner)
    if n > cap:
        raise SizeCapExceeded(f"{n} inner vertices exceed brute-force cap {cap}")
    bit = {v: 1 << i for i, v in enumerate(inner)}
    pinned = graph.pinned_set
    inner_edges: list[int] = []
    pin_edges: list[tuple[int, str]] = []
    for e in graph.edges:
        if e.u in pinned:
            pin_edges.append((bit[e.v], e.u))
        elif e.v in pinned:
            pin_edges.append((bit[e.u], e.v))
        else:
            inner_edges.append(bit[e.u] | bit[e.v])
    out: list[CountViolation] = []
    for mask in range(1, 1 << n):
        size = bin(mask).count("1")
        e_in = sum(1 for m in inner_edges if m & mask == m)
        per_pin: dict[str, int] = {}
        for m, p in pin_edges:
            if m & mask:
                per_pin[p] = per_pin.get(p, 0) + 1
        ranked = sorted(per_pin.items(), key=lambda kv: (-kv[1], kv[0]))
        members = tuple(v for v in inner if bit[v] & mask)
        candidates = [(k, ranked[:k]) for k in range(min(len(ranked), d - 1) + 1)]
        if len(ranked) >= d:
            candidates.append((len(ranked), ranked))
        for k, pins in candidates:
            edges = e_in + sum(c for _, c in pins)
            bound = count_bound(d, size, k)
            if edges > bound:
                out.append(CountViolation(members, tuple(sorted(p for p, _ in pins)), edges,
                                          bound, _clause(d, k)))
    return out


def counts_pass(graph: PinnedGraph, cap: int = BRUTE_FORCE_CAP) -> bool:
    return top_count(graph) and not subgraph_counts_bruteforce(graph, cap)


# -- planar pinned Laman test ---------------------------------------------

class _PebbleGame:
    """(2,3)-pebble game on a multigraph: two pebbles per vertex."""

    def __init__(self, vertices):
        self.pebbles = {v: 2 for v in vertices}
        self.out: dict = {v: [] for v in vertices}

    def _find_pebble(self, start, held) -> bool:
        # depth-first search along accepted (directed) edges for a free pebble
        parent = {start: None}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent or y in held:
                    continue
                parent[y] = x
                if self.pebbles[y] > 0:
                    self.pebbles[y] -= 1
                    self.pebbles[start] += 1
                    node = y
                    while parent[node] is not None:
                        prev = parent[node]
                        self.out[prev].remove(node)
                        self.out[node].append(prev)
                        node = prev
                    return True
                stack.append(y)
        return False

    def insert(self, u, v) -> bool:
        held = {u, v}
        while self.pebbles[u] < 2:
            if not self._find_pebble(u, held):
                return False
        while self.pebbles[v] < 2:
            if not self._find_pebble(v, held):
                return False
        self.pebbles[u] -= 1
        self.out[u].append(v)
        return True


def pinned_laman_check_2d(graph: PinnedGraph) -> bool:
    """Pinned plane framework conditions, decided by a pebble game.

    The pins are tied together by an isostatic fan (``p1-p2`` plus ``pi-p1``,
    ``pi-p2``); the pinned counts hold exactly when the grounded graph is a
    Laman graph, which the (2,3)-pebble game decides in polynomial time.
    """
    if graph.dimension != 2:
        raise WrongDimension("pinned Laman check is planar only")
    if not top_count(graph):
        return False
    if not graph.inner:
        return True
    pins = sorted(graph.pinned)
    if len(pins) < 2:
        # with at most one pin, |E| = 2|I| already exceeds 2|I| - 1 (or 2|I| - 3)
        return False
    game = _PebbleGame(sorted(graph.inner) + pins)
    fan = [(pins[0], pins[1])] + [(p, q) for p in pins[2:] for q in pins[:2]]
    for u, v in fan:
        if not game.insert(u, v):  # pragma: no cover
            raise CrossCheckFailure("ground fan is not independent")
    for e in sorted(graph.edges, key=lambda e: e.id):
        if not game.insert(e.u, e.v):
            return False
    return True


def counts_imply_orientation(graph: PinnedGraph, cap: int = BRUTE_FORCE_CAP) -> Orientation:
    """A d-directed orientation of a graph satisfying the necessary counts.

    A failure to orient a counts-passing graph would contradict the theory and
    is reported as an internal error.
    """
    if graph.dimension == 2 and len(graph.inner) > cap:
        ok = pinned_laman_check_2d(graph)
    else:
        ok = counts_pass(graph, cap)
    if not ok:
        raise CountsViolated("graph fails the necessary pinned counts")
    try:
        return find_d_orientation(graph)
    except Infeasible as exc:
        raise CrossCheckFailure(f"counts pass but no d-directed orientation: {exc}") from exc
