"""Random pinned graphs for property tests and benchmarks.

``henneberg_pinned`` grows a pinned graph from its pins by vertex additions
(a new inner vertex on ``d`` distinct old vertices) and edge splits (replace
an edge ``ab`` by a new vertex on ``a``, ``b`` and ``d - 1`` others). Both
moves keep the rows generically independent and keep ``|E| = d|I|``, so the
result is pinned isostatic. ``mutate`` moves edges around to produce graphs
with the same top count that usually are not.
"""

from __future__ import annotations

import random

from .pinned_graph import Edge, PinnedGraph


def henneberg_pinned(rng: random.Random, d: int = 2, n_inner: int = 5, n_pins: int | None = None,
                     split_prob: float = 0.5, pin_bias: float = 0.3) -> PinnedGraph:
    """A random pinned d-isostatic graph with ``n_inner`` inner vertices.

    ``pin_bias`` is the chance that a vertex addition lands only on pins,
    which tends to create several components.
    """
    k = n_pins if n_pins is not None else rng.randint(d, d + 3)
    pins = [f"p{i}" for i in range(k)]
    inner: list[str] = []
    edges: list[tuple[str, str]] = []
    for i in range(n_inner):
        v = f"v{i}"
        old = pins + inner
        if edges and rng.random() < split_prob:
            a, b = edges.pop(rng.randrange(len(edges)))
            others = [x for x in old if x not in (a, b)]
            if len(others) >= d - 1:
                new = [a, b] + rng.sample(others, d - 1)
            else:
                edges.append((a, b))
                new = rng.sample(old, d)
        elif rng.random() < pin_bias and len(pins) >= d:
            new = rng.sample(pins, d)
        else:
            new = rng.sample(old, d)
        edges += [(v, w) for w in new]
        inner.append(v)
    return PinnedGraph(d, inner, pins, [Edge(f"e{j}", u, w) for j, (u, w) in enumerate(edges)])


def mutate(rng: random.Random, graph: PinnedGraph, moves: int = 1, allow_parallel: bool = True) -> PinnedGraph:
    """Delete ``moves`` random edges and add as many random ones (one inner endpoint at least)."""
    edges = [(e.u, e.v) for e in graph.edges]
    verts = list(graph.vertices)
    inner = list(graph.inner)
    for _ in range(moves):
        if not edges:
            break
        edges.pop(rng.randrange(len(edges)))
        for _attempt in range(50):
            u = rng.choice(inner)
            w = rng.choice(verts)
            if w == u:
                continue
            if not allow_parallel and ((u, w) in edges or (w, u) in edges):
                continue
            edges.append((u, w))
            break
    return PinnedGraph(graph.dimension, graph.inner, graph.pinned,
                       [Edge(f"e{j}", u, w) for j, (u, w) in enumerate(edges)])


def random_top_count_graph(rng: random.Random, d: int = 2, n_inner: int = 5,
                           n_pins: int | None = None) -> PinnedGraph:
    """Uniformly random multigraph with ``|E| = d|I|`` and every edge touching I."""
    k = n_pins if n_pins is not None else rng.randint(0, d + 2)
    if n_inner == 1:
        k = max(k, 1)  # a lone inner vertex needs somewhere to attach
    pins = [f"p{i}" for i in range(k)]
    inner = [f"v{i}" for i in range(n_inner)]
    verts = inner + pins
    edges = []
    while len(edges) < d * n_inner:
        u = rng.choice(inner)
        w = rng.choice(verts)
        if u != w:
            edges.append(Edge(f"e{len(edges)}", u, w))
    return PinnedGraph(d, inner, pins, edges)


def random_digraph(rng: random.Random, n: int, density: float) -> tuple[list[int], list[tuple[int, int]]]:
    verts = list(range(n))
    arcs = [(a, b) for a in verts for b in verts if a != b and rng.random() < density]
    return verts, arcs
