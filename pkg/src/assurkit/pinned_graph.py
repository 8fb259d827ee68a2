"""Pinned multigraphs, orientations, grounding and pin surgery.

A pinned graph ``(I, P; E)`` carries inner vertices (free joints), pinned
vertices (fixed joints) and an edge list in which every edge touches at
least one inner vertex. Vertex ids are opaque strings; edge ids are unique
strings so parallel edges stay distinguishable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    OrientationMismatch,
    ParseError,
    UnknownEdge,
    UnknownVertex,
    ValidationFailed,
    WrongAnchorCount,
)

FORMAT = "assur-kit/1"
GROUND = "ground"


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str

    def other(self, x: str) -> str:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise UnknownVertex(f"{x} is not an endpoint of edge {self.id}")

    @property
    def ends(self) -> tuple[str, str]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Violation:
    kind: str
    vertices: tuple[str, ...] = ()
    edge_id: str | None = None

    def __str__(self) -> str:
        inner = ",".join(self.vertices)
        suffix = f" [edge {self.edge_id}]" if self.edge_id is not None else ""
        return f"{self.kind}({inner}){suffix}"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "edge": self.edge_id}


@dataclass(frozen=True)
class PinnedGraph:
    dimension: int
    inner: tuple[str, ...]
    pinned: tuple[str, ...]
    edges: tuple[Edge, ...]
    _edge_index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "inner", tuple(self.inner))
        object.__setattr__(self, "pinned", tuple(self.pinned))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "_edge_index", {e.id: e for e in self.edges})

    # -- lookups -----------------------------------------------------------
    @property
    def inner_set(self) -> frozenset[str]:
        return frozenset(self.inner)

    @property
    def pinned_set(self) -> frozenset[str]:
        return frozenset(self.pinned)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.inner + self.pinned

    @property
    def sorted_inner(self) -> list[str]:
        return sorted(self.inner)

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_index[edge_id]
        except KeyError:
            raise UnknownEdge(edge_id) from None

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._edge_index

    def is_inner(self, v: str) -> bool:
        return v in self.inner_set

    def incident(self, v: str) -> list[Edge]:
        return [e for e in self.edges if v in e.ends]

    def valence(self, v: str) -> int:
        return sum((e.u == v) + (e.v == v) for e in self.edges)

    def has_parallel_edges(self) -> bool:
        seen = set()
        for e in self.edges:
            key = frozenset(e.ends)
            if key in seen:
                return True
            seen.add(key)
        return False

    # -- derived graphs ----------------------------------------------------
    def without_edges(self, edge_ids: Iterable[str]) -> "PinnedGraph":
        drop = set(edge_ids)
        for eid in drop:
            self.edge(eid)
        return PinnedGraph(self.dimension, self.inner, self.pinned,
                           [e for e in self.edges if e.id not in drop])

    def without_vertex(self, v: str) -> "PinnedGraph":
        if v not in self.inner_set:
            raise UnknownVertex(f"{v} is not an inner vertex")
        return PinnedGraph(
            self.dimension,
            [x for x in self.inner if x != v],
            self.pinned,
            [e for e in self.edges if v not in e.ends],
        )

    def subgraph(self, inner: Iterable[str], edge_ids: Iterable[str] | None = None) -> "PinnedGraph":
        """Pinned graph on ``inner`` with every other endpoint treated as a pin.

        When ``edge_ids`` is None all edges whose endpoints lie in ``inner``
        or among the other vertices, with at least one endpoint in ``inner``,
        are kept.
        """
        keep = set(inner)
        unknown = keep - self.inner_set
        if unknown:
            raise UnknownVertex(f"not inner vertices: {sorted(unknown)}")
        if edge_ids is None:
            edges = [e for e in self.edges if e.u in keep or e.v in keep]
        else:
            edges = [self.edge(eid) for eid in edge_ids]
        pins: list[str] = []
        for e in edges:
            for x in e.ends:
                if x not in keep and x not in pins:
                    pins.append(x)
        return PinnedGraph(self.dimension, [v for v in self.inner if v in keep], pins, edges)

    # -- serialization -----------------------------------------------------
    def to_dict(self, coordinates: Mapping[str, Sequence] | None = None) -> dict:
        data = {
            "format": FORMAT,
            "dimension": self.dimension,
            "inner": list(self.inner),
            "pinned": list(self.pinned),
            "edges": [{"id": e.id, "u": e.u, "v": e.v} for e in self.edges],
        }
        if coordinates is not None:
            data["coordinates"] = {
                v: [_json_number(x) for x in coordinates[v]] for v in self.vertices
            }
        return data

    def to_json(self, coordinates=None) -> str:
        return dumps(self.to_dict(coordinates))


def _json_number(x):
    # non-integral rationals are written as "p/q" strings so they survive a round trip
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


def dumps(data) -> str:
    """Canonical JSON text used for every file the package writes."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def graph_from_dict(data: Mapping) -> tuple[PinnedGraph, dict | None]:
    """Parse the JSON graph format. Returns ``(graph, coordinates-or-None)``."""
    if not isinstance(data, Mapping):
        raise ParseError("graph document must be a JSON object")
    fmt = data.get("format", FORMAT)
    if fmt != FORMAT:
        raise ParseError(f"unsupported format {fmt!r}, expected {FORMAT!r}")
    try:
        dimension = int(data["dimension"])
        inner = [str(v) for v in data["inner"]]
        pinned = [str(v) for v in data.get("pinned", [])]
        raw_edges = data["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed graph document: {exc}") from None
    if dimension < 1:
        raise ParseError("dimension must be a positive integer")
    edges = []
    for i, item in enumerate(raw_edges):
        try:
            if isinstance(item, Mapping):
                eid = str(item.get("id", f"e{i + 1}"))
                edges.append(Edge(eid, str(item["u"]), str(item["v"])))
            else:
                u, v = item
                edges.append(Edge(f"e{i + 1}", str(u), str(v)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed edge #{i}: {exc}") from None
    coords = None
    if data.get("coordinates") is not None:
        raw = data["coordinates"]
        if not isinstance(raw, Mapping):
            raise ParseError("coordinates must be an object")
        coords = {}
        for v, xs in raw.items():
            try:
                coords[str(v)] = tuple(_parse_scalar(x) for x in xs)
            except (TypeError, ValueError) as exc:
                raise ParseError(f"bad coordinates for {v}: {exc}") from None
    return PinnedGraph(dimension, inner, pinned, edges), coords


def _parse_scalar(x):
    if isinstance(x, bool):
        raise ValueError("boolean is not a coordinate")
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"unsupported coordinate {x!r}")


def load_graph(path) -> tuple[PinnedGraph, dict | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return graph_from_dict(data)


# -- validation ------------------------------------------------------------

def validate(graph: PinnedGraph) -> list[Violation]:
    """Every well-formedness violation of ``graph``; empty means valid."""
    out: list[Violation] = []
    inner, pinned = graph.inner_set, graph.pinned_set
    if graph.dimension < 1:
        out.append(Violation("BadDimension", (str(graph.dimension),)))
    for v in sorted(inner & pinned):
        out.append(Violation("InnerPinnedOverlap", (v,)))
    for group in (graph.inner, graph.pinned):
        seen = set()
        for v in group:
            if v in seen:
                out.append(Violation("DuplicateVertex", (v,)))
            seen.add(v)
    if GROUND in inner or GROUND in pinned:
        out.append(Violation("ReservedVertexId", (GROUND,)))
    known = inner | pinned
    ids = set()
    for e in graph.edges:
        if e.id in ids:
            out.append(Violation("DuplicateEdgeId", (e.u, e.v), e.id))
        ids.add(e.id)
        missing = [x for x in e.ends if x not in known]
        for x in missing:
            out.append(Violation("UnknownEndpoint", (x,), e.id))
        if e.u == e.v:
            out.append(Violation("SelfLoop", (e.u,), e.id))
        elif not missing and e.u in pinned and e.v in pinned:
            out.append(Violation("PinPinEdge", (e.u, e.v), e.id))
    return out


def ensure_valid(graph: PinnedGraph) -> PinnedGraph:
    problems = validate(graph)
    if problems:
        raise ValidationFailed(problems)
    return graph


def drop_pin_pin_edges(graph: PinnedGraph) -> tuple[PinnedGraph, list[Edge]]:
    pinned = graph.pinned_set
    dropped = [e for e in graph.edges if e.u in pinned and e.v in pinned and e.u != e.v]
    return graph.without_edges(e.id for e in dropped), dropped


# -- orientations ----------------------------------------------------------

@dataclass(frozen=True)
class Orientation:
    """Tail assignment ``edge_id -> init vertex``; the head is the other end."""

    tail: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "tail", dict(self.tail))

    def head(self, graph: PinnedGraph, edge_id: str) -> str:
        return graph.edge(edge_id).other(self.tail[edge_id])

    def arcs(self, graph: PinnedGraph) -> list[tuple[str, str, str]]:
        """``(edge_id, tail, head)`` in graph edge order."""
        self.check(graph)
        return [(e.id, self.tail[e.id], e.other(self.tail[e.id])) for e in graph.edges]

    def out_degrees(self, graph: PinnedGraph) -> dict[str, int]:
        self.check(graph)
        deg = {v: 0 for v in graph.vertices}
        for e in graph.edges:
            deg[self.tail[e.id]] += 1
        return deg

    def check(self, graph: PinnedGraph) -> None:
        ids = {e.id for e in graph.edges}
        extra = set(self.tail) - ids
        if extra:
            raise OrientationMismatch(f"orientation names unknown edges {sorted(extra)}")
        missing = ids - set(self.tail)
        if missing:
            raise OrientationMismatch(f"orientation misses edges {sorted(missing)}")
        for e in graph.edges:
            if self.tail[e.id] not in e.ends:
                raise OrientationMismatch(f"tail {self.tail[e.id]} is not an endpoint of {e.id}")

    def reversed(self, graph: PinnedGraph, edge_ids: Iterable[str]) -> "Orientation":
        tail = dict(self.tail)
        for eid in edge_ids:
            tail[eid] = graph.edge(eid).other(tail[eid])
        return Orientation(tail)

    def is_d_directed(self, graph: PinnedGraph) -> bool:
        deg = self.out_degrees(graph)
        return all(deg[v] == graph.dimension for v in graph.inner) and all(
            deg[p] == 0 for p in graph.pinned
        )

    def to_dict(self) -> dict:
        return dict(sorted(self.tail.items()))


# -- grounding -------------------------------------------------------------

@dataclass(frozen=True)
class Digraph:
    """Directed multigraph as a vertex tuple plus ``(arc_id, tail, head)`` arcs."""

    vertices: tuple[str, ...]
    arcs: tuple[tuple[str, str, str], ...]

    def successors(self) -> dict[str, list[str]]:
        succ: dict[str, list[str]] = {v: [] for v in self.vertices}
        for _, t, h in self.arcs:
            succ[t].append(h)
        return succ

    def out_degree(self, v: str) -> int:
        return sum(1 for _, t, _ in self.arcs if t == v)


def condense_to_ground(graph: PinnedGraph, orientation: Orientation) -> Digraph:
    """Identify every pinned vertex with the single sink ``ground``."""
    orientation.check(graph)
    pinned = graph.pinned_set

    def g(x):
        return GROUND if x in pinned else x

    arcs = tuple((eid, g(t), g(h)) for eid, t, h in orientation.arcs(graph))
    return Digraph(tuple(graph.inner) + (GROUND,), arcs)


# -- surgery ---------------------------------------------------------------

def _fresh_edge_id(taken: set[str], base: str) -> str:
    eid, n = base, 1
    while eid in taken:
        n += 1
        eid = f"{base}_{n}"
    taken.add(eid)
    return eid


def release_pin(graph: PinnedGraph, pin: str, anchors: Sequence[str]) -> PinnedGraph:
    """Turn pinned vertex ``pin`` into an inner vertex held by ``d`` new edges.

    Anchors may be existing pins or new pinned vertices; new ones are appended
    to the pinned list.
    """
    if pin not in graph.pinned_set:
        raise UnknownVertex(f"{pin} is not a pinned vertex")
    anchors = list(dict.fromkeys(anchors))
    if len(anchors) != graph.dimension:
        raise WrongAnchorCount(
            f"need {graph.dimension} distinct anchors, got {len(anchors)}")
    if pin in anchors:
        raise WrongAnchorCount("a released pin cannot anchor itself")
    for a in anchors:
        if a in graph.inner_set:
            raise UnknownVertex(f"anchor {a} is an inner vertex")
    pinned = [p for p in graph.pinned if p != pin]
    pinned += [a for a in anchors if a not in pinned]
    taken = {e.id for e in graph.edges}
    new_edges = [Edge(_fresh_edge_id(taken, f"{pin}-{a}"), pin, a) for a in anchors]
    return PinnedGraph(graph.dimension, graph.inner + (pin,), pinned,
                       graph.edges + tuple(new_edges))


def repin_vertex(graph: PinnedGraph, v: str) -> tuple[PinnedGraph, list[Edge]]:
    """Move inner vertex ``v`` to the pins; edges left joining two pins are dropped."""
    if v not in graph.inner_set:
        raise UnknownVertex(f"{v} is not an inner vertex")
    pinned = set(graph.pinned) | {v}
    kept, deleted = [], []
    for e in graph.edges:
        (deleted if e.u in pinned and e.v in pinned else kept).append(e)
    return (
        PinnedGraph(graph.dimension, [x for x in graph.inner if x != v],
                    graph.pinned + (v,), kept),
        deleted,
    )


def make_graph(dimension: int, inner, pinned, edges) -> PinnedGraph:
    """Convenience constructor: ``edges`` holds ``(id, u, v)`` or ``(u, v)`` tuples."""
    out = []
    for i, item in enumerate(edges):
        if len(item) == 3:
            out.append(Edge(*map(str, item)))
        else:
            u, v = item
            out.append(Edge(f"e{i + 1}", str(u), str(v)))
    return PinnedGraph(dimension, [str(x) for x in inner], [str(x) for x in pinned], out)
