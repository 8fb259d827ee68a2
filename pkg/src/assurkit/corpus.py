"""Bundled example graphs with their expected verdicts.

The 3-space instances are combinatorial reconstructions of classic
behaviours (strongly Assur, Assur but not strongly Assur, a decomposable
graph with a bad component, a pinned double banana, a vertex whose removal
leaves one vertex fixed). Vertex positions are sampled, never stored.
The expected verdicts were produced by the exact prime-field routines with
the default seed and are frozen here.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .errors import UnknownInstance
from .pinned_graph import PinnedGraph, dumps, make_graph


def _named(pairs):
    return [(f"{u}{v}", u, v) for u, v in pairs]


def dyad2() -> PinnedGraph:
    return make_graph(2, ["v"], ["p1", "p2"], [("e1", "v", "p1"), ("e2", "v", "p2")])


def stacked_dyads() -> PinnedGraph:
    return make_graph(2, ["v1", "v2"], ["p1", "p2", "p3"],
                      _named([("v1", "p1"), ("v1", "p2"), ("v2", "v1"), ("v2", "p3")]))


def triad2() -> PinnedGraph:
    return make_graph(2, ["a", "b", "c"], ["p1", "p2", "p3"],
                      _named([("a", "b"), ("b", "c"), ("c", "a"),
                              ("a", "p1"), ("b", "p2"), ("c", "p3")]))


def chain_three() -> PinnedGraph:
    """Dyad D on the ground, triad ABC hanging from D, dyad E on top of B and C."""
    return make_graph(2, ["D", "A", "B", "C", "E"], ["p1", "p2", "p3", "p4"],
                      _named([("D", "p1"), ("D", "p2"),
                              ("A", "B"), ("B", "C"), ("C", "A"),
                              ("A", "D"), ("B", "p3"), ("C", "p4"),
                              ("E", "B"), ("E", "C")]))


def branching_four() -> PinnedGraph:
    """chain_three plus a rigid quadrilateral GHIJ resting on D and the ground.

    GHIJ is incomparable with ABC and E, so it may sit anywhere to the right
    of D in a linear order.
    """
    g = chain_three()
    extra = make_graph(2, ["G", "H", "I", "J"], ["D", "p5", "p6"],
                       _named([("G", "H"), ("H", "I"), ("I", "J"), ("J", "G"), ("G", "I"),
                               ("G", "D"), ("H", "p5"), ("J", "p6")]))
    return PinnedGraph(2, g.inner + extra.inner, g.pinned + ("p5", "p6"), g.edges + extra.edges)


def overcounted_k4() -> PinnedGraph:
    """K4 on four inner vertices plus two pin edges: 2-directed and
    indecomposable, but the K4 carries 6 > 2*4 - 3 edges."""
    return make_graph(2, ["a", "b", "c", "d"], ["p1", "p2"],
                      _named([("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"),
                              ("c", "d"), ("a", "p1"), ("b", "p2")]))


def triplet3() -> PinnedGraph:
    return make_graph(3, ["v"], ["p1", "p2", "p3"],
                      [("e1", "v", "p1"), ("e2", "v", "p2"), ("e3", "v", "p3")])


def tetra_strong3() -> PinnedGraph:
    """A tetrahedron held by six ground bars: strongly 3-Assur."""
    return make_graph(3, ["a", "b", "c", "d"], ["g1", "g2", "g3", "g4", "g5", "g6"],
                      _named([("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"),
                              ("c", "d"), ("a", "g1"), ("a", "g2"), ("b", "g3"), ("b", "g4"),
                              ("c", "g5"), ("d", "g6")]))


def hinge_weak3() -> PinnedGraph:
    """3-Assur but not strongly 3-Assur.

    A has two ground bars; the banana t1 t2 t3 between A and pin g0 implies
    the bar A-g0, so A is held rigidly. Dropping t1-g3 frees only the
    rotation of the banana about the axis A-g0.
    """
    return make_graph(3, ["A", "t1", "t2", "t3"], ["g0", "g1", "g2", "g3"],
                      _named([("A", "g1"), ("A", "g2"),
                              ("t1", "t2"), ("t2", "t3"), ("t1", "t3"),
                              ("t1", "A"), ("t2", "A"), ("t3", "A"),
                              ("t1", "g0"), ("t2", "g0"), ("t3", "g0"), ("t1", "g3")]))


def banana_decomposable() -> PinnedGraph:
    """Poles N and S on tripods, banana b1 b2 b3 between them.

    3-directed and decomposable into {N}, {S}, {b1,b2,b3}; the top component
    (the banana with both poles as pins) is overcounted and spins about NS.
    """
    return make_graph(3, ["N", "S", "b1", "b2", "b3"], ["a1", "a2", "a3"],
                      _named([("N", "a1"), ("N", "a2"), ("N", "a3"),
                              ("S", "a1"), ("S", "a2"), ("S", "a3"),
                              ("b1", "b2"), ("b2", "b3"), ("b1", "b3"),
                              ("b1", "N"), ("b2", "N"), ("b3", "N"),
                              ("b1", "S"), ("b2", "S"), ("b3", "S")]))


def double_banana_pinned() -> PinnedGraph:
    """Two bananas sharing poles N, S, tied to three pins by six bars.

    Passes every necessary pinned 3-count and is indecomposable, yet the
    hinge about NS survives: generic rank 23 of 24.
    """
    sides = ["a1", "a2", "a3", "b1", "b2", "b3"]
    pairs = [("a1", "a2"), ("a2", "a3"), ("a1", "a3"), ("b1", "b2"), ("b2", "b3"), ("b1", "b3")]
    pairs += [(x, pole) for x in sides for pole in ("N", "S")]
    pairs += [("a1", "g1"), ("a2", "g2"), ("a3", "g3"), ("b1", "g1"), ("b2", "g2"), ("b3", "g3")]
    return make_graph(3, ["N", "S"] + sides, ["g1", "g2", "g3"], _named(pairs))


def banana_vertex_removal() -> PinnedGraph:
    """3-Assur; removing E sets B, C, D moving while A stays put.

    A is held by two ground bars and the bar A-g0 implied by the banana
    B C D between A and g0; E ties the banana to the ground.
    """
    return make_graph(3, ["A", "B", "C", "D", "E"], ["g0", "g1", "g2", "g3", "g4"],
                      _named([("A", "g1"), ("A", "g2"),
                              ("B", "C"), ("C", "D"), ("B", "D"),
                              ("B", "A"), ("C", "A"), ("D", "A"),
                              ("B", "g0"), ("C", "g0"), ("D", "g0"),
                              ("E", "B"), ("E", "C"), ("E", "g3"), ("E", "g4")]))


@dataclass(frozen=True)
class Instance:
    name: str
    build: Callable[[], PinnedGraph]
    description: str
    expected: dict


def _expect(isostatic, deficit, counts, components, assur, strong, **extra):
    out = {"isostatic": isostatic, "rank_deficit": deficit, "counts_pass": counts,
           "components": components, "assur": assur, "strongly_assur": strong}
    out.update(extra)
    return out


INSTANCES: dict[str, Instance] = {i.name: i for i in [
    Instance("dyad2", dyad2, "planar dyad on two pins",
             _expect(True, 0, True, 1, True, True)),
    Instance("triad2", triad2, "planar triad: triangle with one pin edge per vertex",
             _expect(True, 0, True, 1, True, True)),
    Instance("stacked_dyads", stacked_dyads, "dyad v2 resting on dyad v1",
             _expect(True, 0, True, 2, False, False)),
    Instance("chain_three", chain_three, "three planar components in a chain",
             _expect(True, 0, True, 3, False, False)),
    Instance("branching_four", branching_four, "four planar components, one incomparable",
             _expect(True, 0, True, 4, False, False, linear_extensions=3)),
    Instance("overcounted_k4", overcounted_k4,
             "planar, 2-directed, indecomposable, overcounted K4",
             _expect(False, 1, False, 1, False, False)),
    Instance("triplet3", triplet3, "3-space triplet on three pins",
             _expect(True, 0, True, 1, True, True)),
    Instance("tetra_strong3", tetra_strong3, "strongly 3-Assur tetrahedron on six bars",
             _expect(True, 0, True, 1, True, True)),
    Instance("hinge_weak3", hinge_weak3, "3-Assur, not strongly 3-Assur (implicit bar)",
             _expect(True, 0, True, 1, True, False, weak_drivers={"t1g3": ["t1", "t2", "t3"]})),
    Instance("banana_decomposable", banana_decomposable,
             "3-directed, decomposable, top component not isostatic",
             _expect(False, 1, True, 3, False, False, bad_components=[["b1", "b2", "b3"]])),
    Instance("double_banana_pinned", double_banana_pinned,
             "pinned double banana: counts pass, indecomposable, not isostatic",
             _expect(False, 1, True, 1, False, False)),
    Instance("banana_vertex_removal", banana_vertex_removal,
             "3-Assur; removing E moves B, C, D but not A",
             _expect(True, 0, True, 1, True, False, vertex_removal={"E": ["B", "C", "D"]})),
]}


def names() -> list[str]:
    return list(INSTANCES)


def get(name: str) -> Instance:
    try:
        return INSTANCES[name]
    except KeyError:
        raise UnknownInstance(f"no corpus instance named {name!r}") from None


def load(name: str) -> PinnedGraph:
    return get(name).build()


def emit(name: str, directory) -> tuple[Path, Path]:
    """Write ``<name>.json`` and its ``<name>.expected.json`` sidecar."""
    inst = get(name)
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    graph_path = out / f"{name}.json"
    side_path = out / f"{name}.expected.json"
    graph_path.write_text(inst.build().to_json(), encoding="utf-8")
    side_path.write_text(dumps({"format": "assur-kit/1", "instance": name,
                                "description": inst.description,
                                "expected": inst.expected}), encoding="utf-8")
    return graph_path, side_path
