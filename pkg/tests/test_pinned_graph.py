import json

import pytest

from assurkit import corpus
from assurkit.errors import ParseError, UnknownVertex, ValidationFailed, WrongAnchorCount
from assurkit.pinned_graph import (
    GROUND,
    Orientation,
    condense_to_ground,
    drop_pin_pin_edges,
    ensure_valid,
    graph_from_dict,
    make_graph,
    release_pin,
    repin_vertex,
    validate,
)


def test_dyad_is_valid():
    assert validate(corpus.dyad2()) == []


def test_pin_pin_edge_reported():
    g = make_graph(2, ["v"], ["p1", "p2"], [("v", "p1"), ("v", "p2"), ("p1", "p2")])
    assert [str(v) for v in validate(g)] == ["PinPinEdge(p1,p2) [edge e3]"]
    with pytest.raises(ValidationFailed):
        ensure_valid(g)
    kept, dropped = drop_pin_pin_edges(g)
    assert validate(kept) == [] and [e.id for e in dropped] == ["e3"]


def test_self_loop_reported():
    g = make_graph(2, ["v"], ["p1"], [("v", "v"), ("v", "p1")])
    assert [(v.kind, v.vertices) for v in validate(g)] == [("SelfLoop", ("v",))]


def test_other_violations():
    g = make_graph(2, ["v", "ground"], ["v"], [("v", "x")])
    kinds = {v.kind for v in validate(g)}
    assert {"InnerPinnedOverlap", "ReservedVertexId", "UnknownEndpoint"} <= kinds


def test_condense_dyad():
    g = corpus.dyad2()
    dg = condense_to_ground(g, Orientation({"e1": "v", "e2": "v"}))
    assert set(dg.vertices) == {"v", GROUND}
    assert sorted((t, h) for _, t, h in dg.arcs) == [("v", GROUND), ("v", GROUND)]


def test_condense_without_pins():
    g = make_graph(1, ["a", "b"], [], [("a", "b"), ("b", "a")])
    dg = condense_to_ground(g, Orientation({"e1": "a", "e2": "b"}))
    assert GROUND in dg.vertices
    assert dg.out_degree(GROUND) == 0
    assert sorted((t, h) for _, t, h in dg.arcs) == [("a", "b"), ("b", "a")]


def test_release_pin_dyad():
    g = release_pin(corpus.dyad2(), "p1", ["q1", "q2"])
    assert set(g.inner) == {"v", "p1"}
    assert len(g.edges) == 4 == 2 * len(g.inner)
    assert validate(g) == []


@pytest.mark.parametrize("pin", ["p1", "p2", "p3"])
def test_release_pin_triad(pin):
    g = release_pin(corpus.triad2(), pin, ["q1", "q2"])
    assert len(g.edges) == 8 == 2 * len(g.inner)


def test_release_pin_errors():
    with pytest.raises(UnknownVertex):
        release_pin(corpus.dyad2(), "v", ["q1", "q2"])
    with pytest.raises(WrongAnchorCount):
        release_pin(corpus.dyad2(), "p1", ["q1"])


def test_repin():
    g, deleted = repin_vertex(corpus.dyad2(), "v")
    assert g.inner == () and g.edges == () and len(deleted) == 2
    g, _ = repin_vertex(corpus.stacked_dyads(), "v1")
    assert g.inner == ("v2",)
    assert sorted(e.other("v2") for e in g.edges) == ["p3", "v1"]
    with pytest.raises(UnknownVertex):
        repin_vertex(corpus.dyad2(), "p1")


def test_json_round_trip_is_byte_identical(corpus_graphs):
    for g in corpus_graphs.values():
        text = g.to_json()
        g2, coords = graph_from_dict(json.loads(text))
        assert coords is None
        assert g2.to_json() == text
        assert json.loads(text)["format"] == "assur-kit/1"


def test_json_round_trip_with_rational_coordinates():
    g = corpus.dyad2()
    coords = {"v": ("1/3", 0), "p1": (1, 0), "p2": (0, 2.5)}
    parsed, c = graph_from_dict(json.loads(g.to_json(coords)))
    text = parsed.to_json(c)
    again, c2 = graph_from_dict(json.loads(text))
    assert again.to_json(c2) == text
    assert json.loads(text)["coordinates"]["v"] == ["1/3", 0]


@pytest.mark.parametrize("doc", [
    [],
    {"dimension": 2},
    {"format": "other/9", "dimension": 2, "inner": [], "edges": []},
    {"dimension": 0, "inner": [], "edges": []},
    {"dimension": 2, "inner": ["v"], "edges": [{"u": "v"}]},
])
def test_parse_errors(doc):
    with pytest.raises(ParseError):
        graph_from_dict(doc)
