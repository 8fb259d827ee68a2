from fractions import Fraction

import pytest

from assurkit import corpus
from assurkit.assur import (
    classify_drivers,
    drive_propagate,
    drive_solve,
    is_d_assur,
    is_strongly_d_assur,
    monolithic_drive,
    moving_set_on_edge_removal,
    vertex_removal_moving_set,
)
from assurkit.decomposition import scc_decompose
from assurkit.errors import NotBottomComponent, NotIsostatic, SingularConfiguration, UnknownEdge
from assurkit.orientation import find_d_orientation
from assurkit.pinned_graph import make_graph
from assurkit.rigidity import Configuration, nullspace, sample_generic_configuration

DYAD_AT = Configuration({"v": (0, 0), "p1": (1, 0), "p2": (0, 1)}, "rational")


def test_assur_examples():
    v = is_d_assur(corpus.dyad2())
    assert v.is_assur and all(v.route_agreement.values())
    v = is_d_assur(corpus.stacked_dyads())
    assert v.is_isostatic and not v.is_assur and v.components == 2
    assert is_d_assur(corpus.triad2()).is_assur


def test_not_isostatic_is_not_assur():
    v = is_d_assur(corpus.double_banana_pinned(), strong=True)
    assert not v.is_isostatic and not v.is_assur and v.is_strongly_assur is False


def test_moving_sets():
    assert moving_set_on_edge_removal(corpus.dyad2(), "e1") == {"v"}
    assert moving_set_on_edge_removal(corpus.stacked_dyads(), "v2p3") == {"v2"}
    g = corpus.tetra_strong3()
    assert all(moving_set_on_edge_removal(g, e.id) == g.inner_set for e in g.edges)
    assert moving_set_on_edge_removal(g, "ab", mode="float") == g.inner_set
    with pytest.raises(UnknownEdge):
        moving_set_on_edge_removal(g, "zz")
    with pytest.raises(NotIsostatic):
        moving_set_on_edge_removal(corpus.double_banana_pinned(), "a1a2")


def test_strong_examples(corpus_graphs):
    for name, g in corpus_graphs.items():
        if g.dimension == 2 and is_d_assur(g).is_assur:
            assert is_strongly_d_assur(g), name
    assert is_strongly_d_assur(corpus.tetra_strong3())
    assert not is_strongly_d_assur(corpus.hinge_weak3())


def test_strong_graphs_have_high_valence(corpus_graphs):
    for g in corpus_graphs.values():
        if len(g.inner) > 1 and is_strongly_d_assur(g):
            assert all(g.valence(v) >= g.dimension + 1 for v in g.inner)


def test_driver_classes():
    drivers, order = classify_drivers(corpus.tetra_strong3())
    assert all(c.kind == "regular" for c in drivers) and order == []

    drivers, order = classify_drivers(corpus.stacked_dyads())
    kinds = {c.edge_id: (c.kind, set(c.moving_set)) for c in drivers}
    assert kinds["v1p1"] == ("regular", {"v1", "v2"})
    assert kinds["v2p3"] == ("weak", {"v2"})
    assert ("v2p3", "v1p1") in order

    drivers, _ = classify_drivers(corpus.hinge_weak3())
    weak = [c for c in drivers if c.kind == "weak"]
    assert weak and all(c.moving_set and c.moving_set < corpus.hinge_weak3().inner_set for c in weak)


def test_vertex_removal():
    g = corpus.tetra_strong3()
    for v in g.inner:
        assert vertex_removal_moving_set(g, v) == g.inner_set - {v}
    assert vertex_removal_moving_set(corpus.banana_vertex_removal(), "E") == {"B", "C", "D"}
    assert vertex_removal_moving_set(corpus.dyad2(), "v") == frozenset()


def test_drive_solve_by_hand():
    g = corpus.dyad2()
    u = drive_solve(g, DYAD_AT, {"p1": (1, 0), "p2": (0, 0)})
    assert u == {"v": (1, 0)}
    assert drive_solve(g, DYAD_AT, {"p1": (0, 0), "p2": (0, 0)}) == {"v": (0, 0)}
    degenerate = Configuration({"v": (0, 0), "p1": (1, 0), "p2": (1, 0)}, "rational")
    with pytest.raises(SingularConfiguration):
        drive_solve(g, degenerate, {"p1": (1, 0)})


def test_single_component_drive_is_scaled_kernel():
    g = corpus.triad2()
    cfg = sample_generic_configuration(g, 5, "rational")
    decomp = scc_decompose(g, find_d_orientation(g))
    u = drive_propagate(g, decomp, cfg, "ab", Fraction(2))
    k = nullspace(g.without_edges(["ab"]), cfg)[0]
    ratios = {u[v][i] / k[v][i] for v in g.inner for i in range(2) if k[v][i] != 0}
    assert len(ratios) == 1


def test_stacked_dyads_propagation():
    g = corpus.stacked_dyads()
    cfg = sample_generic_configuration(g, 2, "rational")
    decomp = scc_decompose(g, find_d_orientation(g))
    u = drive_propagate(g, decomp, cfg, "v1p1", 1)
    assert u == monolithic_drive(g, cfg, "v1p1", 1)
    assert all(x != 0 for x in u["v2"])
    with pytest.raises(NotBottomComponent):
        drive_propagate(g, decomp, cfg, "v2p3", 1)


def test_zero_velocity_above_unrelated_components():
    # a second stack (w, then x on w) does not rest on v1, so driving v1 leaves it still
    base = corpus.stacked_dyads()
    g = make_graph(2, list(base.inner) + ["w", "x"], list(base.pinned) + ["p4", "p5"],
                   [(e.id, e.u, e.v) for e in base.edges]
                   + [("wp4", "w", "p4"), ("wp5", "w", "p5"), ("xw", "x", "w"), ("xp3", "x", "p3")])
    cfg = sample_generic_configuration(g, 1, "rational")
    decomp = scc_decompose(g, find_d_orientation(g))
    u = drive_propagate(g, decomp, cfg, "v1p1", 1)
    assert u["w"] == (0, 0) and u["x"] == (0, 0)
    assert all(x != 0 for x in u["v1"]) and all(x != 0 for x in u["v2"])
