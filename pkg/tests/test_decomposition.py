import random

from hypothesis import given, settings
from hypothesis import strategies as st

from assurkit import corpus
from assurkit.decomposition import (
    Decomposition,
    ExtendedComponent,
    brute_force_scc,
    is_linear_extension,
    linear_extensions,
    scc_decompose,
    strongly_connected_components,
)
from assurkit.generators import henneberg_pinned
from assurkit.orientation import find_d_orientation
from assurkit.pinned_graph import GROUND, Orientation, condense_to_ground


def _decompose(g):
    return scc_decompose(g, find_d_orientation(g))


def test_dyad_single_component():
    d = _decompose(corpus.dyad2())
    assert [c.inner_vertices for c in d.components] == [("v",)]
    assert sorted(d.components[0].edges) == ["e1", "e2"]


def test_stacked_dyads_by_hand():
    g = corpus.stacked_dyads()
    o = Orientation({"v1p1": "v1", "v1p2": "v1", "v2v1": "v2", "v2p3": "v2"})
    d = scc_decompose(g, o)
    assert [c.inner_vertices for c in d.components] == [("v1",), ("v2",)]
    assert d.dag_edges == {(1, 0)}
    assert d.linear_order == [0, 1]
    dg = condense_to_ground(g, o)
    parts = set(brute_force_scc(dg.vertices, [(t, h) for _, t, h in dg.arcs]))
    assert parts == {frozenset({"v1"}), frozenset({"v2"}), frozenset({GROUND})}


def test_triad_single_component():
    assert len(_decompose(corpus.triad2())) == 1


def test_brute_force_small_cases():
    assert brute_force_scc(["x"], []) == [frozenset({"x"})]
    assert brute_force_scc([1, 2, 3], [(1, 2), (2, 3), (3, 1)]) == [frozenset({1, 2, 3})]


def _fake(n, dag):
    comps = [ExtendedComponent((f"c{i}",), ()) for i in range(n)]
    from assurkit.decomposition import _kahn

    return Decomposition(comps, set(dag), _kahn(comps, set(dag)))


def test_linear_extensions_chain_and_antichain():
    chain = _fake(3, {(1, 0), (2, 1)})
    assert linear_extensions(chain) == [[0, 1, 2]]
    free = _fake(2, set())
    assert sorted(linear_extensions(free)) == [[0, 1], [1, 0]]


def test_branching_orders_share_bottom():
    g = corpus.branching_four()
    d = _decompose(g)
    orders = linear_extensions(d)
    assert len(orders) == 3
    assert orders[0] == d.linear_order
    bottom = {o[0] for o in orders}
    assert len(bottom) == 1 and d.components[bottom.pop()].inner_vertices == ("D",)
    assert all(is_linear_extension(d, o) for o in orders)


def test_chain_partial_order():
    d = _decompose(corpus.chain_three())
    names = {c.inner_vertices: i for i, c in enumerate(d.components)}
    abc, dd, e = names[("A", "B", "C")], names[("D",)], names[("E",)]
    assert d.dag_edges == {(abc, dd), (e, abc)}
    assert d.multiplicity[(e, abc)] == 2


def test_dot_output():
    g = corpus.stacked_dyads()
    o = find_d_orientation(g)
    text = scc_decompose(g, o).to_dot()
    assert text.count("[label=") == 2
    assert '"C1" -> "C0";' in text and '"C0" -> "ground";' in text
    full = scc_decompose(g, o).to_dot(g, o, full=True)
    assert "subgraph cluster_0" in full and "style=dashed" in full


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_components_partition_graph(seed):
    rng = random.Random(seed)
    g = henneberg_pinned(rng, rng.choice([2, 3]), 6)
    d = _decompose(g)
    assert sorted(v for c in d.components for v in c.inner_vertices) == sorted(g.inner)
    assert sorted(e for c in d.components for e in c.edges) == sorted(e.id for e in g.edges)
    for c in d.components:
        assert len(c.edges) == g.dimension * len(c.inner_vertices)
    assert is_linear_extension(d, d.linear_order)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12), st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=40))
def test_tarjan_matches_brute_force(n, pairs):
    arcs = [(a % n, b % n) for a, b in pairs]
    succ = {}
    for a, b in arcs:
        succ.setdefault(a, []).append(b)
    tarjan = {frozenset(c) for c in strongly_connected_components(list(range(n)), succ)}
    assert tarjan == set(brute_force_scc(list(range(n)), arcs))
