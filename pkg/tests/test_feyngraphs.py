import itertools
import random

import networkx as nx
import pytest

from hallforest import corpus as co
from hallforest import feyngraphs as fg
from hallforest.verify import _random_relabel_graph

KEYS = {name: co.builtin_key(name) for name in co.BUILTINS}


# -- oracles


def nx_graph(g: fg.FeynmanGraph, verts=None) -> nx.MultiGraph:
    """The multigraph on ``verts`` with each node labeled by its dangling half-edge count."""
    verts = set(g.vertices if verts is None else verts)
    m = nx.MultiGraph()
    for v in verts:
        m.add_node(v, legs=0)
    for a, b in g.internal:
        u, w = g.half_edges[a], g.half_edges[b]
        if u in verts and w in verts:
            m.add_edge(u, w)
    for h, v in g.half_edges.items():
        if v in verts and not (h in g.partner and g.half_edges[g.partner[h]] in verts):
            m.nodes[v]["legs"] += 1
    return m


def nx_iso(g: fg.FeynmanGraph, h: fg.FeynmanGraph) -> bool:
    return nx.is_isomorphic(nx_graph(g), nx_graph(h),
                            node_match=lambda x, y: x["legs"] == y["legs"])


def brute_piece_ok(g: fg.FeynmanGraph, verts) -> bool:
    m = nx_graph(g, verts)
    if not nx.is_connected(m):
        return False
    if sum(d["legs"] for _, d in m.nodes(data=True)) not in (2, 3):
        return False
    if m.number_of_edges() - m.number_of_nodes() + 1 < 1:
        return False
    for e in list(m.edges(keys=True)):
        cut = m.copy()
        cut.remove_edge(*e)
        if not nx.is_connected(cut):
            return False
    return True


def brute_subgraphs(g: fg.FeynmanGraph) -> set:
    pieces = [frozenset(c) for r in range(1, len(g.vertices) + 1)
              for c in itertools.combinations(g.vertices, r) if brute_piece_ok(g, c)]
    out = {frozenset()}
    for r in range(1, len(pieces) + 1):
        for fam in itertools.combinations(pieces, r):
            if all(not (a & b) for a, b in itertools.combinations(fam, 2)):
                out.add(frozenset(fam))
    return out


# -- validation


@pytest.mark.parametrize("name", sorted(co.BUILTINS))
def test_builtins_are_valid(name):
    g = fg.validate(co.BUILTINS[name]())
    assert fg.violations(g) == []


@pytest.mark.parametrize("edges,legs,reason", [
    ([("a", "b")], {"a": 2, "b": 2}, "loop-free"),
    ([("a", "b"), ("a", "b")], {"a": 1, "b": 2}, "4 half-edges"),
    ([("a", "b"), ("a", "b"), ("c", "d"), ("c", "d"), ("b", "c")], {"a": 1, "d": 1}, "irreducible"),
    ([("a", "a")], {"a": 1}, "1 external"),
])
def test_invalid_graphs_are_reported(edges, legs, reason):
    g = fg.graph_from_edges(edges, legs)
    bad = fg.violations(g)
    assert bad
    assert any(reason in v for v in bad)
    with pytest.raises(fg.GraphError):
        fg.validate(g)


def test_json_round_trip():
    g = co.gamma_eg()
    assert fg.FeynmanGraph.from_json(g.to_json()) == g


# -- canonical keys


@pytest.mark.parametrize("key", co.graph_corpus(3))
def test_key_round_trip(key):
    assert fg.canon_graph(fg.graph_from_key(key)) == key


def test_random_relabelings_keep_the_key():
    rng = random.Random(5)
    corpus = co.graph_corpus(3)
    for _ in range(100):
        key = rng.choice(corpus)
        g = fg.graph_from_key(key)
        h = _random_relabel_graph(g, rng)
        assert fg.canon_graph(h) == key
        assert nx_iso(g, h)


def test_corpus_classes_are_pairwise_non_isomorphic():
    graphs = [fg.graph_from_key(k) for k in co.graph_corpus(3)]
    for g, h in itertools.combinations(graphs, 2):
        assert not nx_iso(g, h)


def test_corpus_sizes():
    assert [len(co.graph_corpus(n)) for n in (1, 2, 3)] == [2, 7, 33]


# -- subgraphs and contraction


@pytest.mark.parametrize("name,count", [("B2", 2), ("T3", 2), ("X", 3), ("Y", 4), ("Gamma_eg", 5)])
def test_subgraphs_match_brute_force(name, count):
    g = co.BUILTINS[name]()
    got = fg.subgraphs(g)
    assert len(got) == count
    assert set(got) == brute_subgraphs(g)


@pytest.mark.parametrize("key", co.graph_corpus(2) + [KEYS["B2"][:-1] + "|" + KEYS["T3"][1:]])
def test_subgraph_oracle_on_corpus(key):
    g = fg.graph_from_key(key)
    assert set(fg.subgraphs(g)) == brute_subgraphs(g)


def test_contraction_of_the_example():
    g = co.gamma_eg()
    q = fg.contract(g, [{"v3", "v4"}])
    assert fg.canon_graph(q) == fg.canon_graph(co.gamma_eg_quotient()) == KEYS["Y"]
    assert nx_iso(q, co.gamma_eg_quotient())


def test_contracting_everything_is_empty():
    for name in ("B2", "Y"):
        g = co.BUILTINS[name]()
        assert fg.canon_graph(fg.contract(g, g.components())) == fg.EMPTY


def test_contraction_drops_loops():
    for key in co.graph_corpus(3):
        g = fg.graph_from_key(key)
        for s in fg.subgraphs(g):
            sub, quot = fg.sub_graph(g, s), fg.contract(g, s)
            assert sub.loops() + quot.loops() == g.loops()


def test_non_subgraph_rejected():
    g = co.square_with_chord()
    assert not fg.is_subgraph(g, [{"v3", "v4"}])
    assert fg.is_subgraph(g, [{"v1", "v3", "v4"}])


# -- insertion


def test_insertion_counts():
    assert fg.prelie_graph(KEYS["B2"], KEYS["T3"]) == {KEYS["X"]: 6}
    assert fg.prelie_graph(KEYS["T3"], KEYS["B2"]) == {KEYS["Y"]: 12}


def test_inserted_graphs_contain_the_insertion():
    for a, b in itertools.product(co.graph_corpus(1), repeat=2):
        for m in fg.prelie_graph(a, b):
            assert fg.graph_splits(m)[(a, b)] >= 1


def test_disconnected_left_factor_rejected():
    with pytest.raises(fg.GraphError):
        fg.prelie_graph(fg.join_graph_keys([KEYS["B2"], KEYS["B2"]]), KEYS["T3"])


# -- K0


@pytest.mark.parametrize("name,k0", [
    ("B2", {"B2": 1}), ("T3", {"T3": 1}), ("X", {"B2": 1, "T3": 1}),
    ("Y", {"B2": 1, "T3": 1}), ("Gamma_eg", {"B2": 2, "T3": 1}),
])
def test_k0_classes(name, k0):
    assert fg.k0_graph(KEYS[name]) == {KEYS[n]: c for n, c in k0.items()}


@pytest.mark.parametrize("key", co.graph_corpus(3))
def test_k0_is_series_independent(key):
    assert len(fg.k0_all_series(key)) == 1


# -- morphisms


def test_graph_morphism_identity_and_kernels():
    g = co.triangle_with_bubble()
    ident = fg.graph_identity(g)
    assert fg.compose_graph_morphisms(ident, ident) == ident
    inc = fg.graph_kernel(fg.graph_cokernel(ident))
    assert inc.target == g


def test_graph_morphism_checks_isomorphism():
    g = co.bubble()
    with pytest.raises(fg.GraphError):
        fg.GraphMorphism(g, g, frozenset(), frozenset(g.components()), {}, {})
