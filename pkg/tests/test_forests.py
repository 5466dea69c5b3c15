import itertools
import random
from collections import Counter

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hallforest import forests as fo
from hallforest.verify import random_forest_morphism


# -- oracles


def nx_forest(lf: fo.LabeledForest) -> nx.DiGraph:
    g = nx.DiGraph()
    for v, p in lf.parent.items():
        g.add_node(v, root=p is None)
        if p is not None:
            g.add_edge(p, v)
    return g


def nx_iso(a: fo.LabeledForest, b: fo.LabeledForest) -> bool:
    return nx.is_isomorphic(nx_forest(a), nx_forest(b),
                            node_match=lambda x, y: x["root"] == y["root"])


def parent_arrays(n: int):
    """Every labeled rooted tree on 0..n-1 with parent[i] < i."""
    for ps in itertools.product(*[range(i) for i in range(1, n)]):
        yield fo.LabeledForest({"0": None, **{str(i + 1): str(p) for i, p in enumerate(ps)}})


def brute_classes(n: int) -> int:
    reps: list[fo.LabeledForest] = []
    for t in parent_arrays(n):
        if not any(nx_iso(t, r) for r in reps):
            reps.append(t)
    return len(reps)


def antichains(lf: fo.LabeledForest):
    vs = sorted(lf.parent)
    for r in range(len(vs) + 1):
        for pts in itertools.combinations(vs, r):
            if all(not lf.is_ancestor(a, b) and not lf.is_ancestor(b, a)
                   for a, b in itertools.combinations(pts, 2)):
                yield pts


def brute_splits(key: str) -> Counter:
    lf = fo.LabeledForest.from_key(key)
    out: Counter = Counter()
    for pts in antichains(lf):
        below = set().union(*(lf.subtree(p) for p in pts)) if pts else set()
        out[(lf.key_of(below), lf.key_of(set(lf.parent) - below))] += 1
    return out


def random_tree_parents(picks):
    parent = {"x0": None}
    for i, p in enumerate(picks, 1):
        parent[f"x{i}"] = f"x{p % i}"
    return parent


tree_parents = st.lists(st.integers(0, 20), max_size=8).map(random_tree_parents)


# -- parsing and canonical form


@pytest.mark.parametrize("text,key", [
    ("()", "{()}"),
    ("(()())", "{(()())}"),
    ("{(()),()}", "{(),(())}"),
    ("{}", "{}"),
    ("{((())()), (), (())}", "{(),(()),(()(()))}"),
])
def test_parse_forest_canonicalizes(text, key):
    assert fo.parse_forest(text) == key


@pytest.mark.parametrize("bad,column", [("((()", 4), ("())", 3), ("(x)", 2)])
def test_parse_errors_report_a_column(bad, column):
    with pytest.raises(fo.ForestError, match=f"column {column}"):
        fo.parse_tree(bad)


def test_ordering_is_size_then_ascii():
    keys = fo.enumerate_trees(4)
    assert keys == sorted(keys)
    assert [fo.order_key(k) for k in ["()", "(())", "(()())"]] == sorted(
        fo.order_key(k) for k in ["(()())", "()", "(())"])


@settings(max_examples=150, deadline=None)
@given(tree_parents, st.randoms(use_true_random=False))
def test_canonical_key_agrees_with_graph_isomorphism(parent, rnd):
    a = fo.LabeledForest(parent)
    names = list(parent)
    shuffled = names[:]
    rnd.shuffle(shuffled)
    ren = dict(zip(names, shuffled))
    b = fo.LabeledForest({ren[v]: (None if p is None else ren[p]) for v, p in parent.items()})
    assert a.key == b.key
    assert nx_iso(a, b)


def test_distinct_keys_are_not_isomorphic():
    reps = [fo.LabeledForest.from_key(k) for k in fo.enumerate_trees(5)]
    for x, y in itertools.combinations(reps, 2):
        assert not nx_iso(x, y)


@pytest.mark.parametrize("n", range(1, 7))
def test_tree_counts_match_brute_force(n):
    assert len(fo.enumerate_trees(n)) == brute_classes(n)


def test_forest_counts_by_euler_transform():
    trees = [len(fo.enumerate_trees(n)) for n in range(1, 8)]
    # multisets of trees: coefficients of prod (1 - x^n)^(-a_n)
    poly = [1] + [0] * 7
    for n, a in enumerate(trees, 1):
        for _ in range(a):
            for k in range(n, 8):
                poly[k] += poly[k - n]
    assert [len(fo.enumerate_forests(n)) for n in range(8)] == poly


# -- cuts


def test_cherry_has_five_admissible_cuts():
    lf = fo.LabeledForest.from_key("(()())")
    assert len(fo.admissible_cuts(lf)) == 5


@pytest.mark.parametrize("key", [k for n in range(0, 6) for k in fo.enumerate_forests(n)])
def test_splits_match_antichain_enumeration(key):
    assert fo.forest_splits(key) == brute_splits(key)


def test_cuts_are_antichains():
    lf = fo.LabeledForest.from_key("{((()())),(()())}")
    cuts = fo.admissible_cuts(lf)
    assert len(cuts) == len(set(c.points for c in cuts)) == len(list(antichains(lf)))


def test_invalid_cut_rejected():
    lf = fo.LabeledForest.from_nested(("r", [("a", [("b", [])])]))
    with pytest.raises(fo.ForestError):
        fo.Cut.from_points(lf, ["a", "b"]).check(lf)


@pytest.mark.parametrize("key", ["(()(()))", "{(()),((()))}", "((()())())"])
def test_cut_lattice(key):
    lf = fo.LabeledForest.from_key(key)
    cuts = fo.admissible_cuts(lf)
    for c, d in itertools.product(cuts, repeat=2):
        mx, mn = fo.cut_max(lf, c, d), fo.cut_min(lf, c, d)
        # join and meet are union and intersection of branch parts
        assert mx.branch_part(lf) == c.branch_part(lf) | d.branch_part(lf)
        assert mn.branch_part(lf) == c.branch_part(lf) & d.branch_part(lf)
        assert fo.cut_max(lf, c, mn) == c and fo.cut_min(lf, c, mx) == c


def test_unknown_parent_and_cycle_rejected():
    with pytest.raises(fo.ForestError):
        fo.LabeledForest({"a": "zz"})
    with pytest.raises(fo.ForestError):
        fo.LabeledForest({"a": "b", "b": "a"})


# -- morphisms


def test_morphism_bijection_is_checked():
    src = fo.LabeledForest.from_key("(())", "s")
    with pytest.raises(fo.ForestError):
        fo.ForestMorphism(src, src, fo.empty_cut(), fo.empty_cut(), {})


def test_kernel_and_cokernel_objects():
    rng = random.Random(3)
    for _ in range(100):
        src = fo.LabeledForest.from_key(rng.choice(fo.enumerate_forests(4)), "s")
        m = random_forest_morphism(src, rng, "t")
        k, q = fo.kernel(m), fo.cokernel(m)
        assert k.target == m.source and q.source == m.target
        assert k.source.key == fo.apply_cut(m.source, m.c1)[0]
        assert q.target.key == fo.apply_cut(m.target, m.c2)[1]


def test_composition_is_associative_and_unital():
    rng = random.Random(11)
    for _ in range(1000):
        start = fo.LabeledForest.from_key(rng.choice(fo.enumerate_forests(rng.randint(0, 3))), "s")
        m1 = random_forest_morphism(start, rng, "t")
        m2 = random_forest_morphism(m1.target, rng, "u")
        m3 = random_forest_morphism(m2.target, rng, "w")
        assert (fo.compose_morphisms(fo.compose_morphisms(m1, m2), m3)
                == fo.compose_morphisms(m1, fo.compose_morphisms(m2, m3)))
        assert fo.compose_morphisms(fo.identity(m1.source), m1) == m1
        assert fo.compose_morphisms(m1, fo.identity(m1.target)) == m1


def test_composition_requires_matching_middle():
    a = fo.identity(fo.LabeledForest.from_key("()", "a"))
    b = fo.identity(fo.LabeledForest.from_key("()", "b"))
    with pytest.raises(fo.ForestError):
        fo.compose_morphisms(a, b)


def test_forest_isomorphism_maps_structure():
    a = fo.LabeledForest.from_key("{(()),(()())}", "a")
    b = fo.LabeledForest.from_key("{(()()),(())}", "b")
    f = fo.forest_isomorphism(a, b)
    assert f is not None
    assert all((a.parent[v] is None and b.parent[f[v]] is None) or f[a.parent[v]] == b.parent[f[v]]
               for v in a.parent)
    assert fo.forest_isomorphism(a, fo.LabeledForest.from_key("{(),(()())}")) is None
