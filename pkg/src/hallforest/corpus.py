"""Named example graphs and exhaustive enumeration of small connected graphs."""
from __future__ import annotations

from functools import lru_cache

from .feyngraphs import FeynmanGraph, canon_graph, graph_from_edges


def bubble() -> FeynmanGraph:
    """B2: two vertices joined by two edges, one leg each."""
    return graph_from_edges([("a", "b"), ("a", "b")], {"a": 1, "b": 1})


def triangle() -> FeynmanGraph:
    """T3: a triangle with one leg per corner."""
    return graph_from_edges([("a", "b"), ("b", "c"), ("c", "a")], {"a": 1, "b": 1, "c": 1})


def triangle_with_bubble() -> FeynmanGraph:
    """X: T3 with B2 inserted on one side."""
    return graph_from_edges([("v2", "v3"), ("v3", "v1"), ("v1", "v4"), ("v2", "v5"),
                             ("v4", "v5"), ("v4", "v5")], {"v1": 1, "v2": 1, "v3": 1})


def square_with_chord() -> FeynmanGraph:
    """Y: the square v1 v3 v2 v4 with chord v3–v4, legs at v1 and v2."""
    return graph_from_edges([("v1", "v3"), ("v3", "v2"), ("v2", "v4"), ("v4", "v1"),
                             ("v3", "v4")], {"v1": 1, "v2": 1})


def gamma_eg() -> FeynmanGraph:
    """The 6-vertex two-point example graph; half-edges are named ``vertex.edge``."""
    edges = {"e3": ("v6", "v1"), "e4": ("v6", "v2"), "e5": ("v5", "v1"), "e6": ("v5", "v2"),
             "e7": ("v5", "v3"), "e8": ("v6", "v4"), "e9": ("v3", "v4"), "e10": ("v3", "v4")}
    half = {"v1.e1": "v1", "v2.e2": "v2"}
    internal = []
    for e, (u, w) in edges.items():
        half[f"{u}.{e}"] = u
        half[f"{w}.{e}"] = w
        internal.append((f"{u}.{e}", f"{w}.{e}"))
    return FeynmanGraph([f"v{i}" for i in range(1, 7)], half, internal)


def gamma_eg_quotient() -> FeynmanGraph:
    """The displayed quotient of ``gamma_eg`` by {v3, v4}: e7 now joins v6 and v5."""
    edges = {"e3": ("v6", "v1"), "e4": ("v6", "v2"), "e5": ("v5", "v1"), "e6": ("v5", "v2"),
             "e7": ("v6", "v5")}
    half = {"v1.e1": "v1", "v2.e2": "v2"}
    internal = []
    for e, (u, w) in edges.items():
        half[f"{u}.{e}"] = u
        half[f"{w}.{e}"] = w
        internal.append((f"{u}.{e}", f"{w}.{e}"))
    return FeynmanGraph(["v1", "v2", "v5", "v6"], half, internal)


BUILTINS = {
    "B2": bubble,
    "T3": triangle,
    "X": triangle_with_bubble,
    "Y": square_with_chord,
    "Gamma_eg": gamma_eg,
}


def builtin_key(name: str) -> str:
    return canon_graph(BUILTINS[name]())


@lru_cache(maxsize=None)
def connected_graphs(loops: int, externals: int) -> tuple[str, ...]:
    """Keys of all connected 1PI φ³ graphs with the given loop and leg counts.

    In a bridgeless trivalent graph with legs every vertex carries at most one
    leg and there are no self-loops, so legs sit on vertices 0..externals-1
    and only simple or double edges between distinct vertices are tried.
    """
    n = 2 * (loops - 1) + externals
    if n < 2:
        return ()
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    last = {i: max(k for k, p in enumerate(pairs) if i in p) for i in range(n)}
    rem = [2 if i < externals else 3 for i in range(n)]
    legs = {f"u{i}": 1 for i in range(externals)}
    found = set()

    def fill(k, mult):
        if k == len(pairs):
            if _connected_bridgeless(n, mult):
                g = graph_from_edges([(f"u{i}", f"u{j}") for (i, j), m in mult.items()
                                      for _ in range(m)], legs)
                found.add(canon_graph(g))
            return
        i, j = pairs[k]
        for m in range(min(rem[i], rem[j], 2), -1, -1):
            rem[i] -= m
            rem[j] -= m
            if not ((last[i] == k and rem[i]) or (last[j] == k and rem[j])):
                if m:
                    mult[(i, j)] = m
                fill(k + 1, mult)
                mult.pop((i, j), None)
            rem[i] += m
            rem[j] += m

    fill(0, {})
    return tuple(sorted(found))


def _connected_bridgeless(n, mult) -> bool:
    nbrs = {i: set() for i in range(n)}
    for i, j in mult:
        nbrs[i].add(j)
        nbrs[j].add(i)

    def reach(skip=None):
        seen, stack = {0}, [0]
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if w not in seen and {u, w} != skip:
                    seen.add(w)
                    stack.append(w)
        return len(seen)

    return reach() == n and all(m > 1 or reach({i, j}) == n for (i, j), m in mult.items())


def graph_corpus(max_loops: int) -> list[str]:
    """Connected 1PI graphs with 1..max_loops loops, ordered by (loops, key)."""
    out = []
    for L in range(1, max_loops + 1):
        out += sorted(set(connected_graphs(L, 2)) | set(connected_graphs(L, 3)))
    return out
