"""φ³ Feynman graphs as half-edge structures.

A graph is a set of vertices, half-edges each attached to one vertex, and a
set of internal edges pairing half-edges.  Unpaired half-edges are external.
Objects of the graph category are disjoint unions of connected, trivalent,
one-particle-irreducible graphs with 2 or 3 external legs; ``[]`` is the
empty graph.

Canonical keys look like ``[n:legs:adj|...]``: one block per component with
the vertex count, the external-leg count per vertex, and the upper triangle
(diagonal included) of the edge-multiplicity matrix, minimized over vertex
orderings.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from . import cache

EMPTY = "[]"


class GraphError(ValueError):
    pass


class InvalidGraph(GraphError):
    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


class FeynmanGraph:
    """A half-edge labeled graph. Not validated on construction; see ``validate``."""

    def __init__(self, vertices: Iterable[str], half_edges: Mapping[str, str],
                 internal: Iterable[tuple[str, str]]):
        self.vertices: tuple[str, ...] = tuple(sorted(str(v) for v in vertices))
        self.half_edges: dict[str, str] = {str(h): str(v) for h, v in half_edges.items()}
        self.internal: tuple[tuple[str, str], ...] = tuple(
            sorted(tuple(sorted((str(a), str(b)))) for a, b in internal))
        self.partner: dict[str, str] = {}
        for a, b in self.internal:
            self.partner[a] = b
            self.partner[b] = a
        self.at: dict[str, list[str]] = {v: [] for v in self.vertices}
        for h, v in sorted(self.half_edges.items()):
            self.at.setdefault(v, []).append(h)

    @property
    def external(self) -> tuple[str, ...]:
        return tuple(sorted(h for h in self.half_edges if h not in self.partner))

    def __eq__(self, other):
        return (isinstance(other, FeynmanGraph) and self.vertices == other.vertices
                and self.half_edges == other.half_edges and self.internal == other.internal)

    def __hash__(self):
        return hash((self.vertices, self.internal, tuple(sorted(self.half_edges.items()))))

    def __repr__(self):
        return f"FeynmanGraph({len(self.vertices)} vertices, key={canon_graph(self)})"

    # -- serialization

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "half_edges": [{"id": h, "vertex": v} for h, v in sorted(self.half_edges.items())],
                "internal": [list(p) for p in self.internal]}

    @classmethod
    def from_json(cls, doc: Mapping | str) -> "FeynmanGraph":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            half = {}
            for entry in doc["half_edges"]:
                h = str(entry["id"])
                if h in half:
                    raise InvalidGraph([f"half-edge {h}: listed twice"])
                half[h] = str(entry["vertex"])
            return cls(doc["vertices"], half, [tuple(p) for p in doc.get("internal", [])])
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph document: {exc}") from None

    # -- structure

    def components(self) -> list[frozenset[str]]:
        seen: set[str] = set()
        out = []
        for v in self.vertices:
            if v in seen:
                continue
            comp, stack = set(), [v]
            while stack:
                u = stack.pop()
                if u in comp:
                    continue
                comp.add(u)
                for h in self.at[u]:
                    p = self.partner.get(h)
                    if p is not None:
                        stack.append(self.half_edges[p])
            seen |= comp
            out.append(frozenset(comp))
        return out

    def induced(self, vertices: Iterable[str]) -> "FeynmanGraph":
        vs = frozenset(vertices)
        half = {h: v for h, v in self.half_edges.items() if v in vs}
        return FeynmanGraph(vs, half, [(a, b) for a, b in self.internal if a in half and b in half])

    def loops(self) -> int:
        return len(self.internal) - len(self.vertices) + len(self.components())


def graph_from_edges(edges: Iterable[tuple[str, str]], legs: Mapping[str, int],
                     vertices: Iterable[str] = ()) -> FeynmanGraph:
    """Build a graph from vertex pairs (self-loops allowed) and external leg counts."""
    counter: Counter = Counter()
    half: dict[str, str] = {}
    internal = []

    def new(v):
        h = f"{v}.{counter[v]}"
        counter[v] += 1
        half[h] = v
        return h

    verts = set(vertices) | set(legs)
    for u, w in edges:
        verts |= {u, w}
        internal.append((new(u), new(w)))
    for v, n in sorted(legs.items()):
        for _ in range(n):
            new(v)
    return FeynmanGraph(verts, half, internal)


# ---------------------------------------------------------------------------
# validation


def _multigraph(g: FeynmanGraph, vertices: Iterable[str]):
    vs = sorted(vertices)
    idx = {v: i for i, v in enumerate(vs)}
    legs = [0] * len(vs)
    mult: Counter = Counter()
    for v in vs:
        for h in g.at[v]:
            p = g.partner.get(h)
            if p is None:
                legs[idx[v]] += 1
    for a, b in g.internal:
        va, vb = g.half_edges[a], g.half_edges[b]
        if va in idx and vb in idx:
            i, j = sorted((idx[va], idx[vb]))
            mult[(i, j)] += 1
    return vs, legs, mult


def _is_bridgeless(n: int, mult: Mapping[tuple[int, int], int]) -> bool:
    nbrs: dict[int, set[int]] = {i: set() for i in range(n)}
    for (i, j), m in mult.items():
        if i != j:
            nbrs[i].add(j)
            nbrs[j].add(i)

    def connected_without(skip):
        seen, stack = {0}, [0]
        while stack:
            u = stack.pop()
            for w in nbrs[u]:
                if {u, w} == skip or w in seen:
                    continue
                seen.add(w)
                stack.append(w)
        return len(seen) == n

    return all(m > 1 or connected_without({i, j}) for (i, j), m in mult.items() if i != j)


def violations(g: FeynmanGraph | Mapping) -> list[str]:
    """All rule violations of a graph, each naming the offending vertex or half-edge."""
    if not isinstance(g, FeynmanGraph):
        g = FeynmanGraph.from_json(g)
    out = []
    seen: set[str] = set()
    for a, b in g.internal:
        for h in (a, b):
            if h not in g.half_edges:
                out.append(f"half-edge {h}: unknown")
            if h in seen:
                out.append(f"half-edge {h}: in two internal pairs")
            seen.add(h)
        if a == b:
            out.append(f"half-edge {a}: paired with itself")
    for h, v in sorted(g.half_edges.items()):
        if v not in g.at or v not in g.vertices:
            out.append(f"half-edge {h}: attached to unknown vertex {v}")
    if out:
        return out
    for v in g.vertices:
        if len(g.at[v]) != 3:
            out.append(f"vertex {v}: {len(g.at[v])} half-edges, expected 3")
    if out:
        return out
    for comp in g.components():
        vs, legs, mult = _multigraph(g, comp)
        name = ",".join(vs)
        ext = sum(legs)
        loops = sum(mult.values()) - len(vs) + 1
        if ext not in (2, 3):
            out.append(f"component {{{name}}}: {ext} external edges, expected 2 or 3")
        if loops < 1:
            out.append(f"component {{{name}}}: loop-free component")
        elif not _is_bridgeless(len(vs), mult):
            out.append(f"component {{{name}}}: not one-particle irreducible")
    return out


def validate(raw: FeynmanGraph | Mapping | str) -> FeynmanGraph:
    """Return the graph if it satisfies every rule, else raise InvalidGraph."""
    g = raw if isinstance(raw, FeynmanGraph) else FeynmanGraph.from_json(raw)
    problems = violations(g)
    if problems:
        raise InvalidGraph(problems)
    return g


# ---------------------------------------------------------------------------
# canonical form


def _refine(colors: list[int], nbrs: list[list[tuple[int, int]]]) -> list[int]:
    while True:
        sigs = [(colors[v], tuple(sorted((colors[u], m) for u, m in nbrs[v])))
                for v in range(len(colors))]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(ranks) == len(set(colors)):
            return new
        colors = new


def _serialize(order, legs, mult, sep: str, zero) -> str:
    n = len(order)
    adj = []
    for i in range(n):
        for j in range(i, n):
            a, b = sorted((order[i], order[j]))
            adj.append(str(mult.get((a, b), zero)))
    return f"{n}:{sep.join(str(legs[v]) for v in order)}:{sep.join(adj)}"


def _canon_component(legs: list, mult: Mapping[tuple[int, int], object],
                     sep: str = "") -> tuple[str, list[int]]:
    """Minimal serialization of a connected multigraph and the vertex order achieving it.

    ``legs`` holds per-vertex labels and ``mult`` per-pair edge labels; with
    the default empty separator both must print as single characters.
    """
    n = len(legs)
    zero = 0 if not mult else type(next(iter(mult.values())))()
    if isinstance(zero, tuple):
        zero = (0, 0)
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    loops = [zero] * n
    for (i, j), m in mult.items():
        if i == j:
            loops[i] = m
        else:
            nbrs[i].append((j, m))
            nbrs[j].append((i, m))
    start = sorted(set(zip(legs, loops)))
    colors = [start.index((legs[v], loops[v])) for v in range(n)]
    best: list = [None, None]

    def search(cols):
        cols = _refine(cols, nbrs)
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(cols):
            cells.setdefault(c, []).append(v)
        if len(cells) == n:
            order = sorted(range(n), key=lambda v: cols[v])
            s = _serialize(order, legs, mult, sep, zero)
            if best[0] is None or s < best[0]:
                best[0], best[1] = s, order
            return
        target = min(c for c, vs in cells.items() if len(vs) > 1)
        for v in cells[target]:
            nxt = [2 * c + 1 for c in cols]
            nxt[v] = 2 * cols[v]
            search(nxt)

    search(colors)
    return best[0], best[1]


def _component_keys(g: FeynmanGraph):
    for comp in g.components():
        vs, legs, mult = _multigraph(g, comp)
        key, order = _canon_component(legs, mult)
        yield key, [vs[i] for i in order]


def canon_graph(g: FeynmanGraph) -> str:
    """Isomorphism-invariant key of an unlabeled graph."""
    return "[" + "|".join(sorted(k for k, _ in _component_keys(g))) + "]"


def graph_components(key: str) -> tuple[str, ...]:
    if not (key.startswith("[") and key.endswith("]")):
        raise GraphError(f"not a graph key: {key!r}")
    body = key[1:-1]
    return tuple(body.split("|")) if body else ()


def join_graph_keys(parts: Iterable[str]) -> str:
    comps = [c for p in parts for c in graph_components(p)]
    return "[" + "|".join(sorted(comps)) + "]"


def graph_from_key(key: str, prefix: str = "") -> FeynmanGraph:
    """A labeled representative of a key: vertices ``{prefix}{c}v{i}``."""
    edges, legs, verts = [], {}, []
    for c, block in enumerate(graph_components(key)):
        try:
            n_s, legs_s, adj = block.split(":")
            n = int(n_s)
        except ValueError:
            raise GraphError(f"malformed graph key block {block!r}") from None
        if len(legs_s) != n or len(adj) != n * (n + 1) // 2:
            raise GraphError(f"malformed graph key block {block!r}")
        names = [f"{prefix}{c}v{i}" for i in range(n)]
        verts += names
        k = 0
        for i in range(n):
            legs[names[i]] = int(legs_s[i])
            for j in range(i, n):
                edges += [(names[i], names[j])] * int(adj[k])
                k += 1
    return graph_from_edges(edges, legs, verts)


def parse_graph_key(key: str) -> str:
    """Validate and re-canonicalize a textual graph key."""
    return canon_graph(validate(graph_from_key(key)))


# ---------------------------------------------------------------------------
# subgraphs and contraction
#
# A subgraph is given by its pieces: disjoint vertex sets, each inducing a
# connected 1PI graph with 2 or 3 legs.  Edges running between two pieces are
# not part of the subgraph; their half-edges are external legs of both pieces.


def selection(g: FeynmanGraph, s: Iterable) -> frozenset[frozenset[str]]:
    """Normalize ``s`` to a frozenset of pieces.

    ``s`` is either a collection of vertex sets (one per piece) or a plain
    vertex set, which is split into the connected components it induces.
    """
    s = list(s)
    if all(isinstance(x, str) for x in s):
        return frozenset(g.induced(s).components())
    return frozenset(frozenset(c) for c in s)


def selection_vertices(sel: Iterable[Iterable[str]]) -> frozenset[str]:
    return frozenset(v for c in sel for v in c)


def sub_graph(g: FeynmanGraph, s: Iterable) -> FeynmanGraph:
    """The subgraph carried by a selection, with inter-piece edges cut."""
    owner = {v: i for i, c in enumerate(selection(g, s)) for v in c}
    half = {h: v for h, v in g.half_edges.items() if v in owner}
    pairs = [(a, b) for a, b in g.internal
             if a in half and b in half and owner[half[a]] == owner[half[b]]]
    return FeynmanGraph(owner, half, pairs)


def _piece_ok(g: FeynmanGraph, piece: frozenset[str]) -> bool:
    h = g.induced(piece)
    return len(h.components()) == 1 and not violations(h)


def is_subgraph(g: FeynmanGraph, s: Iterable) -> bool:
    seen: set[str] = set()
    verts = set(g.vertices)
    for piece in selection(g, s):
        if not piece or not piece <= verts or piece & seen or not _piece_ok(g, piece):
            return False
        seen |= piece
    return True


def _pieces(g: FeynmanGraph) -> list[tuple[int, frozenset[str]]]:
    verts = list(g.vertices)
    n = len(verts)
    index = {v: i for i, v in enumerate(verts)}
    adj = [0] * n
    for a, b in g.internal:
        i, j = index[g.half_edges[a]], index[g.half_edges[b]]
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    out = []
    for mask in range(1, 1 << n):
        # every vertex of a piece needs a neighbour inside it
        if any(mask >> i & 1 and not adj[i] & mask & ~(1 << i) for i in range(n)):
            continue
        vs = frozenset(verts[i] for i in range(n) if mask >> i & 1)
        if _piece_ok(g, vs):
            out.append((mask, vs))
    return out


def subgraphs(g: FeynmanGraph) -> list[frozenset[frozenset[str]]]:
    """Every selection of pairwise disjoint pieces, ∅ and the whole graph included."""
    pieces = _pieces(g)
    out = []

    def rec(start, used, acc):
        out.append(frozenset(acc))
        for k in range(start, len(pieces)):
            mask, vs = pieces[k]
            if not mask & used:
                acc.append(vs)
                rec(k + 1, used | mask, acc)
                acc.pop()

    rec(0, 0, [])
    return sorted(out, key=lambda s: (len(selection_vertices(s)), sorted(sorted(c) for c in s)))


def contract_with_origin(g: FeynmanGraph, s: Iterable):
    """Γ/γ with provenance.

    Returns ``(quotient, vertex_origin, edge_origin)``: each new vertex maps to
    the vertices it replaced, and each internal edge produced by fusing maps
    to the list of 2-leg pieces sitting on it.
    """
    sel = selection(g, s)
    if not is_subgraph(g, sel):
        raise GraphError(f"{sorted(sorted(c) for c in sel)} is not a subgraph")
    vertices = set(g.vertices)
    half = dict(g.half_edges)
    pairs = {tuple(p) for p in g.internal}
    origin: dict[str, frozenset[str]] = {}
    edge_origin: dict[tuple[str, str], list[frozenset[str]]] = {}
    whole = set(g.components())
    for comp in sorted(sel, key=sorted):
        comp_half = {h for h, v in half.items() if v in comp}
        inner = {p for p in pairs if p[0] in comp_half and p[1] in comp_half}
        absorbed = [c for p in inner for c in edge_origin.pop(p, [])]
        in_pairs = {h for p in inner for h in p}
        ext = sorted(comp_half - in_pairs)
        pairs -= inner
        vertices -= comp
        if comp in whole:
            for h in comp_half:
                del half[h]
            continue
        if len(ext) == 3:
            new_v = "<" + ",".join(sorted(comp)) + ">"
            vertices.add(new_v)
            origin[new_v] = comp.union(*absorbed)
            for h in comp_half:
                if h in ext:
                    half[h] = new_v
                else:
                    del half[h]
        else:
            ends, chain = [], [comp, *absorbed]
            for h in ext:
                p = next((p for p in pairs if h in p), None)
                if p is not None:
                    pairs.discard(p)
                    chain += edge_origin.pop(p, [])
                    ends.append(p[0] if p[1] == h else p[1])
            for h in comp_half:
                del half[h]
            if len(ends) == 2:
                new_p = tuple(sorted(ends))
                pairs.add(new_p)
                edge_origin[new_p] = chain
    return FeynmanGraph(vertices, half, pairs), origin, edge_origin


def contract(g: FeynmanGraph, s: Iterable) -> FeynmanGraph:
    """Γ/γ: 3-leg pieces become a vertex, 2-leg pieces fuse their neighbours.

    A piece that is a whole connected component of Γ is removed outright.
    """
    return contract_with_origin(g, s)[0]


def preimage(g: FeynmanGraph, s: Iterable, sel_bar: Iterable) -> frozenset[frozenset[str]]:
    """The selection of Γ containing γ that corresponds to a selection of Γ/γ."""
    quot, origin, edge_origin = contract_with_origin(g, s)
    sel_bar = selection(quot, sel_bar)
    if not is_subgraph(quot, sel_bar):
        raise GraphError("not a subgraph of the quotient")
    pieces, used = [], set()
    for piece in sel_bar:
        vs = set()
        for w in piece:
            vs |= origin.get(w, {w})
        for p, chain in edge_origin.items():
            if quot.half_edges[p[0]] in piece and quot.half_edges[p[1]] in piece:
                for c in chain:
                    vs |= c
        pieces.append(frozenset(vs))
        used |= vs
    pieces += [c for c in selection(g, s) if not c & used]
    return frozenset(pieces)


# ---------------------------------------------------------------------------
# insertion


def _relabel(g: FeynmanGraph, tag: str) -> FeynmanGraph:
    return FeynmanGraph([tag + v for v in g.vertices],
                        {tag + h: tag + v for h, v in g.half_edges.items()},
                        [(tag + a, tag + b) for a, b in g.internal])


def _fresh_tag(g2: FeynmanGraph) -> str:
    taken = set(g2.vertices) | set(g2.half_edges)
    for i in itertools.count():
        tag = f"i{i}:"
        if not any(x.startswith(tag) for x in taken):
            return tag


def _glue_vertex(g2: FeynmanGraph, v: str, f: Mapping[str, str], g1: FeynmanGraph) -> FeynmanGraph:
    finv = {w: k for k, w in f.items()}
    half = {h: u for h, u in g2.half_edges.items() if u != v}
    half.update(g1.half_edges)
    pairs = [p for p in g2.internal if g2.half_edges[p[0]] != v and g2.half_edges[p[1]] != v]
    pairs += list(g1.internal)
    done: set[str] = set()
    for w in g2.at[v]:
        p = g2.partner.get(w)
        if p is None or w in done:
            continue
        done |= {w, p}
        pairs.append((finv[w], finv[p] if g2.half_edges[p] == v else p))
    return FeynmanGraph([u for u in g2.vertices if u != v] + list(g1.vertices), half, pairs)


def _glue_edge(g2: FeynmanGraph, e: tuple[str, str], f: Mapping[str, str],
               g1: FeynmanGraph) -> FeynmanGraph:
    half = {**g2.half_edges, **g1.half_edges}
    pairs = [p for p in g2.internal if p != e] + list(g1.internal)
    pairs += list(f.items())
    return FeynmanGraph(list(g2.vertices) + list(g1.vertices), half, pairs)


def insert_at_vertex(g2: FeynmanGraph, v: str, f: Mapping[str, str],
                     g1: FeynmanGraph) -> FeynmanGraph:
    """Γ2 ∘_{v,f} Γ1: replace vertex v of Γ2 by Γ1, gluing Ex(Γ1) onto H(v) along f."""
    ex = g1.external
    if len(ex) != 3 or sorted(f) != list(ex) or sorted(f.values()) != sorted(g2.at.get(v, [])):
        raise GraphError("insertion at a vertex needs a bijection from 3 external legs to H(v)")
    tag = _fresh_tag(g2)
    return _glue_vertex(g2, v, {tag + k: w for k, w in f.items()}, _relabel(g1, tag))


def insert_on_edge(g2: FeynmanGraph, e: tuple[str, str], f: Mapping[str, str],
                   g1: FeynmanGraph) -> FeynmanGraph:
    """Γ2 ∘_{e,f} Γ1: cut internal edge e and splice the two legs of Γ1 in along f."""
    e = tuple(sorted(e))
    ex = g1.external
    if e not in g2.internal:
        raise GraphError(f"{e} is not an internal edge")
    if len(ex) != 2 or sorted(f) != list(ex) or sorted(f.values()) != list(e):
        raise GraphError("insertion on an edge needs a bijection from 2 external legs to the edge")
    tag = _fresh_tag(g2)
    return _glue_edge(g2, e, {tag + k: w for k, w in f.items()}, _relabel(g1, tag))


def insertion_data(g1: FeynmanGraph, g2: FeynmanGraph):
    """Yield every insertion result Γ2 ∘ Γ1 for a connected Γ1."""
    ex = g1.external
    if len(ex) == 3:
        for v in g2.vertices:
            for image in itertools.permutations(g2.at[v]):
                yield insert_at_vertex(g2, v, dict(zip(ex, image)), g1)
    elif len(ex) == 2:
        for e in g2.internal:
            for image in itertools.permutations(e):
                yield insert_on_edge(g2, e, dict(zip(ex, image)), g1)
    else:
        raise GraphError("inserted graph must have 2 or 3 external legs")


@lru_cache(maxsize=None)
def prelie_graph(k1: str, k2: str) -> Counter:
    """k1 ⋆ k2 over all insertion data, keyed by graph key."""
    if len(graph_components(k1)) != 1:
        raise GraphError("left argument of ⋆ must be connected")
    g1, g2 = graph_from_key(k1, "a"), graph_from_key(k2, "b")
    return Counter(canon_graph(g) for g in insertion_data(g1, g2))


# ---------------------------------------------------------------------------
# Hall structure constants


@lru_cache(maxsize=None)
def graph_splits(key: str) -> Counter:
    """Counter ``{(sub key, quotient key): number of subgraphs}`` over all subgraphs."""
    store = cache.table("graph_splits")
    if key in store:
        return Counter({(s, q): m for s, q, m in store[key]})
    comps = graph_components(key)
    out: Counter = Counter()
    if len(comps) > 1:
        # pieces are connected, so selections factor over the components
        out[("[]", "[]")] = 1
        for c in comps:
            nxt: Counter = Counter()
            for (s1, q1), m1 in out.items():
                for (s2, q2), m2 in graph_splits(f"[{c}]").items():
                    nxt[(join_graph_keys((s1, s2)), join_graph_keys((q1, q2)))] += m1 * m2
            out = nxt
    else:
        g = graph_from_key(key)
        for s in subgraphs(g):
            out[(canon_graph(sub_graph(g, s)), canon_graph(contract(g, s)))] += 1
    store[key] = [[s, q, m] for (s, q), m in sorted(out.items())]
    cache.mark("graph_splits")
    return out


def graph_subobject_count(a: str, b: str, m: str) -> int:
    return graph_splits(m).get((a, b), 0)


def _state_signature(g: FeynmanGraph, slots: frozenset, blocked: frozenset) -> str:
    parts = []
    for comp in g.components():
        vs, legs, _ = _multigraph(g, comp)
        idx = {v: i for i, v in enumerate(vs)}
        labels = [(legs[i], vs[i] in slots) for i in range(len(vs))]
        mult: Counter = Counter()
        for p in g.internal:
            if g.half_edges[p[0]] not in idx:
                continue
            i, j = sorted((idx[g.half_edges[p[0]]], idx[g.half_edges[p[1]]]))
            old = mult.get((i, j), (0, 0))
            mult[(i, j)] = (old[0] + (p not in blocked), old[1] + (p in blocked))
        parts.append(_canon_component(labels, dict(mult), sep=",")[0])
    return "|".join(sorted(parts))


def extension_candidates(a: str, b: str) -> set[str]:
    """Graphs M that may contain a subgraph ≅ a with quotient ≅ b.

    Each component of ``a`` is inserted at an original vertex of ``b``, into
    an edge outside the earlier insertions (series insertions included), or
    kept as a separate component.  The result is a superset of the support.
    """
    base = graph_from_key(b, "b")
    frontier = [(base, frozenset(base.vertices), frozenset())]
    for i, comp in enumerate(graph_components(a)):
        nxt, seen = [], set()
        for g, slots, blocked in frontier:
            piece = _relabel(graph_from_key(f"[{comp}]"), _fresh_tag(g))
            own = frozenset(piece.internal)
            options = [(FeynmanGraph(list(g.vertices) + list(piece.vertices),
                                     {**g.half_edges, **piece.half_edges},
                                     list(g.internal) + list(piece.internal)), slots)]
            ex = piece.external
            if len(ex) == 3:
                for v in sorted(slots):
                    for image in itertools.permutations(g.at[v]):
                        options.append((_glue_vertex(g, v, dict(zip(ex, image)), piece),
                                        slots - {v}))
            else:
                for e in g.internal:
                    if e in blocked:
                        continue
                    for image in itertools.permutations(e):
                        options.append((_glue_edge(g, e, dict(zip(ex, image)), piece), slots))
            for h, sl in options:
                bl = frozenset(p for p in h.internal if p in blocked or p in own)
                sig = _state_signature(h, sl, bl)
                if sig not in seen:
                    seen.add(sig)
                    nxt.append((h, sl, bl))
        frontier = nxt
    return {canon_graph(g) for g, _, _ in frontier}


# ---------------------------------------------------------------------------
# primitives and K0


def graph_length(key: str) -> int:
    return sum(k0_graph(key).values())


def is_primitive(key: str) -> bool:
    comps = graph_components(key)
    if len(comps) != 1:
        return False
    return len(subgraphs(graph_from_key(key))) == 2


@lru_cache(maxsize=None)
def k0_graph(key: str) -> Counter:
    """K0 class as a Counter of primitive component keys.

    Repeatedly contracts a proper subgraph with fewest vertices (ties broken by
    key, then vertex names); such a subgraph is always primitive.
    """
    comps = graph_components(key)
    if len(comps) != 1:
        out: Counter = Counter()
        for c in comps:
            out += k0_graph(f"[{c}]")
        return out
    g = graph_from_key(key)
    proper = [next(iter(s)) for s in subgraphs(g)
              if len(s) == 1 and len(next(iter(s))) < len(g.vertices)]
    if not proper:
        return Counter({key: 1})
    p = min(proper, key=lambda p: (len(p), canon_graph(g.induced(p)), sorted(p)))
    return Counter({canon_graph(g.induced(p)): 1}) + k0_graph(canon_graph(contract(g, [p])))


@lru_cache(maxsize=None)
def k0_all_series(key: str) -> frozenset:
    """Every multiset of primitive constituents reachable by any contraction series."""
    comps = graph_components(key)
    if not comps:
        return frozenset([()])
    g = graph_from_key(key)
    out = set()
    if is_primitive(key):
        return frozenset([((key, 1),)])
    for s in subgraphs(g):
        if len(s) != 1:
            continue
        sub = canon_graph(sub_graph(g, s))
        if not is_primitive(sub):
            continue
        if len(selection_vertices(s)) == len(g.vertices) and len(comps) == 1:
            continue
        for rest in k0_all_series(canon_graph(contract(g, s))):
            c = Counter(dict(rest))
            c[sub] += 1
            out.add(tuple(sorted(c.items())))
    return frozenset(out)


# ---------------------------------------------------------------------------
# isomorphisms and morphisms


def find_isomorphism(g: FeynmanGraph, h: FeynmanGraph):
    """A (vertex map, half-edge map) pair realizing g ≅ h, or None."""
    if canon_graph(g) != canon_graph(h):
        return None
    gk = sorted(_component_keys(g))
    hk = sorted(_component_keys(h))
    vmap = {}
    for (k1, o1), (k2, o2) in zip(gk, hk):
        vmap.update(zip(o1, o2))
    hmap: dict[str, str] = {}
    used: set[str] = set()
    for a, b in g.internal:
        va, vb = vmap[g.half_edges[a]], vmap[g.half_edges[b]]
        for c, d in h.internal:
            for x, y in ((c, d), (d, c)):
                if x in used or y in used:
                    continue
                if h.half_edges[x] == va and h.half_edges[y] == vb:
                    hmap[a], hmap[b] = x, y
                    used |= {x, y}
                    break
            else:
                continue
            break
    for a in g.external:
        target = vmap[g.half_edges[a]]
        x = next(x for x in h.external if x not in used and h.half_edges[x] == target)
        hmap[a] = x
        used.add(x)
    return vmap, hmap


def _check_iso(g: FeynmanGraph, h: FeynmanGraph, vmap, hmap) -> bool:
    if sorted(vmap) != list(g.vertices) or sorted(vmap.values()) != list(h.vertices):
        return False
    if sorted(hmap) != sorted(g.half_edges) or sorted(hmap.values()) != sorted(h.half_edges):
        return False
    if any(h.half_edges[hmap[x]] != vmap[v] for x, v in g.half_edges.items()):
        return False
    return sorted(tuple(sorted((hmap[a], hmap[b]))) for a, b in g.internal) == list(h.internal)




@dataclass(frozen=True, eq=False)
class GraphMorphism:
    """(γ1, γ2, f) with f: source/γ1 ≅ γ2 ⊂ target, given on vertices and half-edges."""

    source: FeynmanGraph
    target: FeynmanGraph
    gamma1: frozenset
    gamma2: frozenset
    vmap: Mapping[str, str] = field(default_factory=dict)
    hmap: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "gamma1", selection(self.source, self.gamma1))
        object.__setattr__(self, "gamma2", selection(self.target, self.gamma2))
        for g, s in ((self.source, self.gamma1), (self.target, self.gamma2)):
            if not is_subgraph(g, s):
                raise GraphError(f"{sorted(sorted(c) for c in s)} is not a subgraph")
        quot = contract(self.source, self.gamma1)
        if not _check_iso(quot, sub_graph(self.target, self.gamma2), self.vmap, self.hmap):
            raise GraphError("map is not an isomorphism source/γ1 ≅ γ2")

    def __eq__(self, other):
        return (isinstance(other, GraphMorphism) and self.source == other.source
                and self.target == other.target and self.gamma1 == other.gamma1
                and self.gamma2 == other.gamma2 and dict(self.vmap) == dict(other.vmap)
                and dict(self.hmap) == dict(other.hmap))


def _full(g: FeynmanGraph) -> frozenset[frozenset[str]]:
    return frozenset(g.components())


def graph_identity(g: FeynmanGraph) -> GraphMorphism:
    return GraphMorphism(g, g, frozenset(), _full(g),
                         {v: v for v in g.vertices}, {h: h for h in g.half_edges})


def morphism_between(source: FeynmanGraph, target: FeynmanGraph, gamma1, gamma2) -> GraphMorphism:
    """Some morphism with the given subgraphs; the isomorphism is found by search."""
    quot = contract(source, gamma1)
    iso = find_isomorphism(quot, sub_graph(target, gamma2))
    if iso is None:
        raise GraphError("source/γ1 is not isomorphic to γ2")
    return GraphMorphism(source, target, gamma1, gamma2, *iso)


def graph_kernel(m: GraphMorphism) -> GraphMorphism:
    """(∅, γ1, id): γ1 → Γ1."""
    sub = sub_graph(m.source, m.gamma1)
    return GraphMorphism(sub, m.source, frozenset(), m.gamma1,
                         {v: v for v in sub.vertices}, {h: h for h in sub.half_edges})


def graph_cokernel(m: GraphMorphism) -> GraphMorphism:
    """(γ2, Γ2/γ2, id): Γ2 → Γ2/γ2."""
    quot = contract(m.target, m.gamma2)
    return GraphMorphism(m.target, quot, m.gamma2, _full(quot),
                         {v: v for v in quot.vertices}, {h: h for h in quot.half_edges})


def compose_graph_morphisms(m1: GraphMorphism, m2: GraphMorphism) -> GraphMorphism:
    """m2 ∘ m1 = (ξ, ρ, g∘f).

    ξ ⊇ γ1 is the subgraph of Γ1 matching τ2 ∩ γ2 through f; ρ ⊂ τ3 is the
    image under g of γ2/(τ2 ∩ γ2).  Raises GraphError when τ2 meets γ2 in
    something that is not a subgraph, or a piece of τ2 straddles γ2.
    """
    if m1.target != m2.source:
        raise GraphError("morphisms are not composable: middle graphs differ")
    g2 = m1.target
    sigma = []
    for c in m1.gamma2:
        for d in m2.gamma1:
            if c & d:
                sigma += g2.induced(c & d).components()
    if not is_subgraph(g2, sigma):
        raise GraphError("τ2 ∩ γ2 is not a subgraph; composite undefined")
    finv = {w: u for u, w in m1.vmap.items()}
    xi = preimage(m1.source, m1.gamma1, [frozenset(finv[w] for w in p) for p in sigma])
    _, origin2, _ = contract_with_origin(g2, m2.gamma1)
    names = {frozenset(k[1:-1].split(",")): k for k in origin2}
    tau_verts = selection_vertices(m2.gamma1)
    rho = []
    for c in m1.gamma2:
        if any(c <= d for d in m2.gamma1):
            continue
        piece = set(c - tau_verts)
        for d in m2.gamma1:
            if d <= c:
                if d in names:
                    piece.add(names[d])
            elif d & c:
                raise GraphError("a piece of τ2 straddles γ2; composite undefined")
        if piece:
            rho.append(frozenset(m2.vmap[u] for u in piece))
    return morphism_between(m1.source, m2.target, xi, frozenset(rho))
