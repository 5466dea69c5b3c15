"""Rooted trees and forests: canonical keys, admissible cuts, the pre-Lie
product and the morphism calculus of labeled rooted forests.

Unlabeled trees are handled as canonical parenthesis strings: a vertex is
``"(" + children + ")"`` with children sorted by ``(vertex count, string)``.
Forests are written ``{t1,t2,...}`` with the same ordering; ``{}`` is the
empty forest.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

EMPTY = "{}"


class ForestError(ValueError):
    """Malformed forest input or an operation on incompatible forests."""


# ---------------------------------------------------------------------------
# canonical encodings


def tree_size(enc: str) -> int:
    return enc.count("(")


def order_key(enc: str) -> tuple[int, str]:
    return (enc.count("("), enc)


def join_tree(children: Iterable[str]) -> str:
    return "(" + "".join(sorted(children, key=order_key)) + ")"


def forest_key(trees: Iterable[str]) -> str:
    return "{" + ",".join(sorted(trees, key=order_key)) + "}"


def forest_trees(key: str) -> tuple[str, ...]:
    """Split a canonical forest key into its tree encodings."""
    if not (key.startswith("{") and key.endswith("}")):
        raise ForestError(f"not a forest key: {key!r}")
    body = key[1:-1]
    return tuple(body.split(",")) if body else ()


def forest_size(key: str) -> int:
    return key.count("(")


def _split_children(enc: str) -> list[str]:
    out, depth, start = [], 0, 1
    for i in range(1, len(enc) - 1):
        depth += 1 if enc[i] == "(" else -1
        if depth == 0:
            out.append(enc[start:i + 1])
            start = i + 1
    return out


@lru_cache(maxsize=None)
def tree_children(enc: str) -> tuple[str, ...]:
    return tuple(_split_children(enc))


def parse_tree(text: str, offset: int = 0) -> str:
    """Parse a parenthesis tree (any child order) and return its canonical encoding.

    Raises ForestError with a 1-based column on malformed input.
    """
    stack: list[list[str]] = []
    result = None
    for i, ch in enumerate(text):
        col = offset + i + 1
        if ch.isspace():
            continue
        if result is not None:
            raise ForestError(f"unexpected {ch!r} after complete tree at column {col}")
        if ch == "(":
            stack.append([])
        elif ch == ")":
            if not stack:
                raise ForestError(f"unbalanced ')' at column {col}")
            node = join_tree(stack.pop())
            if stack:
                stack[-1].append(node)
            else:
                result = node
        else:
            raise ForestError(f"unexpected {ch!r} at column {col}")
    if result is None and not stack:
        raise ForestError(f"expected a tree at column {offset + 1}")
    if stack:
        # report where the input stopped
        raise ForestError(f"unbalanced '(' at column {offset + max(len(text.rstrip()), 1)}")
    return result


def parse_forest(text: str, offset: int = 0) -> str:
    """Parse ``{t,...}`` (or a bare tree) into a canonical forest key."""
    s = text.strip()
    lead = offset + len(text) - len(text.lstrip())
    if s.startswith("("):
        return forest_key([parse_tree(s, lead)])
    if not s.startswith("{"):
        raise ForestError(f"expected '{{' at column {lead + 1}")
    if not s.endswith("}"):
        raise ForestError(f"missing '}}' at column {lead + len(s) + 1}")
    body = s[1:-1]
    if not body.strip():
        return EMPTY
    trees, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            trees.append(parse_tree(body[start:i], lead + 1 + start))
            start = i + 1
    trees.append(parse_tree(body[start:], lead + 1 + start))
    return forest_key(trees)


# ---------------------------------------------------------------------------
# unlabeled value types


@dataclass(frozen=True, order=False)
class RootedTree:
    """An unlabeled rooted tree; children are kept in canonical order."""

    children: tuple["RootedTree", ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.children, key=lambda c: order_key(c.encode())))
        object.__setattr__(self, "children", ordered)

    def encode(self) -> str:
        return "(" + "".join(c.encode() for c in self.children) + ")"

    @classmethod
    def decode(cls, enc: str) -> "RootedTree":
        return cls(tuple(cls.decode(c) for c in tree_children(parse_tree(enc))))

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    def __str__(self) -> str:
        return self.encode()


@dataclass(frozen=True)
class Forest:
    trees: tuple[RootedTree, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.trees, key=lambda t: order_key(t.encode())))
        object.__setattr__(self, "trees", ordered)

    @property
    def key(self) -> str:
        return forest_key(t.encode() for t in self.trees)

    @property
    def size(self) -> int:
        return sum(t.size for t in self.trees)

    @classmethod
    def from_key(cls, key: str) -> "Forest":
        return cls(tuple(RootedTree.decode(t) for t in forest_trees(parse_forest(key))))

    def __str__(self) -> str:
        return self.key


def canon_forest(raw) -> str:
    """Canonical key of a forest given as text, a parent map, or nested lists.

    Nested lists: a tree is a list of child trees, a forest a list of trees.
    A parent map ``{vertex: parent_or_None}`` is checked for cycles.
    """
    if isinstance(raw, str):
        return parse_forest(raw)
    if isinstance(raw, Mapping):
        return LabeledForest(raw).key
    if isinstance(raw, (RootedTree, Forest)):
        return raw.key if isinstance(raw, Forest) else forest_key([raw.encode()])

    def enc(node) -> str:
        return join_tree(enc(c) for c in node)

    return forest_key(enc(t) for t in raw)


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def _trees_of_size(n: int) -> tuple[str, ...]:
    if n <= 0:
        return ()
    if n == 1:
        return ("()",)
    return tuple(sorted({join_tree(f) for f in _forests_of_size(n - 1)}))


@lru_cache(maxsize=None)
def _forests_of_size(n: int) -> tuple[tuple[str, ...], ...]:
    # multisets of trees with total size n, trees in nondecreasing order_key
    out: list[tuple[str, ...]] = []

    def rec(remaining: int, floor: tuple[int, str], acc: list[str]):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for k in range(floor[0], remaining + 1):
            for t in _trees_of_size(k):
                if order_key(t) < floor:
                    continue
                acc.append(t)
                rec(remaining - k, order_key(t), acc)
                acc.pop()

    rec(n, (1, ""), [])
    return tuple(out)


def enumerate_trees(n: int) -> list[str]:
    """All rooted trees with exactly ``n`` vertices, as sorted canonical encodings."""
    return list(_trees_of_size(n))


def enumerate_forests(n: int) -> list[str]:
    """All forest keys with exactly ``n`` vertices (``n = 0`` gives ``['{}']``)."""
    if n == 0:
        return [EMPTY]
    return sorted(forest_key(f) for f in _forests_of_size(n))


# ---------------------------------------------------------------------------
# cuts on unlabeled forests: the split table


@lru_cache(maxsize=None)
def _tree_splits(enc: str) -> Counter:
    """Counter over (P trees tuple, R tree or None) of all admissible cuts of a tree."""
    out: Counter = Counter()
    out[((enc,), None)] += 1  # full cut
    options = []
    for child in tree_children(enc):
        opts: Counter = Counter()
        for (p, r), m in _tree_splits(child).items():
            opts[(p, r)] += m  # r is None: the edge above ``child`` is cut
        options.append(opts)
    for combo in itertools.product(*(list(o.items()) for o in options)):
        mult = 1
        ps: list[str] = []
        rs: list[str] = []
        for (p, r), m in combo:
            mult *= m
            ps.extend(p)
            if r is not None:
                rs.append(r)
        out[(tuple(sorted(ps, key=order_key)), join_tree(rs))] += mult
    return out


@lru_cache(maxsize=None)
def forest_splits(key: str) -> Counter:
    """Counter ``{(P key, R key): number of admissible cuts}`` for a forest key."""
    acc: Counter = Counter({((), ()): 1})
    for t in forest_trees(key):
        nxt: Counter = Counter()
        for (p0, r0), m0 in acc.items():
            for (p, r), m in _tree_splits(t).items():
                nxt[(p0 + p, r0 + ((r,) if r is not None else ()))] += m0 * m
        acc = nxt
    out: Counter = Counter()
    for (p, r), m in acc.items():
        out[(forest_key(p), forest_key(r))] += m
    return out


def subobject_count(a: str, b: str, m: str) -> int:
    """Number of admissible cuts of ``m`` with P ≅ a and R ≅ b."""
    return forest_splits(parse_forest(m)).get((parse_forest(a), parse_forest(b)), 0)


def k0_forest(key: str) -> int:
    return forest_size(key)


def graft_candidates(a: str, b: str) -> set[str]:
    """Forests that could have a cut with branches ``a`` and root part ``b``.

    Each tree of ``a`` is hung below a vertex of ``b`` or kept as its own
    component; the result is a superset of the true support.
    """
    a_trees = forest_trees(parse_forest(a))
    b = parse_forest(b)
    base = LabeledForest.from_key(b, prefix="b")
    slots = [None] + sorted(base.parent)
    out = set()
    for choice in itertools.product(slots, repeat=len(a_trees)):
        parent = dict(base.parent)
        for i, (tree, slot) in enumerate(zip(a_trees, choice)):
            sub = LabeledForest.from_key(forest_key([tree]), prefix=f"a{i}.")
            for v, p in sub.parent.items():
                parent[v] = slot if p is None else p
        out.add(LabeledForest(parent).key)
    return out


def prelie_tree(t1: str, t2: str) -> Counter:
    """Pre-Lie product of two trees: Σ_T a(t1,t2;T)·T with single-edge cut counts.

    Arguments and result keys are tree encodings.
    """
    t1, t2 = parse_tree(t1), parse_tree(t2)
    out: Counter = Counter()
    for cand in graft_candidates(forest_key([t1]), forest_key([t2])):
        trees = forest_trees(cand)
        if len(trees) != 1:
            continue
        count = LabeledForest.from_key(cand).count_edge_cuts(t1, t2)
        if count:
            out[trees[0]] = count
    return out


# ---------------------------------------------------------------------------
# labeled forests


class LabeledForest:
    """A forest whose vertices carry distinct string labels.

    Stored as a parent map; roots map to ``None``.
    """

    def __init__(self, parent: Mapping[str, str | None]):
        self.parent: dict[str, str | None] = {str(k): (None if v is None else str(v))
                                              for k, v in parent.items()}
        self.children: dict[str, list[str]] = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if p is not None:
                if p not in self.parent:
                    raise ForestError(f"vertex {v!r} has unknown parent {p!r}")
                self.children[p].append(v)
        self.roots = sorted(v for v, p in self.parent.items() if p is None)
        self.root_of: dict[str, str] = {}
        self.depth: dict[str, int] = {}
        for r in self.roots:
            stack = [(r, 0)]
            while stack:
                v, d = stack.pop()
                self.root_of[v], self.depth[v] = r, d
                stack.extend((c, d + 1) for c in self.children[v])
        if len(self.root_of) != len(self.parent):
            bad = sorted(set(self.parent) - set(self.root_of))
            raise ForestError(f"cycle through vertices {bad}")

    @classmethod
    def from_key(cls, key: str, prefix: str = "v") -> "LabeledForest":
        parent: dict[str, str | None] = {}
        counter = itertools.count()

        def build(enc: str, p):
            v = f"{prefix}{next(counter)}"
            parent[v] = p
            for c in tree_children(enc):
                build(c, v)

        for t in forest_trees(parse_forest(key)):
            build(t, None)
        return cls(parent)

    @classmethod
    def from_nested(cls, *trees) -> "LabeledForest":
        """Build from nested ``(label, [children...])`` tuples."""
        parent: dict[str, str | None] = {}

        def walk(node, p):
            label, kids = node
            if str(label) in parent:
                raise ForestError(f"repeated vertex label {label!r}")
            parent[str(label)] = p
            for k in kids:
                walk(k, str(label))

        for t in trees:
            walk(t, None)
        return cls(parent)

    def __eq__(self, other):
        return isinstance(other, LabeledForest) and self.parent == other.parent

    def __hash__(self):
        return hash(frozenset(self.parent.items()))

    def __repr__(self):
        return f"LabeledForest({self.key}, {len(self.parent)} labels)"

    @property
    def vertices(self) -> frozenset[str]:
        return frozenset(self.parent)

    def is_ancestor(self, a: str, b: str) -> bool:
        """True if ``a`` lies on the path from ``b`` to its root (inclusive)."""
        while b is not None:
            if b == a:
                return True
            b = self.parent[b]
        return False

    def subtree(self, v: str) -> set[str]:
        out, stack = set(), [v]
        while stack:
            u = stack.pop()
            out.add(u)
            stack.extend(self.children[u])
        return out

    def _encode_at(self, v: str, within: frozenset[str]) -> str:
        return join_tree(self._encode_at(c, within) for c in self.children[v] if c in within)

    def key_of(self, vertices: Iterable[str]) -> str:
        """Canonical key of the sub-forest induced on a vertex set."""
        within = frozenset(vertices)
        tops = [v for v in within if self.parent[v] not in within]
        return forest_key(self._encode_at(v, within) for v in tops)

    @property
    def key(self) -> str:
        return self.key_of(self.parent)

    def induced(self, vertices: Iterable[str]) -> "LabeledForest":
        within = frozenset(vertices)
        return LabeledForest({v: (p if p in within else None)
                              for v, p in self.parent.items() if v in within})

    def count_edge_cuts(self, p_tree: str, r_tree: str) -> int:
        """Edges e with P_{C_e} ≅ p_tree and R_{C_e} ≅ r_tree (single-tree forests)."""
        n = 0
        for v, p in self.parent.items():
            if p is None:
                continue
            below = self.subtree(v)
            if (self.key_of(below) == forest_key([p_tree])
                    and self.key_of(self.vertices - below) == forest_key([r_tree])):
                n += 1
        return n


# ---------------------------------------------------------------------------
# cuts


@dataclass(frozen=True)
class Cut:
    """An admissible cut on a labeled forest.

    ``edges`` names each severed edge by its child-end vertex; ``full`` holds
    the roots of components that are cut away entirely.
    """

    edges: frozenset[str] = frozenset()
    full: frozenset[str] = frozenset()

    @property
    def points(self) -> frozenset[str]:
        """Tops of the severed branches (an antichain of vertices)."""
        return self.edges | self.full

    @classmethod
    def from_points(cls, forest: LabeledForest, points: Iterable[str]) -> "Cut":
        pts = frozenset(points)
        return cls(frozenset(v for v in pts if forest.parent[v] is not None),
                   frozenset(v for v in pts if forest.parent[v] is None))

    @classmethod
    def from_root_part(cls, forest: LabeledForest, root_part: Iterable[str]) -> "Cut":
        keep = frozenset(root_part)
        return cls.from_points(forest, (v for v, p in forest.parent.items()
                                        if v not in keep and (p is None or p in keep)))

    def check(self, forest: LabeledForest) -> None:
        for v in self.edges:
            if v not in forest.parent or forest.parent[v] is None:
                raise ForestError(f"{v!r} is not the child end of an edge")
        for v in self.full:
            if forest.parent.get(v, "") is not None:
                raise ForestError(f"{v!r} is not a root")
        pts = self.points
        for v in pts:
            u = forest.parent[v]
            while u is not None:
                if u in pts:
                    raise ForestError(f"cut meets the path from {v!r} twice (at {u!r})")
                u = forest.parent[u]

    def branch_part(self, forest: LabeledForest) -> frozenset[str]:
        out: set[str] = set()
        for v in self.points:
            out |= forest.subtree(v)
        return frozenset(out)

    def root_part(self, forest: LabeledForest) -> frozenset[str]:
        return forest.vertices - self.branch_part(forest)


def empty_cut() -> Cut:
    return Cut()


def full_cut(forest: LabeledForest) -> Cut:
    return Cut(frozenset(), frozenset(forest.roots))


def admissible_cuts(forest: LabeledForest) -> list[Cut]:
    """Every admissible cut once, per-component empty and full cuts included."""

    def at(v: str) -> list[frozenset[str]]:
        # antichains in the subtree of v, with {v} meaning "sever above v"
        combos = [frozenset()]
        for c in forest.children[v]:
            combos = [a | b for a in combos for b in at(c)]
        return [frozenset([v])] + combos

    out = [frozenset()]
    for r in forest.roots:
        out = [a | b for a in out for b in at(r)]
    cuts = [Cut.from_points(forest, pts) for pts in out]
    return sorted(cuts, key=lambda c: (len(c.points), sorted(c.points)))


def apply_cut(forest: LabeledForest, cut: Cut) -> tuple[str, str]:
    """(P, R) canonical keys for an admissible cut."""
    cut.check(forest)
    branch = cut.branch_part(forest)
    return forest.key_of(branch), forest.key_of(forest.vertices - branch)


def _same_forest(forest: LabeledForest, *cuts: Cut) -> None:
    for c in cuts:
        if not c.points <= forest.vertices:
            raise ForestError("cut does not belong to this forest")
        c.check(forest)


def cut_max(forest: LabeledForest, c: Cut, d: Cut) -> Cut:
    """On every path keep the cut edge closer to the root."""
    _same_forest(forest, c, d)
    return Cut.from_root_part(forest, c.root_part(forest) & d.root_part(forest))


def cut_min(forest: LabeledForest, c: Cut, d: Cut) -> Cut:
    """On every path keep the cut edge farther from the root."""
    _same_forest(forest, c, d)
    return Cut.from_root_part(forest, c.root_part(forest) | d.root_part(forest))


# ---------------------------------------------------------------------------
# morphisms


def _is_structure_iso(src: LabeledForest, dst: LabeledForest, f: Mapping[str, str]) -> bool:
    if set(f) != set(src.parent) or set(f.values()) != set(dst.parent) \
            or len(set(f.values())) != len(f):
        return False
    return all(dst.parent[f[v]] == (None if p is None else f[p]) for v, p in src.parent.items())


def forest_isomorphism(src: LabeledForest, dst: LabeledForest) -> dict[str, str] | None:
    """A root- and parent-preserving vertex bijection src → dst, or None."""
    if src.key != dst.key:
        return None
    enc_s = {v: src.key_of(src.subtree(v)) for v in src.parent}
    enc_d = {v: dst.key_of(dst.subtree(v)) for v in dst.parent}
    out: dict[str, str] = {}

    def match(xs, ys):
        xs = sorted(xs, key=lambda v: (order_key(enc_s[v][1:-1]), v))
        ys = sorted(ys, key=lambda v: (order_key(enc_d[v][1:-1]), v))
        for x, y in zip(xs, ys):
            out[x] = y
            match(src.children[x], dst.children[y])

    match(src.roots, dst.roots)
    return out


@dataclass(frozen=True)
class ForestMorphism:
    """A morphism (C1, C2, f) with f: R_{C1}(source) ≅ P_{C2}(target)."""

    source: LabeledForest
    target: LabeledForest
    c1: Cut
    c2: Cut
    bijection: Mapping[str, str] = field(hash=False)

    def __post_init__(self):
        self.c1.check(self.source)
        self.c2.check(self.target)
        object.__setattr__(self, "bijection", dict(self.bijection))
        dom = self.source.induced(self.c1.root_part(self.source))
        cod = self.target.induced(self.c2.branch_part(self.target))
        if not _is_structure_iso(dom, cod, self.bijection):
            raise ForestError("bijection does not identify R_C1(source) with P_C2(target)")

    def __eq__(self, other):
        return (isinstance(other, ForestMorphism) and self.source == other.source
                and self.target == other.target and self.c1 == other.c1
                and self.c2 == other.c2 and self.bijection == other.bijection)

    __hash__ = None  # type: ignore[assignment]


def identity(forest: LabeledForest) -> ForestMorphism:
    return ForestMorphism(forest, forest, empty_cut(), full_cut(forest),
                          {v: v for v in forest.parent})


def compose_morphisms(m1: ForestMorphism, m2: ForestMorphism) -> ForestMorphism:
    """The composite m2 ∘ m1 : F1 → F3.

    The middle forest carries C2 (from m1) and D2 (from m2); the vertices in
    P_{C2} ∩ R_{D2} are exactly those where g∘f is defined, and their
    preimage/image are the root part of E1 and the branch part of E3.
    """
    if m1.target != m2.source:
        raise ForestError("morphisms are not composable: middle forests differ")
    f2 = m1.target
    middle = m1.c2.branch_part(f2) & m2.c1.root_part(f2)
    finv = {w: v for v, w in m1.bijection.items()}
    e1_root = {finv[w] for w in middle}
    e3_branch = {m2.bijection[w] for w in middle}
    f3 = m2.target
    e3 = Cut.from_points(f3, (v for v in e3_branch if f3.parent[v] not in e3_branch))
    return ForestMorphism(m1.source, f3, Cut.from_root_part(m1.source, e1_root), e3,
                          {finv[w]: m2.bijection[w] for w in middle})


def kernel(m: ForestMorphism) -> ForestMorphism:
    """Inclusion (C_null, C1, id): P_{C1}(F1) → F1."""
    sub = m.source.induced(m.c1.branch_part(m.source))
    return ForestMorphism(sub, m.source, empty_cut(), Cut.from_points(m.source, m.c1.points),
                          {v: v for v in sub.parent})


def cokernel(m: ForestMorphism) -> ForestMorphism:
    """Projection (C2, C_full, id): F2 → R_{C2}(F2)."""
    quot = m.target.induced(m.c2.root_part(m.target))
    return ForestMorphism(m.target, quot, m.c2, full_cut(quot), {v: v for v in quot.parent})


def labeled_splits(forest: LabeledForest) -> Iterator[tuple[Cut, str, str]]:
    for c in admissible_cuts(forest):
        p, r = apply_cut(forest, c)
        yield c, p, r
