"""Ringel-Hall algebra over the forest and graph categories.

Elements are finitely supported maps from canonical keys to Fractions.  The
category is read off the keys: forest keys start with ``{``, graph keys with
``[``.  Structure constants come from a backend's split table, which lists
every subobject of an object by (subobject class, quotient class).
"""
from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from . import feyngraphs as fg
from . import forests as fo

DELTA = "delta"
PHI = "phi"


class HallError(ValueError):
    pass


# ---------------------------------------------------------------------------
# backends


class CategoryBackend(ABC):
    name: str
    empty: str

    @abstractmethod
    def canon(self, obj) -> str: ...

    @abstractmethod
    def split(self, key: str) -> Counter:
        """Counter {(subobject key, quotient key): number of subobjects}."""

    @abstractmethod
    def extension_candidates(self, a: str, b: str) -> set[str]: ...

    @abstractmethod
    def components(self, key: str) -> tuple[str, ...]:
        """Indecomposable constituents, each as a full key."""

    @abstractmethod
    def join(self, keys: Iterable[str]) -> str: ...

    @abstractmethod
    def k0(self, key: str): ...

    @abstractmethod
    def length(self, key: str) -> int: ...

    def add_degrees(self, *degs):
        raise NotImplementedError

    def is_indecomposable(self, key: str) -> bool:
        return len(self.components(key)) == 1

    def sort_key(self, key: str):
        return (self.length(key), key)


class ForestBackend(CategoryBackend):
    name = "trees"
    empty = fo.EMPTY

    def canon(self, obj) -> str:
        return fo.canon_forest(obj)

    def split(self, key):
        return fo.forest_splits(key)

    def extension_candidates(self, a, b):
        return fo.graft_candidates(a, b)

    def components(self, key):
        return tuple(fo.forest_key([t]) for t in fo.forest_trees(key))

    def join(self, keys):
        return fo.forest_key(t for k in keys for t in fo.forest_trees(k))

    def k0(self, key) -> int:
        return fo.forest_size(key)

    def length(self, key) -> int:
        return fo.forest_size(key)

    def add_degrees(self, *degs):
        return sum(degs)

    def objects(self, max_degree: int) -> list[str]:
        return [k for n in range(max_degree + 1) for k in fo.enumerate_forests(n)]

    def indecomposables(self, max_degree: int) -> list[str]:
        return [fo.forest_key([t]) for n in range(1, max_degree + 1) for t in fo.enumerate_trees(n)]


class GraphBackend(CategoryBackend):
    name = "graphs"
    empty = fg.EMPTY

    def canon(self, obj) -> str:
        if isinstance(obj, str):
            return fg.parse_graph_key(obj)
        return fg.canon_graph(fg.validate(obj))

    def split(self, key):
        return fg.graph_splits(key)

    def extension_candidates(self, a, b):
        return fg.extension_candidates(a, b)

    def components(self, key):
        return tuple(f"[{c}]" for c in fg.graph_components(key))

    def join(self, keys):
        return fg.join_graph_keys(keys)

    def k0(self, key):
        return tuple(sorted(fg.k0_graph(key).items()))

    def length(self, key) -> int:
        return fg.graph_length(key)

    def add_degrees(self, *degs):
        total: Counter = Counter()
        for d in degs:
            total.update(dict(d))
        return tuple(sorted(total.items()))

    def loops(self, key) -> int:
        return fg.graph_from_key(key).loops()

    def indecomposables(self, max_loops: int) -> list[str]:
        from .corpus import graph_corpus
        return [f"{k}" for k in graph_corpus(max_loops)]

    def objects(self, max_loops: int) -> list[str]:
        """Objects (multisets of connected corpus graphs) with total loops ≤ max_loops."""
        conn = self.indecomposables(max_loops)
        loops = {k: self.loops(k) for k in conn}
        out = {fg.EMPTY}

        def rec(start, budget, acc):
            for i in range(start, len(conn)):
                if loops[conn[i]] <= budget:
                    acc.append(conn[i])
                    out.add(self.join(acc))
                    rec(i, budget - loops[conn[i]], acc)
                    acc.pop()

        rec(0, max_loops, [])
        return sorted(out, key=lambda k: (self.loops(k) if k != fg.EMPTY else 0, k))


TREES = ForestBackend()
GRAPHS = GraphBackend()


def backend_of(key: str) -> CategoryBackend:
    if key.startswith("{"):
        return TREES
    if key.startswith("["):
        return GRAPHS
    raise HallError(f"cannot tell the category of key {key!r}")


def backend_named(name: str) -> CategoryBackend:
    try:
        return {"trees": TREES, "graphs": GRAPHS}[name]
    except KeyError:
        raise HallError(f"unknown category {name!r}") from None


# ---------------------------------------------------------------------------
# elements


class HallElement(Mapping[str, Fraction]):
    """A finitely supported rational function on isomorphism classes.

    ``basis`` is ``"delta"`` for elements of the Hall algebra and ``"phi"``
    for the restricted dual.  Zero coefficients are never stored.
    """

    __slots__ = ("_terms", "basis", "_backend")

    def __init__(self, terms: Mapping[str, object] | Iterable[tuple[str, object]] = (),
                 basis: str = DELTA, backend: CategoryBackend | None = None):
        if basis not in (DELTA, PHI):
            raise HallError(f"unknown basis {basis!r}")
        acc: dict[str, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in items:
            c = Fraction(c)
            if c:
                acc[k] = acc.get(k, Fraction(0)) + c
                if not acc[k]:
                    del acc[k]
        backends = {backend_of(k).name for k in acc}
        if backend is not None:
            backends.add(backend.name)
        if len(backends) > 1:
            raise HallError("element mixes tree and graph keys")
        self._terms = acc
        self.basis = basis
        self._backend = backend_named(backends.pop()) if backends else None

    @classmethod
    def basis_vector(cls, key: str, basis: str = DELTA, coeff=1) -> "HallElement":
        return cls({key: coeff}, basis)

    @property
    def backend(self) -> CategoryBackend | None:
        return self._backend

    def __getitem__(self, key):
        return self._terms.get(key, Fraction(0))

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __contains__(self, key):
        return key in self._terms

    def __eq__(self, other):
        if isinstance(other, HallElement):
            if not self._terms and not other._terms:
                return True
            return self.basis == other.basis and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.basis, frozenset(self._terms.items())))

    def _check(self, other: "HallElement"):
        if not isinstance(other, HallElement):
            raise TypeError(f"expected HallElement, got {type(other).__name__}")
        if self._terms and other._terms and self.basis != other.basis:
            raise HallError("cannot combine delta- and phi-basis elements")
        if self._backend and other._backend and self._backend is not other._backend:
            raise HallError("cannot combine elements of different categories")

    def _like(self, terms, other=None) -> "HallElement":
        basis = self.basis if self._terms or other is None or not other._terms else other.basis
        return HallElement(terms, basis)

    def __add__(self, other):
        self._check(other)
        return self._like(itertools.chain(self._terms.items(), other._terms.items()), other)

    def __sub__(self, other):
        self._check(other)
        return self._like(itertools.chain(self._terms.items(),
                                          ((k, -c) for k, c in other._terms.items())), other)

    def __neg__(self):
        return HallElement({k: -c for k, c in self._terms.items()}, self.basis)

    def __mul__(self, scalar):
        if isinstance(scalar, HallElement):
            return hall_product(self, scalar)
        return HallElement({k: c * Fraction(scalar) for k, c in self._terms.items()}, self.basis)

    __rmul__ = __mul__

    def terms(self) -> list[tuple[str, Fraction]]:
        """Terms ordered by (length, key)."""
        if not self._terms:
            return []
        b = self._backend
        return sorted(self._terms.items(), key=lambda kv: (b.length(kv[0]), kv[0]))

    def with_basis(self, basis: str) -> "HallElement":
        """The same coefficients read in another basis (the κ identification)."""
        return HallElement(self._terms, basis)

    def __repr__(self):
        return f"HallElement({format_element(self)!r}, basis={self.basis!r})"

    def to_json(self) -> dict:
        return {"basis": self.basis,
                "terms": [{"key": k, "num": c.numerator, "den": c.denominator}
                          for k, c in self.terms()]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "HallElement":
        return cls({t["key"]: Fraction(t["num"], t.get("den", 1)) for t in doc["terms"]},
                   doc.get("basis", DELTA))


def delta(key: str, coeff=1) -> HallElement:
    return HallElement({key: coeff}, DELTA)


def phi(key: str, coeff=1) -> HallElement:
    return HallElement({key: coeff}, PHI)


def format_element(v: HallElement) -> str:
    """Text form ``c*key + c*key - ...``; ``0`` for the zero element."""
    terms = v.terms()
    if not terms:
        return "0"
    out = []
    for i, (k, c) in enumerate(terms):
        mag = abs(c)
        body = f"{mag}*{k}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def _require_delta(*elems: HallElement):
    for e in elems:
        if e and e.basis != DELTA:
            raise HallError("operation needs delta-basis elements")


def _backend(*elems: HallElement) -> CategoryBackend | None:
    names = {e.backend.name for e in elems if e.backend is not None}
    if len(names) > 1:
        raise HallError("elements belong to different categories")
    return backend_named(names.pop()) if names else None


# ---------------------------------------------------------------------------
# product and coproduct


@lru_cache(maxsize=None)
def basis_product(a: str, b: str) -> tuple[tuple[str, int], ...]:
    """Structure constants of δ_a × δ_b as sorted (key, count) pairs."""
    be = backend_of(a)
    if backend_of(b) is not be:
        raise HallError("mixed categories in product")
    if a == be.empty:
        return ((b, 1),)
    if b == be.empty:
        return ((a, 1),)
    out = []
    for m in be.extension_candidates(a, b):
        c = be.split(m).get((a, b), 0)
        if c:
            out.append((m, c))
    return tuple(sorted(out))


def hall_product(f: HallElement, g: HallElement) -> HallElement:
    """(f × g)(M) = Σ_{N ⊂ M} f(N) g(M/N)."""
    f._check(g)
    _require_delta(f, g)
    acc: Counter = Counter()
    for a, ca in f.items():
        for b, cb in g.items():
            for m, n in basis_product(a, b):
                acc[m] += ca * cb * n
    return HallElement(acc, DELTA)


def product_of(elems: Iterable[HallElement], backend: CategoryBackend) -> HallElement:
    out = delta(backend.empty)
    for e in elems:
        out = hall_product(out, e)
    return out


@lru_cache(maxsize=None)
def basis_coproduct(a: str) -> tuple[tuple[str, str], ...]:
    """Ordered pairs (B, C) of classes with B ⊕ C ≅ A, each once."""
    be = backend_of(a)
    comps = be.components(a)
    pairs = set()
    for mask in itertools.product((0, 1), repeat=len(comps)):
        left = [c for c, m in zip(comps, mask) if m]
        right = [c for c, m in zip(comps, mask) if not m]
        pairs.add((be.join(left), be.join(right)))
    return tuple(sorted(pairs))


class Tensor(dict):
    """Finitely supported map (key, key) → Fraction with no zero values."""

    def __init__(self, items=()):
        super().__init__()
        for k, c in (items.items() if isinstance(items, Mapping) else items):
            c = Fraction(c)
            v = self.get(k, Fraction(0)) + c
            if v:
                self[k] = v
            else:
                self.pop(k, None)

    def __sub__(self, other):
        return Tensor(itertools.chain(self.items(), ((k, -c) for k, c in other.items())))

    def flip(self) -> "Tensor":
        return Tensor(((b, a), c) for (a, b), c in self.items())


def coproduct(f: HallElement) -> Tensor:
    """Δ(f)(M, N) = f(M ⊕ N)."""
    _require_delta(f)
    return Tensor(((pair, c) for a, c in f.items() for pair in basis_coproduct(a)))


def reduced_coproduct(f: HallElement) -> Tensor:
    be = f.backend
    if be is None:
        return Tensor()
    return Tensor(((b, c), x) for (b, c), x in coproduct(f).items()
                  if b != be.empty and c != be.empty)


def tensor_product(s: Tensor, t: Tensor) -> Tensor:
    """Componentwise product (a⊗b)(c⊗d) = (a×c)⊗(b×d)."""
    acc: Counter = Counter()
    for (a, b), x in s.items():
        for (c, d), y in t.items():
            for m1, n1 in basis_product(a, c):
                for m2, n2 in basis_product(b, d):
                    acc[(m1, m2)] += x * y * n1 * n2
    return Tensor(acc)


def tensor_coassoc_sides(f: HallElement) -> tuple[dict, dict]:
    """((Δ⊗id)Δ f, (id⊗Δ)Δ f) as maps on key triples."""
    left: Counter = Counter()
    right: Counter = Counter()
    for (a, b), x in coproduct(f).items():
        for a1, a2 in basis_coproduct(a):
            left[(a1, a2, b)] += x
        for b1, b2 in basis_coproduct(b):
            right[(a, b1, b2)] += x
    return ({k: v for k, v in left.items() if v}, {k: v for k, v in right.items() if v})


def counit(f: HallElement) -> Fraction:
    be = f.backend
    return f[be.empty] if be is not None else Fraction(0)


def mult_tensor(t: Tensor, left=None, right=None) -> HallElement:
    """m((left⊗right)(t)) for linear maps on basis keys."""
    out = HallElement()
    for (a, b), x in t.items():
        la = left(a) if left else delta(a)
        rb = right(b) if right else delta(b)
        out = out + hall_product(la, rb) * x
    return out


# ---------------------------------------------------------------------------
# antipode, bracket, pairing


@lru_cache(maxsize=None)
def _antipode_basis(a: str) -> HallElement:
    be = backend_of(a)
    if a == be.empty:
        return delta(a)
    out = -delta(a)
    for b, c in basis_coproduct(a):
        if b == be.empty or c == be.empty:
            continue
        out = out - hall_product(_antipode_basis(b), delta(c))
    return out


def antipode(f: HallElement) -> HallElement:
    """S by the recursion S(x) = −x − Σ S(x')x'' over the reduced coproduct."""
    _require_delta(f)
    out = HallElement()
    for a, c in f.items():
        out = out + _antipode_basis(a) * c
    return out


def transpose(f: HallElement) -> HallElement:
    """The anti-automorphism X ↦ X^t = −X extended to the enveloping algebra."""
    return antipode(f)


def hall_bracket(a: str, b: str) -> HallElement:
    """δ_a × δ_b − δ_b × δ_a for indecomposable a, b."""
    for k in (a, b):
        if not backend_of(k).is_indecomposable(k):
            raise HallError(f"{k} is not indecomposable")
    return hall_product(delta(a), delta(b)) - hall_product(delta(b), delta(a))


def bracket(x: HallElement, y: HallElement) -> HallElement:
    return hall_product(x, y) - hall_product(y, x)


def kappa(f: HallElement, g: HallElement) -> Fraction:
    """κ(f, g) = Σ_A f(A) g(A).

    Either argument may be in the φ basis; κ identifies δ_A with φ_A.
    """
    if f.backend and g.backend and f.backend is not g.backend:
        raise HallError("cannot pair elements of different categories")
    return sum((c * g[k] for k, c in f.items()), Fraction(0))


def is_primitive(f: HallElement) -> bool:
    _require_delta(f)
    return not reduced_coproduct(f)


def degree(f: HallElement):
    """Common K0 degree of the support, ``"mixed"`` otherwise (None for zero)."""
    if not f:
        return None
    be = f.backend
    degs = {be.k0(k) for k in f}
    return degs.pop() if len(degs) == 1 else "mixed"


def indecomposable_part(f: HallElement) -> HallElement:
    """Drop the terms supported on decomposable objects."""
    be = f.backend
    if be is None:
        return f
    return HallElement({k: c for k, c in f.items() if len(be.components(k)) <= 1}, f.basis)


def iter_split(key: str) -> Iterator[tuple[str, str, int]]:
    for (s, q), m in sorted(backend_of(key).split(key).items()):
        yield s, q, m


# ---------------------------------------------------------------------------
# pre-Lie products


def _basis_prelie(a: str, b: str) -> dict[str, int]:
    be = backend_of(a)
    if backend_of(b) is not be:
        raise HallError("mixed categories in pre-Lie product")
    if not (be.is_indecomposable(a) and be.is_indecomposable(b)):
        raise HallError("pre-Lie product needs indecomposable arguments")
    if be is TREES:
        (t1,), (t2,) = fo.forest_trees(a), fo.forest_trees(b)
        return {fo.forest_key([t]): n for t, n in fo.prelie_tree(t1, t2).items()}
    return dict(fg.prelie_graph(a, b))


def prelie(x: HallElement, y: HallElement) -> HallElement:
    """Bilinear extension of grafting (trees) or insertion (graphs)."""
    x._check(y)
    acc: Counter = Counter()
    for a, ca in x.items():
        for b, cb in y.items():
            for m, n in _basis_prelie(a, b).items():
                acc[m] += ca * cb * n
    return HallElement(acc, DELTA)


def prelie_bracket(x: HallElement, y: HallElement) -> HallElement:
    return prelie(x, y) - prelie(y, x)
