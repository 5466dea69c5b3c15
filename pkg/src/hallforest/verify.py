"""Invariant batteries behind ``hallforest verify``.

Each suite returns a list of Checks.  Failing checks carry a witness; passing
checks are summarized per claim with the number of instances tested.
"""
from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from dataclasses import dataclass, field

from . import feyngraphs as fg
from . import forests as fo
from .hall import (GRAPHS, TREES, CategoryBackend, HallElement, antipode, backend_named,
                   coproduct, counit, delta, hall_bracket, hall_product,
                   is_primitive, mult_tensor, phi, prelie, prelie_bracket, tensor_coassoc_sides,
                   tensor_product)
from .hecke import (Check, equivalence_suite, indecomposability_test, truncated_act,
                    truncated_duality_check, truncated_module_check, truncation_set)
from .representations import (RepKind, dual_pairing_check, grading_check, module_axiom_check,
                              quotient_descends_check, transpose_intertwiner_check)

SUITES = ("hopf", "prelie", "jacobi", "module", "duality", "grading", "hecke-equiv",
          "truncation", "canonical", "category-axioms")

DEFAULT_DEGREE = {"trees": 5, "graphs": 3}

# graph suites sample this many random instances per claim
GRAPH_SAMPLES = 60


@dataclass
class RunReport:
    suite: str
    category: str
    max_degree: int
    seed: int
    checks: list[Check] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_json(self, timing: bool = False) -> dict:
        doc = {"suite": self.suite, "category": self.category, "max_degree": self.max_degree,
               "seed": self.seed, "status": "pass" if self.ok else "fail",
               "checks": [c.to_json() for c in self.checks]}
        if timing:
            doc["wall_time"] = round(self.wall_time, 3)
        return doc

    def to_text(self, timing: bool = False) -> str:
        lines = [f"suite {self.suite} category {self.category} max-degree {self.max_degree} "
                 f"seed {self.seed}: {'pass' if self.ok else 'FAIL'}"]
        for c in self.checks:
            lines.append(f"  [{c.status}] {c.claim}")
            if c.status == "fail" and c.witness is not None:
                lines.append(f"         witness: {c.witness}")
        if timing:
            lines.append(f"  wall time {self.wall_time:.3f}s")
        return "\n".join(lines)


class _Tally:
    """Collects instance results, keeping the first witness per failing claim."""

    def __init__(self):
        self.counts: Counter = Counter()
        self.failures: dict[str, object] = {}
        self.order: list[str] = []

    def __call__(self, claim: str, ok: bool, witness=None):
        if claim not in self.counts:
            self.order.append(claim)
        self.counts[claim] += 1
        if not ok and claim not in self.failures:
            self.failures[claim] = witness

    def checks(self) -> list[Check]:
        out = []
        for claim in self.order:
            n = self.counts[claim]
            if claim in self.failures:
                out.append(Check(f"{claim} ({n} instances)", "fail", self.failures[claim]))
            else:
                out.append(Check(f"{claim} ({n} instances)", "pass"))
        return out


# ---------------------------------------------------------------------------
# degrees and basis ranges


def degree_of(backend: CategoryBackend, key: str) -> int:
    """Vertex count for forests, loop number for graphs."""
    if key == backend.empty:
        return 0
    return backend.length(key) if backend is TREES else GRAPHS.loops(key)


def _objects(backend, max_degree: int, nonempty: bool = True) -> list[str]:
    objs = backend.objects(max_degree)
    return [k for k in objs if k != backend.empty] if nonempty else objs


def _tuples(backend, keys, arity: int, max_degree: int, rng, sample: int | None):
    deg = {k: degree_of(backend, k) for k in keys}
    combos = [t for t in itertools.product(keys, repeat=arity)
              if sum(deg[k] for k in t) <= max_degree]
    if sample is not None and len(combos) > sample:
        combos = rng.sample(combos, sample)
    return combos


def _sample(backend) -> int | None:
    return GRAPH_SAMPLES if backend is GRAPHS else None


# ---------------------------------------------------------------------------
# suites


def suite_hopf(backend, max_degree, rng) -> list[Check]:
    t = _Tally()
    objs = _objects(backend, max_degree)
    sample = _sample(backend)
    for x, y, z in _tuples(backend, objs, 3, max_degree, rng, sample):
        dx, dy, dz = delta(x), delta(y), delta(z)
        lhs = hall_product(hall_product(dx, dy), dz)
        rhs = hall_product(dx, hall_product(dy, dz))
        t("associativity (f×g)×h = f×(g×h)", lhs == rhs, [x, y, z])
    for x, y in _tuples(backend, objs, 2, max_degree, rng, sample):
        dx, dy = delta(x), delta(y)
        lhs = coproduct(hall_product(dx, dy))
        rhs = tensor_product(coproduct(dx), coproduct(dy))
        t("bialgebra Δ(f×g) = Δ(f)Δ(g)", lhs == rhs, [x, y])
        want = backend.add_degrees(backend.k0(x), backend.k0(y))
        t("grading of products", all(backend.k0(m) == want for m in hall_product(dx, dy)), [x, y])
    unit = delta(backend.empty)
    for x in backend.objects(max_degree):
        dx = delta(x)
        cop = coproduct(dx)
        t("cocommutativity", cop.flip() == cop, x)
        left, right = tensor_coassoc_sides(dx)
        t("coassociativity", left == right, x)
        eps = unit * counit(dx)
        s_left = mult_tensor(cop, left=lambda k: antipode(delta(k)))
        s_right = mult_tensor(cop, right=lambda k: antipode(delta(k)))
        t("antipode m(S⊗id)Δ = m(id⊗S)Δ = ηε", s_left == eps and s_right == eps, x)
        t("involutivity S² = id", antipode(antipode(dx)) == dx, x)
        t("counit (ε⊗id)Δ = id", _counit_ok(dx), x)
    gens = backend.indecomposables(max_degree)
    for a, b in _tuples(backend, gens, 2, max_degree, rng, sample):
        t("δ of indecomposables and their brackets are primitive",
          is_primitive(delta(a)) and is_primitive(hall_bracket(a, b)), [a, b])
    return t.checks()


def _counit_ok(dx: HallElement) -> bool:
    be = dx.backend
    acc = HallElement()
    for (p, q), c in coproduct(dx).items():
        if p == be.empty:
            acc = acc + delta(q) * c
    return acc == dx


def _connected(backend, max_degree: int) -> list[str]:
    return backend.indecomposables(max_degree)


def suite_prelie(backend, max_degree, rng) -> list[Check]:
    t = _Tally()
    gens = _connected(backend, max_degree)
    for x, y, z in _tuples(backend, gens, 3, max_degree, rng, _sample(backend)):
        dx, dy, dz = delta(x), delta(y), delta(z)
        ass_xy = prelie(dx, prelie(dy, dz)) - prelie(prelie(dx, dy), dz)
        ass_yx = prelie(dy, prelie(dx, dz)) - prelie(prelie(dy, dx), dz)
        t("left symmetry of the pre-Lie associator", ass_xy == ass_yx, [x, y, z])
    for x, y in _tuples(backend, gens, 2, max_degree, rng, _sample(backend)):
        hall = hall_bracket(x, y)
        ins = prelie_bracket(delta(x), delta(y))
        t("pre-Lie bracket and Hall commutator have the same support",
          set(hall) == set(ins), {"x": x, "y": y})
    return t.checks()


def _jacobi(br, x, y, z) -> HallElement:
    return br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))


def suite_jacobi(backend, max_degree, rng) -> list[Check]:
    t = _Tally()
    gens = _connected(backend, max_degree)
    hall = lambda u, v: hall_product(u, v) - hall_product(v, u)
    for x, y, z in _tuples(backend, gens, 3, max_degree, rng, _sample(backend)):
        dx, dy, dz = delta(x), delta(y), delta(z)
        t("Jacobi for the pre-Lie bracket", _jacobi(prelie_bracket, dx, dy, dz) == 0, [x, y, z])
        t("Jacobi for the Hall commutator", _jacobi(hall, dx, dy, dz) == 0, [x, y, z])
    for x, y in _tuples(backend, gens, 2, max_degree, rng, _sample(backend)):
        t("antisymmetry", prelie_bracket(delta(x), delta(y)) == -prelie_bracket(delta(y), delta(x)),
          [x, y])
    return t.checks()


def _basis(kind: RepKind, key: str) -> HallElement:
    return delta(key) if kind.basis == "delta" else phi(key)


def suite_module(backend, max_degree, rng) -> list[Check]:
    t = _Tally()
    gens = _connected(backend, max_degree)
    objs = backend.objects(max_degree)
    deg = {k: degree_of(backend, k) for k in objs}
    combos = [(a, b, v) for a in gens for b in gens for v in objs
              if deg[a] + deg[b] + deg[v] <= max_degree]
    if backend is GRAPHS and len(combos) > GRAPH_SAMPLES:
        combos = rng.sample(combos, GRAPH_SAMPLES)
    for a, b, v in combos:
        for kind in RepKind:
            t(f"module axiom for {kind.value}", module_axiom_check(kind, a, b, _basis(kind, v)),
              [a, b, v])
    for a in gens:
        t("X_a·δ_∅ = δ_a under insertion", hall_product(delta(a), delta(backend.empty)) == delta(a), a)
        from .representations import act
        t("X_a·φ_a = −φ_∅ under elimination",
          act(RepKind.ELIMINATION, a, phi(a)) == phi(backend.empty, -1), a)
        for v in objs:
            if deg[a] + deg[v] > max_degree + 1:
                continue
            out = act(RepKind.ELIMINATION, a, phi(v))
            t("elimination coefficients are non-positive integers",
              all(c <= 0 and c.denominator == 1 for c in out.values()), [a, v])
    return t.checks()


def suite_duality(backend, max_degree, rng) -> list[Check]:
    t = _Tally()
    gens = _connected(backend, max_degree)
    objs = backend.objects(max_degree)
    deg = {k: degree_of(backend, k) for k in objs}
    for a in gens:
        for u in objs:
            for v in objs:
                if deg[u] != deg[a] + deg[v]:
                    continue
                t("κ(X·φ, δ) = −κ(φ, X·δ) for both pairs", dual_pairing_check(a, phi(u), delta(v)),
                  [a, u, v])
        for u in objs:
            if deg[a] + deg[u] > max_degree:
                continue
            t("antipode intertwines left and negated right multiplication",
              transpose_intertwiner_check(a, delta(u)), [a, u])
            t("insertion descends to the quotient by decomposables",
              quotient_descends_check(a, delta(u)), [a, u])
    return t.checks()


def suite_grading(backend, max_degree, rng) -> list[Check]:
    t = _Tally()
    gens = _connected(backend, max_degree)
    objs = backend.objects(max_degree)
    for a in gens:
        for v in objs:
            if degree_of(backend, a) + degree_of(backend, v) > max_degree:
                continue
            for kind in RepKind:
                t(f"degree shift ±[a] for {kind.value}", grading_check(kind, a, _basis(kind, v)),
                  [a, v])
    return t.checks()


def suite_hecke(backend, max_degree, rng) -> list[Check]:
    return equivalence_suite(max_degree, backend.name)


def suite_truncation(backend, max_degree, rng) -> list[Check]:
    t = _Tally()
    objs = _objects(backend, max_degree)
    if backend is GRAPHS and len(objs) > GRAPH_SAMPLES // 4:
        objs = sorted(rng.sample(objs, GRAPH_SAMPLES // 4), key=backend.sort_key)
    for m in objs:
        for mode in ("quot", "sub"):
            ts = truncation_set(m, mode)
            elim, ins = (RepKind.ELIMINATION, RepKind.INSERTION) if mode == "quot" else \
                (RepKind.TOP_ELIMINATION, RepKind.TOP_INSERTION)
            gens = [a for a in _connected(backend, max(degree_of(backend, m), 1))
                    if degree_of(backend, a) <= degree_of(backend, m)]
            stable = True
            for a in gens:
                for e in ts.members:
                    try:
                        truncated_act(ts, elim, a, phi(e))
                    except ValueError:
                        stable = False
            t(f"stability of the {mode} truncation", stable, m)
            t(f"monotonicity of the {mode} truncation",
              all(set(truncation_set(n, mode).members) <= set(ts.members) for n in ts.members), m)
            t(f"{mode} truncation contains ∅ and M",
              backend.empty in ts and m in ts, m)
            small = [a for a in gens if degree_of(backend, a) <= 2]
            combos = [(a, b, e) for a, b in itertools.product(small, repeat=2) for e in ts.members]
            if backend is GRAPHS and len(combos) > GRAPH_SAMPLES:
                combos = rng.sample(combos, GRAPH_SAMPLES)
            for a, b, e in combos:
                ok = (truncated_module_check(ts, elim, a, b, phi(e))
                      and truncated_module_check(ts, ins, a, b, delta(e)))
                t(f"truncated {mode} actions are module actions", ok, [m, a, b, e])
            for a in gens:
                t(f"restricted insertion is the κ-dual on the {mode} truncation",
                  truncated_duality_check(ts, a), [m, a])
            if backend.is_indecomposable(m):
                cert = indecomposability_test(ts, random_vectors=5, seed=rng.randrange(1 << 30))
                bad = [c.witness for c in cert if c.status == "fail"]
                t(f"indecomposability certificate on the {mode} truncation", not bad,
                  {"M": m, "failures": bad[:1]})
    return t.checks()


# -- canonical forms


def _random_relabel_forest(key: str, rng) -> fo.LabeledForest:
    lf = fo.LabeledForest.from_key(key, "v")
    names = list(lf.parent)
    new = [f"n{i}" for i in range(len(names))]
    rng.shuffle(new)
    ren = dict(zip(names, new))
    return fo.LabeledForest({ren[v]: (None if p is None else ren[p]) for v, p in lf.parent.items()})


def _nested(lf: fo.LabeledForest, rng):
    def build(v):
        kids = [build(c) for c in lf.children[v]]
        rng.shuffle(kids)
        return kids
    roots = [build(r) for r in lf.roots]
    rng.shuffle(roots)
    return roots


def _random_relabel_graph(g: fg.FeynmanGraph, rng) -> fg.FeynmanGraph:
    vs = list(g.vertices)
    hs = list(g.half_edges)
    vn = [f"x{i}" for i in range(len(vs))]
    hn = [f"h{i}" for i in range(len(hs))]
    rng.shuffle(vn)
    rng.shuffle(hn)
    vm, hm = dict(zip(vs, vn)), dict(zip(hs, hn))
    return fg.FeynmanGraph(vn, {hm[h]: vm[v] for h, v in g.half_edges.items()},
                           [(hm[a], hm[b]) for a, b in g.internal])


def tree_count_recurrence(n: int) -> list[int]:
    """Rooted unlabeled tree counts a(1..n) from the classical divisor recurrence."""
    a = [0, 1]
    for m in range(1, n):
        s = 0
        for k in range(1, m + 1):
            s += sum(d * a[d] for d in range(1, k + 1) if k % d == 0) * a[m - k + 1]
        a.append(s // m)
    return a[1:n + 1]


def suite_canonical(backend, max_degree, rng) -> list[Check]:
    t = _Tally()
    if backend is TREES:
        counts = [len(fo.enumerate_trees(n)) for n in range(1, max_degree + 1)]
        t("tree counts match the recurrence", counts == tree_count_recurrence(max_degree), counts)
        for key in backend.objects(max_degree):
            for _ in range(5):
                lf = _random_relabel_forest(key, rng)
                t("canonical key invariant under relabeling", lf.key == key, key)
                t("canonical key invariant under child order",
                  fo.canon_forest(_nested(lf, rng)) == key, key)
    else:
        for key in backend.objects(max_degree):
            g = fg.graph_from_key(key)
            for _ in range(5):
                h = _random_relabel_graph(g, rng)
                t("canonical key invariant under relabeling", fg.canon_graph(h) == key, key)
            t("key round trip", fg.canon_graph(fg.graph_from_key(key, "r")) == key, key)
    return t.checks()


# -- category axioms


def random_forest_morphism(source: fo.LabeledForest, rng, prefix: str,
                           max_extra: int = 2) -> fo.ForestMorphism:
    """A random morphism out of ``source`` into a freshly built target."""
    c1 = rng.choice(fo.admissible_cuts(source))
    dom = source.induced(c1.root_part(source))
    extra = rng.randint(0, max_extra)
    q = rng.choice(fo.enumerate_forests(extra))
    cands = sorted(m for m in fo.graft_candidates(dom.key, q)
                   if fo.forest_splits(m).get((dom.key, q)))
    target = fo.LabeledForest.from_key(rng.choice(cands), prefix)
    cuts = [c for c in fo.admissible_cuts(target)
            if target.key_of(c.branch_part(target)) == dom.key]
    c2 = rng.choice(cuts)
    bij = fo.forest_isomorphism(dom, target.induced(c2.branch_part(target)))
    return fo.ForestMorphism(source, target, c1, c2, bij)


def suite_category_axioms(backend, max_degree, rng) -> list[Check]:
    t = _Tally()
    if backend is TREES:
        for key in backend.objects(min(max_degree, 5)):
            lf = fo.LabeledForest.from_key(key)
            cuts = fo.admissible_cuts(lf)
            pick = cuts if len(cuts) <= 8 else rng.sample(cuts, 8)
            for c, d in itertools.product(pick, repeat=2):
                mx, mn = fo.cut_max(lf, c, d), fo.cut_min(lf, c, d)
                ok = (mx == fo.cut_max(lf, d, c) and mn == fo.cut_min(lf, d, c)
                      and fo.cut_max(lf, c, mn) == c and fo.cut_min(lf, c, mx) == c
                      and fo.cut_max(lf, c, c) == c)
                t("cut lattice laws", ok, [key, sorted(c.points), sorted(d.points)])
        for i in range(200):
            start = fo.LabeledForest.from_key(rng.choice(_objects(TREES, 3)), "s")
            m1 = random_forest_morphism(start, rng, "t")
            m2 = random_forest_morphism(m1.target, rng, "u")
            m3 = random_forest_morphism(m2.target, rng, "w")
            # compose_morphisms(first, second) is second ∘ first
            lhs = fo.compose_morphisms(fo.compose_morphisms(m1, m2), m3)
            rhs = fo.compose_morphisms(m1, fo.compose_morphisms(m2, m3))
            t("composition is associative", lhs == rhs, i)
            t("identity is neutral", fo.compose_morphisms(fo.identity(m1.source), m1) == m1
              and fo.compose_morphisms(m1, fo.identity(m1.target)) == m1, i)
    else:
        for key in _objects(GRAPHS, max_degree):
            g = fg.graph_from_key(key)
            subs = fg.subgraphs(g)
            for s in subs:
                q = fg.contract(g, s)
                above = [s2 for s2 in subs if all(any(c <= d for d in s2) for c in s)]
                qs = fg.subgraphs(q)
                ok = len(qs) == len(above)
                for sb in qs if ok else []:
                    pre = fg.preimage(g, s, sb)
                    ok = ok and pre in above and (fg.canon_graph(fg.contract(q, sb))
                                                  == fg.canon_graph(fg.contract(g, pre)))
                t("subgraphs of Γ/γ correspond to subgraphs containing γ", ok, [key, str(s)])
                if len(s) > 1:
                    keys = {fg.canon_graph(_contract_in_order(g, order))
                            for order in itertools.permutations(s)}
                    t("contraction order independence", len(keys) == 1, key)
            t("K0 class independent of the contraction series",
              len(fg.k0_all_series(key)) == 1, key)
    return t.checks()


def _contract_in_order(g: fg.FeynmanGraph, pieces) -> fg.FeynmanGraph:
    """Contract pieces one at a time, carrying the later ones through."""
    out, rest = g, list(pieces)
    while rest:
        piece = rest.pop(0)
        out = fg.contract(out, [piece])
    return out


_SUITES = {
    "hopf": suite_hopf, "prelie": suite_prelie, "jacobi": suite_jacobi,
    "module": suite_module, "duality": suite_duality, "grading": suite_grading,
    "hecke-equiv": suite_hecke, "truncation": suite_truncation,
    "canonical": suite_canonical, "category-axioms": suite_category_axioms,
}


def run_suite(suite: str, category: str = "trees", max_degree: int | None = None,
              seed: int = 0) -> RunReport:
    if suite not in _SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    backend = backend_named(category)
    if max_degree is None:
        max_degree = DEFAULT_DEGREE[category]
    rng = random.Random(f"{suite}:{category}:{max_degree}:{seed}")
    start = time.perf_counter()
    checks = _SUITES[suite](backend, max_degree, rng)
    return RunReport(suite, category, max_degree, seed, checks, time.perf_counter() - start)
