"""Functions on the Hecke correspondence of pairs (A ⊂ B) and truncated modules.

A pair is recorded up to isomorphism by the triple (sub, quot, amb) of class
keys, counted with the number of concrete subobjects of ``amb`` realizing it.
Pullbacks along the three legs only see one coordinate, so triples are enough
to carry every function these operations produce.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import feyngraphs as fg
from . import forests as fo
from .hall import (DELTA, PHI, GRAPHS, TREES, HallElement, HallError, backend_of, delta,
                   hall_product)
from .representations import RepKind, act, rep_kind

LEGS = ("1", "2", "q")

Triple = tuple[str, str, str]


class TruncationError(HallError):
    pass


def _leg(leg) -> str:
    leg = str(leg)
    if leg not in LEGS:
        raise HallError(f"unknown leg {leg!r}; expected one of 1, 2, q")
    return leg


def _project(t: Triple, leg: str) -> str:
    sub, quot, amb = t
    return {"1": sub, "2": amb, "q": quot}[leg]


def pairs_over(amb: str) -> Counter:
    """Counter {(sub, quot, amb): multiplicity} for all subobjects of ``amb``."""
    return Counter({(s, q, amb): m for (s, q), m in backend_of(amb).split(amb).items()})


class HeckeFunction(dict):
    """Finitely supported map from pair triples to Fractions; zero values dropped."""

    def __init__(self, items: Mapping[Triple, object] | Iterable = ()):
        super().__init__()
        for k, c in (items.items() if isinstance(items, Mapping) else items):
            c = Fraction(c)
            v = self.get(k, Fraction(0)) + c
            if v:
                self[k] = v
            else:
                self.pop(k, None)

    def __mul__(self, other: "HeckeFunction") -> "HeckeFunction":
        return HeckeFunction((k, c * other[k]) for k, c in self.items() if k in other)


def pair_delta(sub: str, amb: str) -> HeckeFunction:
    """Indicator of the pairs (A ⊂ B) with A ≅ sub and B ≅ amb."""
    return HeckeFunction(((s, q, a), 1) for (s, q, a) in pairs_over(amb) if s == sub)


def pullback(f: HallElement, leg, window: Iterable[str] | None) -> HeckeFunction:
    """π_r^*(f) on the pairs whose ambient class lies in ``window``."""
    leg = _leg(leg)
    if window is None:
        raise HallError("pullback needs a finite window of ambient classes")
    out = HeckeFunction()
    for amb in window:
        for t in pairs_over(amb):
            c = f[_project(t, leg)]
            if c:
                out[t] = c
    return out


def pushforward(F: HeckeFunction, leg) -> HallElement:
    """Integration along the fibres of π_r, each pair counted with its multiplicity."""
    leg = _leg(leg)
    acc: Counter = Counter()
    for t, c in F.items():
        acc[_project(t, leg)] += c * pairs_over(t[2])[t]
    return HallElement(acc, DELTA)


def fiber_size(key: str, leg) -> int:
    """Number of concrete pairs over ``key`` along π_2 (only leg 2 has finite fibres)."""
    if _leg(leg) != "2":
        raise HallError("only the fibres of π_2 are finite")
    return sum(pairs_over(key).values())


def _extensions(sub: str, quot: str) -> set[str]:
    be = backend_of(sub)
    if sub == be.empty:
        return {quot}
    if quot == be.empty:
        return {sub}
    return set(be.extension_candidates(sub, quot))


def convolution1(f: HallElement, g: HallElement) -> HallElement:
    """π_q*(π_1^*(f) · π_2^*(g))."""
    window = list(g)
    return pushforward(pullback(f, "1", window) * pullback(g, "2", window), "q")


def convolution2(f: HallElement, g: HallElement) -> HallElement:
    """π_2*(π_q^*(f) · π_1^*(g)) = g × f."""
    window = set()
    for a in f:
        for b in g:
            window |= _extensions(b, a)
    return pushforward(pullback(f, "q", window) * pullback(g, "1", window), "2")


def convolution3(f: HallElement, g: HallElement) -> HallElement:
    """π_1*(π_q^*(f) · π_2^*(g))."""
    window = list(g)
    return pushforward(pullback(f, "q", window) * pullback(g, "2", window), "1")


CONVOLUTIONS = {1: convolution1, 2: convolution2, 3: convolution3}


def to_phi(v: HallElement) -> HallElement:
    return v.with_basis(PHI)


def to_delta(v: HallElement) -> HallElement:
    return v.with_basis(DELTA)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Check:
    claim: str
    status: str
    witness: object = None

    def to_json(self) -> dict:
        return {"claim": self.claim, "status": self.status, "witness": self.witness}


def _check(claim: str, ok: bool, witness=None) -> Check:
    return Check(claim, "pass" if ok else "fail", None if ok else witness)


def _classes(backend, max_degree: int) -> tuple[list[str], list[str]]:
    return backend.indecomposables(max_degree), backend.objects(max_degree)


def _degree(backend, key: str) -> int:
    if key == backend.empty:
        return 0
    return backend.length(key) if backend is TREES else GRAPHS.loops(key)


def equivalence_suite(max_degree: int, category: str = "trees") -> list[Check]:
    """Compare the three convolutions with the four actions on basis vectors.

    The degree is vertex count for trees and loop number for graphs; a pair
    (a, B) is tested when deg(a) + deg(B) ≤ max_degree.
    """
    backend = TREES if category == "trees" else GRAPHS
    gens, objs = _classes(backend, max_degree)
    out: list[Check] = []
    for a in gens:
        for b in objs:
            if _degree(backend, a) + _degree(backend, b) > max_degree:
                continue
            da, db = delta(a), delta(b)
            tests = [
                ("convolution2(v, δ_a) = insertion", convolution2(db, da),
                 act(RepKind.INSERTION, a, db)),
                ("convolution2(δ_a, v) = top insertion", convolution2(da, db),
                 act(RepKind.TOP_INSERTION, a, db)),
                ("−κ(convolution1(δ_a, v)) = elimination", -to_phi(convolution1(da, db)),
                 act(RepKind.ELIMINATION, a, to_phi(db))),
                ("−κ(convolution3(δ_a, v)) = top elimination", -to_phi(convolution3(da, db)),
                 act(RepKind.TOP_ELIMINATION, a, to_phi(db))),
            ]
            for claim, lhs, rhs in tests:
                if lhs != rhs:
                    out.append(Check(claim, "fail", {"a": a, "v": b, "lhs": lhs.to_json(),
                                                      "rhs": rhs.to_json()}))
    if not any(c.status == "fail" for c in out):
        out.append(Check(f"convolutions match actions ({category}, degree ≤ {max_degree})", "pass"))
    return out


# ---------------------------------------------------------------------------
# truncations


@dataclass(frozen=True)
class TruncationSet:
    root: str
    mode: str
    members: tuple[str, ...] = field(default=())

    def __contains__(self, key) -> bool:
        return key in self.members

    def __len__(self) -> int:
        return len(self.members)


def truncation_set(m: str, mode: str) -> TruncationSet:
    """Quot(M) (mode ``quot``) or ≤M (mode ``sub``) as sorted class keys."""
    if mode not in ("quot", "sub"):
        raise HallError(f"unknown truncation mode {mode!r}")
    be = backend_of(m)
    split = be.split(m)
    members = {q if mode == "quot" else s for s, q in split}
    return TruncationSet(m, mode, tuple(sorted(members, key=be.sort_key)))


TRUNCATED_KINDS = {
    "quot": (RepKind.ELIMINATION, RepKind.INSERTION),
    "sub": (RepKind.TOP_ELIMINATION, RepKind.TOP_INSERTION),
}


def truncated_act(ts: TruncationSet, kind: RepKind | str, a: str, v: HallElement,
                  strict: bool = True) -> HallElement:
    """The action of X_a on the truncated space attached to ``ts``.

    Elimination-style actions are the full action, which must stay inside the
    span of ``ts``; a support escape raises TruncationError.  Insertion-style
    actions keep only the classes in ``ts``.
    """
    kind = rep_kind(kind)
    if kind not in TRUNCATED_KINDS[ts.mode]:
        raise HallError(f"{kind.value} does not act on a {ts.mode} truncation")
    outside = [k for k in v if k not in ts]
    if outside:
        raise TruncationError(f"vector is supported outside the truncation: {outside}")
    if kind.basis == DELTA:
        # products are homogeneous in K0, so long pairs can never land in ts
        be = backend_of(ts.root)
        top = max(be.length(k) for k in ts.members)
        a = delta(a) if isinstance(a, str) else a
        out = HallElement(basis=DELTA)
        for x, cx in a.items():
            near = HallElement({k: c for k, c in v.items()
                                if be.length(x) + be.length(k) <= top}, v.basis)
            if near:
                out = out + act(kind, delta(x), near, strict=strict) * cx
        return HallElement({k: c for k, c in out.items() if k in ts}, out.basis)
    out = act(kind, a, v, strict=strict)
    if kind.basis == PHI:
        escaped = [k for k in out if k not in ts]
        if escaped:
            raise TruncationError(f"action left the truncation: {escaped}")
        return out
    return HallElement({k: c for k, c in out.items() if k in ts}, out.basis)


def truncated_module_check(ts: TruncationSet, kind: RepKind | str, a: str, b: str,
                           v: HallElement) -> bool:
    kind = rep_kind(kind)
    ab = hall_product(delta(a), delta(b)) - hall_product(delta(b), delta(a))
    lhs = truncated_act(ts, kind, ab, v)
    if kind.side == "left":
        rhs = (truncated_act(ts, kind, a, truncated_act(ts, kind, b, v))
               - truncated_act(ts, kind, b, truncated_act(ts, kind, a, v)))
    else:
        rhs = (truncated_act(ts, kind, b, truncated_act(ts, kind, a, v))
               - truncated_act(ts, kind, a, truncated_act(ts, kind, b, v)))
    return lhs == rhs


def truncated_duality_check(ts: TruncationSet, a: str) -> bool:
    """κ(X_a·φ_B, δ_C) = −κ(φ_B, X_a·δ_C) for all B, C in the truncation."""
    from .hall import kappa
    elim, ins = TRUNCATED_KINDS[ts.mode]
    for b in ts.members:
        left = truncated_act(ts, elim, a, HallElement({b: 1}, PHI))
        for c in ts.members:
            right = truncated_act(ts, ins, a, delta(c))
            if kappa(left, delta(c)) != -kappa(HallElement({b: 1}, PHI), right):
                return False
    return True


def _max_class(v: HallElement) -> str:
    be = v.backend
    return max(v, key=lambda k: (be.length(k), k))


def indecomposability_test(ts: TruncationSet, random_vectors: int = 20,
                           seed: int = 0) -> list[Check]:
    """Certify that X_Z · v = −c_Z φ_∅ for Z of maximal length in supp(v).

    Run on every basis vector of the truncation and on random combinations.
    """
    be = backend_of(ts.root)
    kind = TRUNCATED_KINDS[ts.mode][0]
    rng = random.Random(seed)
    vectors = [HallElement({k: 1}, PHI) for k in ts.members]
    for _ in range(random_vectors):
        size = rng.randint(1, len(ts.members))
        keys = rng.sample(ts.members, size)
        v = HallElement({k: rng.choice([-3, -2, -1, 1, 2, 3]) for k in keys}, PHI)
        if v:
            vectors.append(v)
    out = []
    for v in vectors:
        z = _max_class(v)
        got = truncated_act(ts, kind, z, v, strict=False)
        want = HallElement({be.empty: -v[z]}, PHI)
        out.append(_check(f"X_Z·v = −c_Z φ_∅ for v = {_fmt(v)}", got == want,
                          {"Z": z, "got": got.to_json()}))
    return out


def _fmt(v: HallElement) -> str:
    from .hall import format_element
    return format_element(v)


# ---------------------------------------------------------------------------
# direct sums


def _labeled_parts(a: str, b: str, mode: str) -> list[tuple[str, str, str]]:
    """For every concrete subobject K of A ⊕ B: (class of the ``mode`` side of M,
    the A-part, the B-part) where the parts are A/K_A, B/K_B (quot) or K_A, K_B (sub)."""
    be = backend_of(a)
    out = []
    if be is TREES:
        fa, fb = fo.LabeledForest.from_key(a, "a"), fo.LabeledForest.from_key(b, "b")
        forest = fo.LabeledForest({**fa.parent, **fb.parent})
        va, vb = set(fa.parent), set(fb.parent)
        for cut in fo.admissible_cuts(forest):
            side = cut.root_part(forest) if mode == "quot" else cut.branch_part(forest)
            out.append((forest.key_of(side), forest.key_of(side & va), forest.key_of(side & vb)))
        return out
    ga, gb = fg.graph_from_key(a, "a"), fg.graph_from_key(b, "b")
    g = fg.FeynmanGraph(ga.vertices + gb.vertices, {**ga.half_edges, **gb.half_edges},
                        ga.internal + gb.internal)
    for s in fg.subgraphs(g):
        sa = [c for c in s if c <= set(ga.vertices)]
        sb = [c for c in s if c <= set(gb.vertices)]
        if mode == "quot":
            parts = (fg.contract(g, s), fg.contract(ga, sa), fg.contract(gb, sb))
        else:
            parts = (fg.sub_graph(g, s), fg.sub_graph(ga, sa), fg.sub_graph(gb, sb))
        out.append(tuple(fg.canon_graph(p) for p in parts))
    return out


def direct_sum_diagnostic(a: str, b: str, mode: str = "quot") -> dict:
    """Compare the truncation of A ⊕ B with those of A and B.

    Reports the dimensions, the classes N whose A-part depends on the chosen
    presentation K, and whether the projection built from the first
    presentation of each N inverts the inclusion of the A-truncation.  Only
    the inclusions of truncations of members are asserted.
    """
    be = backend_of(a)
    m = be.join([a, b])
    ts_m, ts_a, ts_b = (truncation_set(x, mode) for x in (m, a, b))
    parts = _labeled_parts(a, b, mode)
    a_parts: dict[str, list[str]] = {}
    for n, pa, _ in parts:
        a_parts.setdefault(n, [])
        if pa not in a_parts[n]:
            a_parts[n].append(pa)
    obstructions = {n: sorted(v) for n, v in a_parts.items() if len(v) > 1}
    pi_a = {n: v[0] for n, v in a_parts.items()}
    bad_roundtrip = [e for e in ts_a.members if pi_a.get(e) != e]
    claims = []
    for n in ts_m.members:
        sub_ts = truncation_set(n, mode)
        ok = set(sub_ts.members) <= set(ts_m.members)
        claims.append(_check(f"truncation of {n} is contained in that of {m}", ok,
                             sorted(set(sub_ts.members) - set(ts_m.members))).to_json())
    # the zero object is not a summand worth counting
    summands = [ts for ts, x in ((ts_a, a), (ts_b, b)) if x != be.empty] or [ts_a]
    same = len(ts_m) == sum(len(ts) for ts in summands)
    reduced = [len(ts_m) - 1, sum(len(ts) - 1 for ts in summands)]
    status = "fail" if any(c["status"] == "fail" for c in claims) else "info"
    return {
        "claim": f"{'Quot' if mode == 'quot' else '≤'}({m}) against the summands {a}, {b}",
        "status": status,
        "witness": {
            "mode": mode,
            "object": m,
            "dim_sum_object": len(ts_m),
            "dim_summands": [len(ts) for ts in summands],
            "dimensions_agree": same,
            "reduced_dims": reduced,
            "obstructions": obstructions,
            "projection_inverts_inclusion": not bad_roundtrip,
            "roundtrip_failures": bad_roundtrip,
            "inclusions": claims,
        },
    }
