"""The four module structures of the Hall algebra on itself and on its dual.

Insertion and top-insertion are left and right multiplication by δ_A on the
δ-basis.  Elimination and top-elimination act on the φ-basis and are their
κ-duals with an overall minus sign.  The two "top" actions are right actions:
``act(kind, a, v)`` then means ``v · X_a``.
"""
from __future__ import annotations

import enum
from collections import Counter
from typing import Iterable

from .hall import (DELTA, PHI, HallElement, HallError, antipode, backend_of, delta,
                   hall_bracket, hall_product, kappa)


class RepKind(enum.Enum):
    INSERTION = "insertion"
    TOP_INSERTION = "top_insertion"
    ELIMINATION = "elimination"
    TOP_ELIMINATION = "top_elimination"

    @property
    def basis(self) -> str:
        return DELTA if self in (RepKind.INSERTION, RepKind.TOP_INSERTION) else PHI

    @property
    def side(self) -> str:
        return "left" if self in (RepKind.INSERTION, RepKind.ELIMINATION) else "right"

    @property
    def degree_sign(self) -> int:
        return 1 if self.basis == DELTA else -1


_ALIASES = {
    "ins": RepKind.INSERTION, "insertion": RepKind.INSERTION,
    "top-ins": RepKind.TOP_INSERTION, "top_ins": RepKind.TOP_INSERTION,
    "top_insertion": RepKind.TOP_INSERTION, "top-insertion": RepKind.TOP_INSERTION,
    "elim": RepKind.ELIMINATION, "elimination": RepKind.ELIMINATION,
    "top-elim": RepKind.TOP_ELIMINATION, "top_elim": RepKind.TOP_ELIMINATION,
    "top_elimination": RepKind.TOP_ELIMINATION, "top-elimination": RepKind.TOP_ELIMINATION,
}

# each δ-action paired with its dual φ-action
DUALS = {RepKind.INSERTION: RepKind.ELIMINATION, RepKind.TOP_INSERTION: RepKind.TOP_ELIMINATION}


def rep_kind(kind: RepKind | str) -> RepKind:
    if isinstance(kind, RepKind):
        return kind
    try:
        return _ALIASES[kind]
    except KeyError:
        raise HallError(f"unknown representation {kind!r}") from None


def _generators(a: str | HallElement, strict: bool) -> list[tuple[str, object]]:
    if isinstance(a, str):
        a = delta(a)
    if a and a.basis != DELTA:
        raise HallError("the acting element must be in the delta basis")
    if strict:
        for k in a:
            if not backend_of(k).is_indecomposable(k):
                raise HallError(f"acting object {k} is not indecomposable")
    return list(a.items())


def _eliminate(a: str, b: str, top: bool) -> Counter:
    out: Counter = Counter()
    for (s, q), m in backend_of(b).split(b).items():
        if (q if top else s) == a:
            out[s if top else q] -= m
    return out


def act(kind: RepKind | str, a: str | HallElement, v: HallElement, strict: bool = True) -> HallElement:
    """Action of X_a (a key or a δ-combination of keys) on v.

    With ``strict=False`` decomposable acting objects are allowed; the same
    formulas are applied term by term.
    """
    kind = rep_kind(kind)
    if v and v.basis != kind.basis:
        raise HallError(f"{kind.value} acts on {kind.basis}-basis elements, got {v.basis}")
    gens = _generators(a, strict)
    out = HallElement(basis=kind.basis)
    for k, c in gens:
        if kind is RepKind.INSERTION:
            out = out + hall_product(delta(k), v) * c
        elif kind is RepKind.TOP_INSERTION:
            out = out + hall_product(v, delta(k)) * c
        else:
            top = kind is RepKind.TOP_ELIMINATION
            acc: Counter = Counter()
            for b, cb in v.items():
                for m, n in _eliminate(k, b, top).items():
                    acc[m] += cb * n
            out = out + HallElement(acc, PHI) * c
    return out


def module_axiom_check(kind: RepKind | str, a: str, b: str, v: HallElement) -> bool:
    """act([a,b]) against the commutator of the two actions.

    Left actions: X_[a,b]·v = X_a·(X_b·v) − X_b·(X_a·v).
    Right actions: v·X_[a,b] = (v·X_a)·X_b − (v·X_b)·X_a.
    """
    kind = rep_kind(kind)
    lhs = act(kind, hall_bracket(a, b), v)
    if kind.side == "left":
        rhs = act(kind, a, act(kind, b, v)) - act(kind, b, act(kind, a, v))
    else:
        rhs = act(kind, b, act(kind, a, v)) - act(kind, a, act(kind, b, v))
    return lhs == rhs


def dual_pairing_check(a: str, u: HallElement, v: HallElement,
                       pairs: Iterable[RepKind] = (RepKind.INSERTION, RepKind.TOP_INSERTION)) -> bool:
    """κ(X·u, v) = −κ(u, X·v) for each (insertion-style, elimination-style) pair."""
    for ins in pairs:
        elim = DUALS[rep_kind(ins)]
        if kappa(act(elim, a, u), v) != -kappa(u, act(ins, a, v)):
            return False
    return True


def transpose_intertwiner_check(a: str, u: HallElement) -> bool:
    """(δ_a × u)^t = −(u^t × δ_a) with ^t the antipode."""
    return antipode(hall_product(delta(a), u)) == -hall_product(antipode(u), delta(a))


def decomposable_ideal_quotient(v: HallElement) -> HallElement:
    """Projection killing δ-functions of decomposable objects (∅ is kept)."""
    if v and v.basis != DELTA:
        raise HallError("projection is defined on the delta basis")
    return HallElement({k: c for k, c in v.items()
                        if len(backend_of(k).components(k)) <= 1}, DELTA)


def quotient_descends_check(a: str, v: HallElement) -> bool:
    """Insertion is well defined on the quotient by the decomposable ideal."""
    p = decomposable_ideal_quotient
    return p(act(RepKind.INSERTION, a, v)) == p(act(RepKind.INSERTION, a, p(v)))


def shift_degree(d, k, sign: int):
    if isinstance(d, int):
        return d + sign * k
    acc = Counter(dict(d))
    for key, n in k:
        acc[key] += sign * n
    return tuple(sorted((key, n) for key, n in acc.items() if n))


def homogeneous_degree(v: HallElement):
    degs = {backend_of(k).k0(k) for k in v}
    if len(degs) != 1:
        raise HallError("element is not homogeneous")
    return degs.pop()


def grading_check(kind: RepKind | str, a: str, v: HallElement) -> bool:
    """The result is homogeneous of degree deg(v) + [a] (δ actions) or deg(v) − [a] (φ actions)."""
    kind = rep_kind(kind)
    if not v:
        return True
    d = homogeneous_degree(v)
    want = shift_degree(d, backend_of(a).k0(a), kind.degree_sign)
    out = act(kind, a, v)
    return all(backend_of(k).k0(k) == want for k in out)
