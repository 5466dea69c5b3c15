import itertools
from collections import Counter

import pytest

from hallforest import corpus as co
from hallforest import forests as fo
from hallforest.hall import HallElement, HallError, delta, phi
from hallforest.hecke import (TruncationError, convolution1, convolution2, convolution3,
                              direct_sum_diagnostic, equivalence_suite, fiber_size,
                              indecomposability_test, pair_delta, pullback, pushforward,
                              truncated_act, truncated_duality_check, truncated_module_check,
                              truncation_set)
from hallforest.representations import RepKind
from test_forests import antichains, brute_splits
from test_hall import brute_tree_product

DOT, CHAIN2, CHERRY = "{()}", "{(())}", "{(()())}"


def brute_conv1(a: str, b: str) -> HallElement:
    """Σ over concrete subobjects of B isomorphic to A of δ_{B/A}."""
    return HallElement({q: m for (s, q), m in brute_splits(b).items() if s == a})


def brute_conv3(a: str, b: str) -> HallElement:
    return HallElement({s: m for (s, q), m in brute_splits(b).items() if q == a})


SMALL = [k for n in range(4) for k in fo.enumerate_forests(n)]


# -- pullback and pushforward


def test_fiber_over_two_dots():
    lf = fo.LabeledForest.from_key("{(),()}")
    assert fiber_size("{(),()}", 2) == 4 == len(list(antichains(lf)))


def test_push_pull_is_fiber_count():
    for b in SMALL:
        assert pushforward(pullback(delta(b), 2, [b]), 2) == delta(b) * fiber_size(b, 2)


def test_pair_delta_counts_subobjects():
    f = pair_delta(DOT, "{(),(())}")
    assert sum(pushforward(f, 2).values()) == 2


def test_pullback_needs_window_and_valid_leg():
    with pytest.raises(HallError):
        pullback(delta(DOT), 2, None)
    with pytest.raises(HallError):
        pullback(delta(DOT), "x", [DOT])
    with pytest.raises(HallError):
        fiber_size(DOT, 1)


# -- convolutions


def test_convolution1_example():
    assert convolution1(delta(CHAIN2), delta("{(()()),((()))}")) == delta("{(),(()())}")


def test_convolution2_example():
    got = convolution2(delta(CHERRY), delta(DOT))
    assert got == HallElement({"{(()(()))}": 1, "{(),(()())}": 1, "{(()()())}": 3})


def test_convolution3_vanishes_above_degree():
    assert convolution3(delta("{(()),()}"), delta(CHERRY)) == 0
    assert convolution3(delta(CHERRY), delta(DOT)) == 0


@pytest.mark.parametrize("a,b", [(a, b) for a in SMALL for b in SMALL])
def test_convolutions_against_cut_scans(a, b):
    assert convolution1(delta(a), delta(b)) == brute_conv1(a, b)
    assert convolution3(delta(a), delta(b)) == brute_conv3(a, b)
    assert convolution2(delta(a), delta(b)) == brute_tree_product(b, a)


def test_convolutions_are_bilinear():
    f = delta(DOT) * 2 - delta(CHAIN2)
    g = delta(CHERRY) + delta("{(),()}") * 3
    for conv in (convolution1, convolution2, convolution3):
        want = sum((conv(delta(x), delta(y)) * (f[x] * g[y])
                    for x, y in itertools.product(f, g)), HallElement())
        assert conv(f, g) == want


@pytest.mark.parametrize("category,degree", [("trees", 5), ("graphs", 2)])
def test_equivalence_suite_passes(category, degree):
    checks = equivalence_suite(degree, category)
    assert [c.status for c in checks] == ["pass"]


# -- truncations


def test_quot_of_chain2():
    ts = truncation_set(CHAIN2, "quot")
    assert ts.members == ("{}", DOT, CHAIN2)
    assert truncated_act(ts, RepKind.ELIMINATION, DOT, phi(CHAIN2)) == -phi(DOT)


def test_truncated_insertion_keeps_subobjects_only():
    ts = truncation_set("{(),()}", "sub")
    assert CHAIN2 not in ts
    assert truncated_act(ts, RepKind.TOP_INSERTION, DOT, delta(DOT)) == delta("{(),()}") * 2


def test_truncated_act_rejects_outside_vectors_and_wrong_kind():
    ts = truncation_set(CHAIN2, "quot")
    with pytest.raises(TruncationError):
        truncated_act(ts, RepKind.ELIMINATION, DOT, phi(CHERRY))
    with pytest.raises(HallError):
        truncated_act(ts, RepKind.TOP_ELIMINATION, DOT, phi(DOT))
    with pytest.raises(HallError):
        truncation_set(CHAIN2, "sideways")


def test_quot_members_are_quotients():
    for n in range(1, 6):
        for m in fo.enumerate_forests(n):
            quots = {q for (_, q) in brute_splits(m)}
            subs = {s for (s, _) in brute_splits(m)}
            assert set(truncation_set(m, "quot").members) == quots
            assert set(truncation_set(m, "sub").members) == subs


@pytest.mark.parametrize("m", [fo.forest_key([t]) for n in range(1, 5) for t in fo.enumerate_trees(n)])
def test_truncated_modules_and_duality(m):
    gens = [fo.forest_key([t]) for n in range(1, 3) for t in fo.enumerate_trees(n)]
    for mode, (elim, ins) in (("quot", (RepKind.ELIMINATION, RepKind.INSERTION)),
                              ("sub", (RepKind.TOP_ELIMINATION, RepKind.TOP_INSERTION))):
        ts = truncation_set(m, mode)
        for a, b in itertools.product(gens, repeat=2):
            for e in ts.members:
                assert truncated_module_check(ts, elim, a, b, phi(e))
                assert truncated_module_check(ts, ins, a, b, delta(e))
        for a in gens:
            assert truncated_duality_check(ts, a)


@pytest.mark.parametrize("m", [fo.forest_key([t]) for n in range(1, 6) for t in fo.enumerate_trees(n)])
def test_indecomposability_certificate(m):
    for mode in ("quot", "sub"):
        checks = indecomposability_test(truncation_set(m, mode), random_vectors=10, seed=1)
        assert all(c.status == "pass" for c in checks)


def test_certificate_on_graphs():
    for name in ("B2", "X", "Y"):
        ts = truncation_set(co.builtin_key(name), "quot")
        assert all(c.status == "pass" for c in indecomposability_test(ts, 5))


# -- direct sums


def test_direct_sum_of_two_dots():
    report = direct_sum_diagnostic(DOT, DOT)
    w = report["witness"]
    assert report["status"] == "info"
    assert w["dim_sum_object"] == 3
    assert w["dim_summands"] == [2, 2]
    assert not w["dimensions_agree"]
    assert w["reduced_dims"] == [2, 2]


def test_direct_sum_with_empty_agrees():
    w = direct_sum_diagnostic(CHERRY, "{}")["witness"]
    assert w["dimensions_agree"]


def test_direct_sum_sub_mode_and_graphs():
    assert direct_sum_diagnostic(DOT, CHAIN2, "sub")["status"] == "info"
    b2 = co.builtin_key("B2")
    report = direct_sum_diagnostic(b2, b2)
    assert report["status"] == "info"
    assert report["witness"]["dim_sum_object"] == 3


def test_direct_sum_counts_agree_with_cuts():
    w = direct_sum_diagnostic(DOT, CHAIN2)["witness"]
    m = "{(),(())}"
    assert w["dim_sum_object"] == len({q for (_, q) in brute_splits(m)})
    assert Counter(w["dim_summands"]) == Counter([2, 3])
