import json

import pytest

from hallforest.verify import SUITES, run_suite, tree_count_recurrence


@pytest.mark.parametrize("suite", SUITES)
def test_tree_suites_pass_at_low_degree(suite):
    report = run_suite(suite, "trees", 4, seed=0)
    assert report.ok, report.to_text()


@pytest.mark.parametrize("suite", [s for s in SUITES if s != "truncation"])
def test_graph_suites_pass_at_two_loops(suite):
    report = run_suite(suite, "graphs", 2, seed=0)
    assert report.ok, report.to_text()


def test_recurrence_oracle_matches_known_counts():
    # rooted unlabeled trees, n = 1..10
    assert tree_count_recurrence(10) == [1, 1, 2, 4, 9, 20, 48, 115, 286, 719]


def test_report_formats():
    report = run_suite("canonical", "trees", 3, seed=7)
    doc = json.loads(json.dumps(report.to_json(timing=True)))
    assert doc["status"] == "pass" and doc["seed"] == 7 and "wall_time" in doc
    assert "wall time" not in report.to_text()
    assert report.to_text(timing=True).splitlines()[-1].startswith("  wall time")


def test_runs_are_reproducible():
    a = run_suite("category-axioms", "trees", 4, seed=3).to_json()
    b = run_suite("category-axioms", "trees", 4, seed=3).to_json()
    assert a == b


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("nonsense", "trees", 3)
