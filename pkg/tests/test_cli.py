import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hallforest import cache
from hallforest import corpus as co
from hallforest import forests as fo
from hallforest.cli import main
from hallforest.hall import PHI, HallElement, delta, format_element, hall_product
from hallforest.parsing import ParseError, parse


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


# -- parser


@pytest.mark.parametrize("text,col", [
    ("((()", 4),
    ("1/0", 3),
    ("{()} + ", 8),
    ("{()} $ {()}", 6),
    ("Z3", 1),
    ("{()} + B2", 6),
])
def test_parse_error_columns(text, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.column == col


def test_parse_arithmetic():
    assert parse("2*{()} - 1/2*(())") == delta("{()}", 2) - delta("{(())}", Fraction(1, 2))
    assert parse("{()} * {()}") == hall_product(delta("{()}"), delta("{()}"))
    assert parse("() × ()") == parse("{()}*{()}")
    assert parse("3", category="trees") == delta("{}", 3)
    assert parse("B2").backend.name == "graphs"
    with pytest.raises(ParseError):
        parse("3")
    with pytest.raises(ParseError):
        parse("{()}", category="graphs")


def test_graph_document(tmp_path):
    path = tmp_path / "t3.json"
    path.write_text(json.dumps(co.triangle().to_json()))
    assert parse(f"@{path}") == delta(co.builtin_key("T3"))
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ParseError):
        parse(f"@{bad}")


def forest_elements():
    keys = [k for n in range(4) for k in fo.enumerate_forests(n)]
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(st.sampled_from(keys), coeffs, min_size=1, max_size=4).map(HallElement)


@settings(max_examples=100, deadline=None)
@given(forest_elements())
def test_formatted_output_parses_back(v):
    text = format_element(v)
    assert parse(text, category="trees") == v if v else text == "0"


# -- verbs


def test_golden_bracket(capsys):
    code, out, _ = run(capsys, "bracket", "--category", "trees", "{(()())}", "{()}")
    assert code == 0
    assert out == "1*{((()()))} - 1*{(()(()))} - 3*{(()()())}"


def test_bracket_json_and_reparse(capsys):
    code, out, _ = run(capsys, "bracket", "--format", "json", "{(()())}", "{()}")
    doc = json.loads(out)
    assert code == 0 and doc["basis"] == "delta"
    assert HallElement.from_json(doc) == parse("1*{((()()))} - 1*{(()(()))} - 3*{(()()())}")


def test_graph_bracket_and_prelie(capsys):
    _, hall, _ = run(capsys, "bracket", "B2", "T3")
    _, pre, _ = run(capsys, "prelie", "--bracket", "B2", "T3")
    assert parse(hall) == parse("X - 2*Y")
    assert parse(pre) == parse("6*X - 12*Y")


def test_bracket_rejects_decomposables(capsys):
    code, _, err = run(capsys, "bracket", "{(),()}", "{()}")
    assert code == 2 and "indecomposable" in err


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "canon", "((()")
    assert code == 2 and "column 4" in err


def test_usage_error_exit_code(capsys):
    assert run(capsys, "act", "--rep", "nope", "--by", "()", "--on", "()")[0] == 2
    code, _, err = run(capsys, "act", "--rep", "ins", "--side", "right", "--by", "()", "--on", "()")
    assert code == 2 and "left" in err


def test_actions(capsys):
    _, out, _ = run(capsys, "act", "--rep", "top-ins", "--by", "(()())", "--on", "()")
    assert parse(out) == parse("(()(())) + {(),(()())} + 3*(()()())")
    _, out, _ = run(capsys, "act", "--rep", "top-elim", "--by", "(())", "--on", "{(()()),((()))}")
    assert parse(out, basis=PHI) == parse("-2*{(),((()))} - {(),(()())}", basis=PHI)


def test_hopf_verbs(capsys):
    assert run(capsys, "antipode", "{(),()}")[1] == "1*{(())} + 1*{(),()}"
    assert run(capsys, "counit", "3 + {()}", "--category", "trees")[1] == "3"
    assert run(capsys, "product", "()", "()", "()")[1] == format_element(parse("()*()*()"))
    assert "1*{()}⊗{()}" in run(capsys, "coproduct", "{(),()}")[1]
    assert run(capsys, "kappa", "2*()", "()")[1] == "2"


def test_hecke_and_truncation_verbs(capsys):
    _, out, _ = run(capsys, "hecke-conv", "--which", "1", "(())", "{(()()),((()))}")
    assert out == "1*{(),(()())}"
    _, out, _ = run(capsys, "truncate", "--mode", "quot", "--object", "(())", "--list")
    assert out.splitlines() == ["{}", "{()}", "{(())}"]
    code, out, _ = run(capsys, "act-trunc", "--mode", "quot", "--object", "(()())", "--certify")
    assert code == 0 and "[pass]" in out and "[fail]" not in out
    _, out, _ = run(capsys, "act-trunc", "--mode", "quot", "--object", "(())",
                    "--rep", "elim", "--by", "()", "--on", "(())")
    assert out == "-1*{()}"


def test_diagnose_direct_sum(capsys):
    code, out, _ = run(capsys, "diagnose-direct-sum", "()", "()")
    assert code == 0 and out.startswith("[info]")
    assert "dim 3 vs summands 2 + 2 (differ)" in out
    code, out, _ = run(capsys, "diagnose-direct-sum", "--format", "json", "()", "()")
    assert json.loads(out)["status"] == "info"


def test_verify_and_k0(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "hopf", "--category", "trees", "--max-degree", "3")
    assert code == 0 and ": pass" in out.splitlines()[0]
    code, out, _ = run(capsys, "verify", "--suite", "canonical", "--format", "json", "--max-degree", "3")
    assert code == 0 and json.loads(out)["status"] == "pass"
    _, out, _ = run(capsys, "k0", "X")
    assert out.endswith("1*[2:11:020] + 1*[3:111:011010]")


def test_output_is_deterministic(capsys):
    first = run(capsys, "product", "(()())", "{(),(())}")
    second = run(capsys, "product", "{(),(())}", "(()())")
    again = run(capsys, "product", "(()())", "{(),(())}")
    assert first == again
    assert first[1] != second[1]


def test_cache_directory(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cache.ENV, str(tmp_path))
    assert run(capsys, "product", "X", "T3")[0] == 0
    saved = json.loads((tmp_path / "graph_splits.json").read_text())
    assert saved
    assert run(capsys, "product", "X", "T3")[0] == 0


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hallforest.cli", "canon", "{(()),()}"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "1*{(),(())}"
    proc = subprocess.run([sys.executable, "-m", "hallforest.cli", "canon", "(("],
                          capture_output=True, text=True)
    assert proc.returncode == 2
