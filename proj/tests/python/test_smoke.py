import numpy as np
import pytest

strata = pytest.importorskip("strata")


def test_codim_and_order():
    assert strata.orbit_codim("a^2 a b") == 6
    assert strata.orbit_dim("a^3") == 6
    assert strata.closure_leq("(0) (0) (0)", "(0)^3")
    assert not strata.closure_leq("(0)^3", "(0) (0) (0)")


def test_display_notation():
    assert strata.display("a^2 b") == strata.display("b a^2")


def test_numeric_codim_matches_formula():
    t = "(0)^2 (0) (1)"
    j = strata.jordan_matrix(t)
    assert j.shape == (4, 4)
    assert strata.codim_numeric("sim", j) == strata.orbit_codim(t)
    assert strata.closure_leq(strata.jordan_type_numeric(j), t)
    assert strata.closure_leq(t, strata.jordan_type_numeric(j))


def test_congruence_codim_of_zero():
    z = np.zeros((2, 2), dtype=complex)
    assert strata.codim_numeric("congr", z) == 4
    assert strata.codim_numeric("star", z) == 8


def test_template_and_classify():
    t = strata.arnold_template("a^2")
    assert t["n"] == 2
    c = strata.classify_congruence(np.eye(2, dtype=complex))
    assert c["action"] == "congruence"
    assert len(c["blocks"]) >= 1


def test_survey_and_witness():
    r = strata.survey("a^4", 1e-3, 20, 7)
    assert r["passed"]
    assert r["violations"] == []
    w = strata.witness("(0)^2 (0)^2", "(0)^4")
    assert w["found"]


def test_graph_through_cli():
    g = strata.graph("sim", n=4, nilpotent=True)
    assert len(g["vertices"]) == 5


def test_errors_are_typed():
    with pytest.raises(strata.ParseError):
        strata.orbit_codim("a^^2")
    with pytest.raises(strata.Error):
        strata.codim_numeric("bogus", np.eye(2, dtype=complex))
    code, _, err = strata.run(["graph", "sim", "--n", "99"])
    assert code == 1 and err
