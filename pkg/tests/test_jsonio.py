"""JSON schemas, deterministic report serialization, and file validation."""

import math

import numpy as np
import pytest

from qspeed import jsonio, quantum
from qspeed.errors import InvalidInputError


def test_matrix_round_trip():
    a = np.array([[0.5, 0.25 - 0.75j], [0.25 + 0.75j, 0.5]])
    again = jsonio.matrix_from_json(jsonio.matrix_to_json(a))
    assert np.allclose(again, a, atol=0.0)


def test_matrix_field_errors_name_the_cell():
    good = jsonio.matrix_to_json(np.eye(2))
    bad = {"dim": 2, "entries": [[[1.0, 0.0], [0.0, 0.0]],
                                 [[0.0, 0.0], [1.0]]]}
    with pytest.raises(InvalidInputError, match=r"entries\[1\]\[1\]"):
        jsonio.matrix_from_json(bad)
    with pytest.raises(InvalidInputError, match="dim"):
        jsonio.matrix_from_json({"entries": good["entries"]})
    with pytest.raises(InvalidInputError, match="entries"):
        jsonio.matrix_from_json({"dim": 2})
    with pytest.raises(InvalidInputError, match="rows"):
        jsonio.matrix_from_json({"dim": 3, "entries": good["entries"]})


def test_prob_from_json():
    w, d = jsonio.prob_from_json({"weights": [0.25, 0.75],
                                  "derivative": [1.0, -1.0]})
    assert np.array_equal(w, [0.25, 0.75])
    assert np.array_equal(d, [1.0, -1.0])
    w, d = jsonio.prob_from_json({"weights": [1.0]})
    assert d is None
    with pytest.raises(InvalidInputError, match="length"):
        jsonio.prob_from_json({"weights": [0.5, 0.5], "derivative": [1.0]})


def test_snapshots_from_json():
    rows = jsonio.snapshots_from_json([
        {"theta": 0.0, "weights": [1.0, 0.0]},
        {"theta": 0.5, "weights": [0.5, 0.5]},
    ])
    assert rows[1][0] == 0.5
    with pytest.raises(InvalidInputError, match=r"snapshots\[0\]"):
        jsonio.snapshots_from_json([{"weights": [1.0]}])


def test_povm_round_trip():
    povm = quantum.POVM([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    again = jsonio.povm_from_json(jsonio.povm_to_json(povm))
    for a, b in zip(again.elements, povm.elements):
        assert np.allclose(a, b, atol=0.0)


def test_family_kind_dispatch():
    h = jsonio.matrix_to_json(np.diag([0.5, -0.5]))
    plus = jsonio.matrix_to_json(np.full((2, 2), 0.5))
    fam = jsonio.family_from_json(
        {"kind": "unitary", "hamiltonian": h, "state": plus})
    assert isinstance(fam, quantum.ParametricFamily)
    with pytest.raises(InvalidInputError, match="requires field"):
        jsonio.family_from_json({"kind": "unitary", "hamiltonian": h})
    with pytest.raises(InvalidInputError, match="kind"):
        jsonio.family_from_json({"kind": "adiabatic"})
    with pytest.raises(InvalidInputError, match="at least 3"):
        jsonio.family_from_json(
            {"kind": "table",
             "points": [{"theta": 0.0, "state": plus},
                        {"theta": 0.1, "state": plus}]})


def test_dump_report_formatting():
    report = {
        "name": "check",
        "value": 1.0 / 3.0,
        "flag": True,
        "missing": None,
        "count": 3,
        "edge": math.inf,
        "hole": math.nan,
        "vector": [1.0, 2.0, 3.0],
    }
    text = jsonio.dump_report(report)
    assert '"value": 0.333333333333' in text
    assert '"flag": true' in text
    assert '"missing": null' in text
    assert '"count": 3' in text
    assert '"edge": "inf"' in text
    assert '"hole": "nan"' in text
    assert '"vector": [1, 2, 3]' in text
    assert jsonio.dump_report(report) == text  # deterministic


def test_dump_report_rejects_unknown_types():
    with pytest.raises(InvalidInputError):
        jsonio.dump_report({"x": object()})


def test_report_to_csv_flattens_paths():
    report = {"a": {"b": 0.5, "c": [1.0, 2.0]}, "d": True}
    text = jsonio.report_to_csv(report)
    lines = text.strip().splitlines()
    assert "a.b,0.5" in lines
    assert "a.c[0],1" in lines
    assert "a.c[1],2" in lines
    assert "d,true" in lines


def test_validate_file_roles(tmp_path):
    rho = tmp_path / "rho.json"
    rho.write_text(jsonio.dump_report(jsonio.matrix_to_json(np.eye(2) / 2)))
    role, diags = jsonio.validate_file(str(rho))
    assert role == "density" and diags == []

    prob = tmp_path / "p.json"
    prob.write_text('{"weights": [0.5, 0.6]}')
    role, diags = jsonio.validate_file(str(prob))
    assert role == "prob"
    assert any("sum" in d["message"] for d in diags)

    with pytest.raises(InvalidInputError, match="role"):
        jsonio.validate_file(str(rho), role="tensor")


def test_validate_file_povm_completeness(tmp_path):
    path = tmp_path / "povm.json"
    half = jsonio.matrix_to_json(np.diag([1.0, 0.0]))
    path.write_text(jsonio.dump_report({"elements": [half]}))
    role, diags = jsonio.validate_file(str(path))
    assert role == "povm"
    assert any("completeness" in d["message"] for d in diags)
