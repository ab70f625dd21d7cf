import json
import pathlib

import pytest

import deforma

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def load(name):
    return json.loads((DATA / name).read_text())


def test_dgla_fixtures():
    assert deforma.check_dgla(load("valid.json"))["ok"]
    assert not deforma.check_dgla(load("invalid.json"))["ok"]


def test_cone_of_identity():
    c = deforma.cone(load("sl2-id.json"), 4)
    assert max(b["arity"] for b in c["brackets"]) == 3
    assert deforma.check_linfty(c, 4)["ok"]
    assert deforma.certify_quasi_abelian(c)["verdict"] == "YES"


def test_sl2_is_not_quasi_abelian():
    assert deforma.certify_quasi_abelian(load("valid.json"))["verdict"] == "NO"


def test_p1_cohomology():
    t = deforma.toric_cohomology(deforma.builtin_cover("P1"), "theta", 0, 1)
    assert t["dims"] == {0: 3}
    assert t["stable"]
    assert deforma.toric_cohomology(load("p2.json"), "theta", 0, 1)["dims"] == {0: 8}


def test_btt_p1():
    r = deforma.btt(deforma.builtin_cover("P1"), 1)
    assert r["ok"]
    assert r["unobstructed"]
    assert r["verdict"]["verdict"] == "NO"


def test_theorem52():
    r = deforma.theorem52(load("sl2-cover.json"), "k[t]/(t^3)", 20, 3)
    assert r["samples"] == 20
    assert r["disagreements"] == 0


def test_input_errors():
    bad = load("valid.json")
    bad["bracket"][0]["out"] = {"Q": "1"}
    with pytest.raises(deforma.InputError, match="unknown basis label"):
        deforma.check_dgla(bad)
    with pytest.raises(ValueError):
        deforma.check_linfty({"components": {"0": ["a", "a"]}})
