"""Smoke test for the aodkit Python extension.

Run after `maturin develop` (or `pip install ./crates/python`), either with
pytest or as a plain script.
"""

import json
import math

import aodkit


def test_catalog():
    assert aodkit.fixture_names() == ["TH", "TS", "G8", "TJC", "GS", "G4", "H8", "F8"]
    names = aodkit.catalog_names()
    assert "mn-eq6" in names and "af2-ex1" in names
    assert aodkit.kind("G8") == "code"
    assert aodkit.kind("af2-ex1") == "family"
    assert aodkit.kind("mn-eq16") == "mn seed"
    assert aodkit.show("G8").startswith("G8 (8x8, k = 4)")


def test_verify_and_construct():
    assert aodkit.verify("G8", "ostbc")["passed"]
    g8 = aodkit.construct1("af2-ex1", "mn-eq6")
    assert json.loads(g8)["order"] == 8
    assert aodkit.verify(g8, "aod")["passed"]
    assert aodkit.classify(g8) == "AOD"
    assert aodkit.verify("mn-eq6", "mn-seed")["passed"]

    ex3 = aodkit.verify("aod2-ex3", "aod")
    assert not ex3["passed"]
    assert {v["condition"] for v in ex3["violations"]} == {"4-0"}
    g4 = aodkit.construct2("aod2-ex3")
    assert aodkit.classify(g4) == "AF"


def test_round_trip():
    doc = aodkit.load_json("G4")
    assert aodkit.load_json(doc) == doc
    assert aodkit.verify(doc, "ostbc") == aodkit.verify("G4", "ostbc")


def test_power():
    rep = aodkit.power_report("G4", ["qpsk", "qpsk@45", "qpsk"])
    assert math.isclose(rep["peak_ave"], 4 / 3 + 2 * math.sqrt(2) / 3, rel_tol=1e-12)
    assert math.isclose(rep["ave_min"], 1.5 + 0.75 * math.sqrt(2), rel_tol=1e-12)
    assert rep["p_o"] == 0.0
    assert rep["type_sum"] == 12.0
    th = aodkit.power_report("TH")
    assert math.isinf(th["ave_min"])
    assert th["p_o"] == 0.5

    table = aodkit.table_report(1).splitlines()
    assert table[0].startswith("code,constellation,")
    assert len(table) == 4


def test_equivalence():
    assert aodkit.block_pattern("G8") == "Q8"
    moved = aodkit.apply_transform("F8", "appendix")
    assert aodkit.verify(moved, "ostbc")["passed"]


def test_simulation():
    a = aodkit.simulate("G4", [0.0, 10.0], 200, 11)
    b = aodkit.simulate("G4", [0.0, 10.0], 200, 11)
    assert a == b
    assert [p["snr_db"] for p in a] == [0.0, 10.0]
    assert a[1]["ber"] <= a[0]["ber"]


def test_errors():
    for bad, exc in [(lambda: aodkit.kind("nope"), KeyError), (lambda: aodkit.verify("G8", "mn-seed"), ValueError)]:
        try:
            bad()
        except exc:
            pass
        else:
            raise AssertionError("expected an error")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok {name}")
