"""Smoke test for the saalg Python module.

Build and install it first:
    pip install --no-build-isolation -e crates/saalg-py
then run with pytest or plain python.
"""

import json

import saalg


DIM4 = "dim 4 over GF(3)\n(x1 y1, y2) = 1\n"


def test_catalog_counts():
    keys = saalg.catalog_keys("gf3", 10)
    assert len(keys) == 26
    assert keys[0] == "A10"


def test_classify_and_iso():
    a = saalg.Algebra.catalog("P8(2,3)", "gf7", ["1"])
    b = saalg.Algebra.catalog("P8(2,3)", "gf7", ["2"])
    c = saalg.Algebra.catalog("P8(2,3)", "gf7", ["6"])
    assert a.dim == 8 and a.field == "GF(7)"
    assert a.nilpotency_class() == 5
    assert a.is_isomorphic(b) == "none"
    assert a.is_isomorphic(c) == "isomorphic"
    assert saalg.Algebra.parse(a.to_json()).classify() == "P8(2,3)[1]"


def test_group_bridge():
    l = saalg.Algebra.parse(DIM4)
    assert l.nilpotency_class() is None
    pres = l.group_presentation()
    assert "[h1(x1), h2(y1)] = h3^3 x^3" in pres
    laws = json.loads(l.group_laws(samples=200, seed=1))
    assert laws["order"] == str(3 ** 11)


def test_oracle_census_and_cli():
    assert saalg.orbit_oracle("gf3")[:2] == (81, 2)
    rep = json.loads(saalg.census("gf3", 3))
    assert rep["counts"] == {"A6": 1, "P6(3,1)": 8}
    code, out, _ = saalg.run_cli(["catalog", "--field", "gf3", "--dim", "10"])
    assert code == 0 and json.loads(out)["non_abelian_total"] == 25
    code, _, _ = saalg.run_cli(["census", "--field", "gf3"])
    assert code == 2


def test_errors():
    try:
        saalg.Algebra.parse("dim 5 over GF(3)\n")
    except saalg.SaalgError as e:
        assert "ParseError" in str(e)
    else:
        raise AssertionError("odd dimension accepted")
    try:
        saalg.Algebra.catalog("P6(3,1)", "gf5").group_presentation()
    except saalg.SaalgError as e:
        assert "WrongField" in str(e)
    else:
        raise AssertionError("group built over GF(5)")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
