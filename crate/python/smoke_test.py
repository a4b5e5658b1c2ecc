"""Smoke test for the Python bindings: build with `maturin develop` in crates/py."""
import json
from pathlib import Path

import fgl

FIELDS = Path(__file__).resolve().parent.parent / "fields"


def test_qp_laws():
    k = fgl.Field.qp(5, n_digits=32, degree=12)
    assert (k.p, k.e, k.f) == (5, 1, 1)
    gm = fgl.FormalGroupLaw.multiplicative(k)
    assert gm.is_integral()
    # log(1+T) has T^5/5
    assert gm.log_valuations()[5] == "-1"
    lt = fgl.FormalGroupLaw.lubin_tate(k)
    ps = lt.p_series_valuations()
    assert ps[1] == "1" and ps[5] == "0"
    assert all(c["status"] == "pass" for c in lt.certificates())


def test_ramified_field_and_suites():
    text = (FIELDS / "quad-ram.json").read_text()
    k = fgl.Field.from_json(text, n_digits=32, degree=16)
    assert k.e == 2
    rec = k.period_valuations()
    assert rec["ord_different"] == "1/2"
    assert rec["ord_omega0"] == "0"
    report = k.certify("eisenstein-relation")
    assert all(c["status"] == "pass" for c in report["results"])
    chain = k.orient()
    assert chain["integral"] is True


def test_chromatic():
    out = fgl.kn_law(3, 1, degree=10, n_digits=20)
    assert out["p_series"]["homogeneous_degree"] == -2
    assert all(c["status"] == "pass" for c in out["certificates"])


def test_errors():
    try:
        fgl.Field.qp(4)
    except ValueError:
        pass
    else:
        raise AssertionError("non-prime accepted")
    try:
        fgl.Field.qp(3).certify("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown suite accepted")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok {name}")
