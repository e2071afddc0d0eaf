"""Smoke test for the pydwradius extension. Run with `python3 python/smoke_test.py`
or under pytest."""

import json
import math

import pydwradius as dw


def close(a, b, tol):
    return abs(a - b) <= tol


def test_nilpotent_example():
    t = dw.Matrix([[0, 2], [0, 0]])
    assert t.n == 2
    assert close(dw.numerical_radius(t)["value"], 1.0, 1e-8)
    assert close(dw.dw_n(t, "op")["value"] ** 2, 17.0, 1e-6)
    assert close(dw.classical_dw(t, seed=1)["value"] ** 2, 16.0, 1e-4)
    assert dw.compute_md(t) == (17.0, 16.0, 16.0, 15.0)
    thm22 = dw.evaluate_bound("B_THM22", t, norm=dw.Norm("op"))
    assert thm22["satisfied"] and close(thm22["margin"], 0.0, 1e-8)


def test_identity_refutes_upper_bound():
    i = dw.Matrix.identity(2)
    assert close(dw.dw_n(i)["value"], math.sqrt(2.0), 1e-9)
    assert close(dw.refuted_upper_value(i), 1.0, 1e-9)
    rows = {r["bound"]: r for r in dw.evaluate_all(i)}
    assert not rows["B_REFUTED_UP"]["satisfied"]
    assert set(rows) == set(dw.bound_ids())


def test_norms_and_matrices():
    t = dw.Matrix([[1 + 2j, 0.5], [0, -1j]])
    assert str(dw.Norm("sp:3")) == "sp:3"
    assert dw.Norm("w").self_adjoint and not dw.Norm("w").algebra
    assert close(dw.Norm("fro")(t), math.sqrt(1 + 4 + 0.25 + 1), 1e-12)
    assert dw.Matrix.from_json(t.to_json()) == t
    assert t[0, 0] == 1 + 2j
    a = t.abs()
    gram = t.adjoint().tolist()
    assert a.n == 2 and len(gram) == 2
    for norm in ["op", "fro", "tr", "sp:3", "w"]:
        assert close(dw.dw_n(t, norm)["value"], dw.dw_n_imag_form(t, norm)["value"], 1e-8)
    assert close(dw.brute_force_w(t, 20000, 3), dw.numerical_radius(t)["value"], 5e-3)


def test_errors():
    for bad in [lambda: dw.Norm("sp:0.5"), lambda: dw.Matrix([[1, 2]]), lambda: dw.evaluate_bound("B_NOPE", dw.Matrix.identity(2))]:
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")


def test_fuzz_and_examples():
    report = dw.run_fuzz(dims=[2], classes="hermitian,nilpotent", norms="op,tr", count=4, oracle_samples=1000)
    assert report["samples"] == 8 and not report["aborted"]
    assert sum(c["violations"] for c in report["cells"] if c["bound"] != "B_REFUTED_UP") == 0
    checks = dw.paper_examples()
    assert all(c["status"] != "FAIL" for c in checks)
    assert sum(c["status"] == "EXPECTED-DISCREPANCY" for c in checks) == 1
    json.dumps(report)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
