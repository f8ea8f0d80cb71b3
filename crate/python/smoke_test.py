"""Smoke test for the poisred_py extension.

Build and stage the module next to this script first:

    cargo build --release -p poisred-py
    cp target/release/libpoisred_py.so python/poisred_py.so
    python3 python/smoke_test.py
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import poisred_py as pr  # noqa: E402


def check(label, cond):
    print(f"{'ok  ' if cond else 'FAIL'} {label}")
    return bool(cond)


def main():
    results = []

    so3 = pr.Bivector(["x", "y", "z"], {("x", "y"): "z", ("y", "z"): "x", ("z", "x"): "y"})
    results.append(check("so3 coordinates", so3.coords == ["x", "y", "z"]))
    results.append(check("{x, y} = z", so3.bracket("x", "y") == "z"))
    results.append(check("x^2+y^2+z^2 is a Casimir", so3.bracket("x^2 + y^2 + z^2", "x") == "0"))
    jac = so3.jacobi()
    results.append(check("so3 satisfies Jacobi", jac["schouten"]["kind"] == "SymbolicZero" and jac["triple"] is None))
    results.append(check("rank 2 away from the origin", so3.rank_at([1.0, 0.5, -0.3]) == 2))
    results.append(check("rank 0 at the origin", so3.rank_at([0.0, 0.0, 0.0]) == 0))

    bad = pr.Bivector(["x", "y", "z"], {("x", "y"): "z", ("y", "z"): "x", ("z", "x"): "y + x"})
    results.append(check("perturbed bracket fails Jacobi", bad.jacobi()["triple"] is not None))

    g = pr.Bialgebra(["xi", "eta"], {("xi", "eta"): {"eta": "1"}}, {"eta": {("xi", "eta"): "1"}})
    g.validate()
    dual = g.dual()
    results.append(check("dual basis names", dual.basis == ["xi*", "eta*"]))
    results.append(check("double dual round trip", g.double_dual_roundtrip()))
    results.append(check("[xi, eta] = eta", g.structure_constants()[0][1] == ["0", "1"]))

    broken = pr.Bialgebra(["e1", "e2", "e3"], {("e1", "e2"): {"e3": "1"}, ("e2", "e3"): {"e2": "1"}})
    try:
        broken.validate()
        results.append(check("Jacobi violation rejected", False))
    except ValueError:
        results.append(check("Jacobi violation rejected", True))

    pi = pr.Bivector(["a", "b"], {("a", "b"): "a*b"}, positive=["a"])
    group = pr.PoissonLieGroup(pi, ["a1*a2", "a1*b2 + b1"], ["1", "0"], ["1/a", "-b/a"])
    results.append(check("bivector is multiplicative", group.multiplicative()["max_defect"] < 1e-9))
    results.append(check("left dressing fields", group.dressing_fields("left") == [["0", "b"], ["-b", "0"]]))
    results.append(check("open orbit off b = 0", group.orbit_rank("left", [1.5, 0.7]) == 2))
    results.append(check("fixed points on b = 0", group.orbit_rank("right", [1.5, 0.0]) == 0))

    results.append(check("fixtures listed", "gstar" in pr.fixtures()))
    report, code = pr.run_fixture("gstar", strict=True)
    results.append(check("gstar fixture passes", code == 0 and all(c["verdict"] == "PASS" for c in report["checks"])))
    report, code = pr.run_fixture("so3-perturbed")
    results.append(check("perturbed so3 fixture fails", code == 1 and report["seed"] == 42))

    manifest = """
[chart.c]
coords = ["q", "p"]

[bivector.pi]
chart = "c"
terms = [{ indices = ["q", "p"], coeff = "1" }]

[[check]]
kind = "jacobi"
bivector = "pi"
"""
    report, code = pr.run_manifest(manifest)
    results.append(check("inline manifest runs", code == 0 and report["checks"][0]["verdict"] == "PASS"))

    try:
        pr.Bivector(["x"], {("x", "w"): "1"})
        results.append(check("unknown coordinate rejected", False))
    except ValueError as e:
        results.append(check("unknown coordinate rejected", "w" in str(e)))

    passed = sum(results)
    print(f"{passed}/{len(results)} smoke checks passed")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
