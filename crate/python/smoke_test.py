"""Smoke test for the Python bindings.

Build and install first:
    pip install --no-build-isolation -e crates/python
then run:
    python python/smoke_test.py
"""

import json

import vertex_induce as vi


def main():
    alg = vi.Algebra.heisenberg(6)
    alg.check_axioms()
    assert "a(-1)" in alg.labels()

    fock = vi.Module.fock(alg, "1/2", "2")
    assert fock.graded_dims() == [("0", 1), ("1", 1), ("2", 2)]
    # the zero mode of a(-1) acts on the vacuum by the eigenvalue
    assert fock.act("a(-1)", "0", "v") == [("v", "1/2")]

    zhu = vi.ZhuAlgebra(alg, 4)
    assert zhu.filtered_dims() == [1, 2, 3, 4, 5]
    assert zhu.is_commutative() and zhu.verify() == []
    assert vi.ZhuAlgebra(alg, 3, twist="parity").dim == 1

    induced = vi.InducedModule(fock, "2")
    assert [n for _, n in induced.graded_dims()] == [1, 1, 2]
    assert induced.embeds(1)
    assert induced.maps_isomorphically(2)

    twisted = vi.InducedModule(vi.Module.fock(alg, None, "3/2"), "3/2", twist="parity")
    assert twisted.graded_dims() == [("0", 1), ("1/2", 1), ("1", 1), ("3/2", 2)]

    code, text = vi.run("induce", heisenberg=6, fock="1/2", structured=True)
    assert code == 0, text
    report = json.loads(text)
    assert all(r["status"] != "fail" for r in report["records"])

    try:
        vi.InducedModule(vi.Module.fock(vi.Algebra.heisenberg(3), "1/2", "4"), "4")
    except vi.PrecisionError:
        pass
    else:
        raise AssertionError("expected a precision error")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
