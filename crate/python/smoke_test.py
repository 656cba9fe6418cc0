"""Smoke test for the gerbelab Python bindings.

Build and install first, e.g.

    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/gerbelab_py-*.whl
"""

import json

import gerbelab_py as g


def main():
    h = g.LieAlgebra.heisenberg()
    assert h.betti_numbers() == [1, 2, 2, 1]
    assert h.jacobi_holds() and h.nilpotency_class() == 2

    custom = g.LieAlgebra(["x", "y", "z"], {"x,y": {"z": "1"}})
    assert custom.betti_numbers() == h.betti_numbers()

    osc, gram = g.LieAlgebra.double_extension([["1", "0"], ["0", "1"]], [["0", "-1"], ["1", "0"]])
    assert osc.basis == ["f", "e1", "e2", "z"]
    nu, closed = osc.nu(gram)
    assert closed and nu == {"e1,e2,z": ["1"]}
    try:
        g.LieAlgebra.double_extension([["1", "0"], ["0", "1"]], [["0", "0"], ["1", "0"]])
    except ValueError as e:
        assert "not skew" in str(e)
    else:
        raise AssertionError("non-skew derivation accepted")

    assert g.Nerve.tetrahedron_boundary().cohomology(2) == ("Z", 1, [])
    rp2 = g.Nerve.projective_plane()
    assert rp2.cohomology(2)[0] == "Z/2"
    assert rp2.cohomology(1, "Z/2")[1] == 1
    tri = g.Nerve([[0, 1, 2]])
    d = tri.coboundary({"0": "1/2", "1": "0", "2": "3"}, "Q")
    assert d == {"0,1": "-1/2", "0,2": "5/2", "1,2": "3"}, d

    kummer = g.ToralAction.minus_identity(4)
    assert kummer.cr_table() == [("0", 1), ("2", 22), ("4", 1)]
    assert g.ToralAction.hexagonal_rotation().degree_shift(1, 1e-6) in ("1/3", "2/3")

    code, report = g.run_fixture("kummer")
    assert code == 0 and json.loads(report)["payload"]["total_dimension"] == 24
    code, report = g.run_fixture("abelian_noncocycle")
    assert code == 1
    code, _ = g.run("lie betti", "{not json")
    assert code == 2
    assert len(g.fixtures()) >= 6
    assert g.rational("6/4") == "3/2"
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
