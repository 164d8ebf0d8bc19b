"""Smoke test for the compiled module: `maturin develop` then run this file."""

import json

import a1lab_py as a1


def main():
    f = a1.Field(3, 4)
    assert f.order == 81
    for a in range(1, f.order):
        assert f.mul(a, f.inv(a)) == 1
        assert f.pth_root(f.frobenius(a)) == a

    b = a1.Boundary(f, "random", seed=1)
    assert len(b.sigma) == 2
    curve = a1.Curve(b, 7, 1, seed=2)
    curve.contact()
    x = curve.eval(5)
    assert b.delta_at(x) != 0

    fam = a1.Family(b, 5, seed=3)
    fam.gradient_check()
    for seed in range(5):
        fam.fiber(seed).psi_pullback()
        fam.fiber(seed, degenerate=True).psi_pullback()
    general = fam.general_fiber(seed=4)
    assert general is not None
    assert general.cusp_count() == a1.expected_cusp_count(3, 5)

    a1.delta_identity(5, 9)
    passed, failed = a1.selftest()
    assert failed == 0 and passed > 0

    report = json.loads(a1.cusp_census([2, 3], d_max=5, trials=3, ext_bits=8))
    assert report["summary"]["identity_failures"] == 0

    try:
        a1.Boundary(a1.Field(3, 2), [2, 1])
    except a1.A1labError as e:
        assert "BadNormalization" in str(e)
    else:
        raise AssertionError("bad sigma accepted")

    print("smoke test ok:", f.header(), b.encode())


if __name__ == "__main__":
    main()
