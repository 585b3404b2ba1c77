"""Smoke test for the ffphi Python module.

Build and install first:

    cd crates/python && maturin build --release -o dist && pip install dist/ffphi-*.whl
"""

import os
import sys
import tempfile
from fractions import Fraction

import ffphi


def check(name, cond):
    print(f"{'ok  ' if cond else 'FAIL'} {name}")
    return bool(cond)


def main():
    results = []

    f9 = ffphi.Field("3^2")
    results.append(check("F_9 modulus is x^2 + 1", f9.modulus == [1, 0, 1]))
    results.append(check("F_9 via integer order", ffphi.Field(9) == f9))
    results.append(check("Gauss square over F_9", f9.verify_gauss_square()))

    f5 = ffphi.Field(5)
    results.append(check("sqrt(-1) in F_5", f5.sqrt_minus_one() == 2))
    results.append(check("F_3 has no sqrt(-1)", ffphi.Field(3).sqrt_minus_one() is None))
    results.append(check("phi of a point against the origin", f5.phi([1, 0, 1, 0], [0, 0, 0, 0]) == 1))

    e = ffphi.PointSet.random(ffphi.Field(3), 4, 20, seed=7)
    profile = ffphi.nu_profile(e)
    results.append(check("nu sums to |E|^2", sum(profile) == len(e) ** 2))
    agree = all(ffphi.nu_fourier(e, t) == ffphi.nu_brute(e, t) == profile[t] for t in (1, 2))
    results.append(check("nu: Fourier route equals double loop", agree))
    results.append(check("Plancherel", Fraction(ffphi.plancherel_sum(e)) == Fraction(20, 81)))
    results.append(check("inversion", ffphi.inversion_check(e)))

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "set.txt")
        e.write(path)
        results.append(check("set file round trip", ffphi.PointSet.read(path).points() == e.points()))

    results.append(check("dim-4 bound at q^2 + 1", Fraction(ffphi.bound_thm_main1(10, 3)) == Fraction(40, 9)))
    part2 = Fraction(ffphi.bound_thm_main22(81, 3, 6, "part2"))
    results.append(check("part-2 bound at |E| = 81", part2 == 2187 - 729 - 6561))

    basis = ffphi.max_isotropic_construct(ffphi.Field(3), 4)
    results.append(check("isotropic basis in F_3^4", basis == [[1, 1, 1, 0], [2, 1, 0, 1]]))
    results.append(check("isotropic brute in F_3^4", ffphi.max_isotropic_brute(ffphi.Field(3), 4) == 2))

    s, info = ffphi.sharpness_set(ffphi.Field(3), 6)
    results.append(check("sharpness set size", len(s) == info["expected_size"] == 81))
    results.append(check("sharpness image", ffphi.phi_image(s) == [0]))
    results.append(check("verify_null", ffphi.verify_null(ffphi.Field(3), 6)["pass"]))

    s0 = ffphi.verify_s0_ft(ffphi.Field(3), 2)
    results.append(check("zero-sphere closed form", s0["pass"]))

    rep = ffphi.threshold_experiment(ffphi.Field(3), 4, [10], samples=10, seed=1, method="brute")
    results.append(check("threshold coverage at q^2 + 1", rep["sizes"][0]["covered"] == 10))

    try:
        ffphi.Field(4)
        results.append(check("even characteristic rejected", False))
    except ValueError:
        results.append(check("even characteristic rejected", True))

    failed = results.count(False)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
