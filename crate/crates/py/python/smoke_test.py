"""Smoke test for the pysnumbers extension module.

Build and install first, e.g. ``maturin develop -m crates/py/Cargo.toml``,
then run ``python crates/py/python/smoke_test.py``.
"""

import math

import pysnumbers as sn


def main():
    s = sn.ExponentSet("finite:1,2")
    assert str(s) == "finite:1,2"
    assert s.contains(2) and not s.contains(3)
    assert 1 in s and s.contains_one()
    assert s == sn.ExponentSet.finite([2, 1, 2])
    assert sn.ExponentSet.geq(2).kind == "GeqThreshold"
    assert not sn.ExponentSet("geq:2").contains_one()
    assert sn.ExponentSet.squarefree().is_subset_of("exclude:4")
    try:
        sn.ExponentSet("finite:")
    except ValueError:
        pass
    else:
        raise AssertionError("empty list should not parse")

    sieve = sn.FactorSieve(100_000)
    assert sieve.factorize(360) == [(2, 3), (3, 2), (5, 1)]
    assert sieve.radical(360) == 30
    assert sieve.count_members(100, s) == 85
    assert sieve.count_members(100, "finite:1") == 61
    assert sieve.count_via_decomposition(100, "finite:1,2") == 85
    assert len(sn.FactorSieve(100).primes()) == 25

    six = 6 / math.pi**2
    r = sn.density_eq4("finite:1", 100_000)
    assert abs(r.value - six) <= r.error_bound <= 2e-5
    assert r.route == "eq4"
    cube = sn.density_eq4(s, 1_000_000)
    assert abs(cube.value - 0.8319073726) < 1e-6
    assert cube.intersects(sn.density_eq11(s, 100_000))
    assert cube.intersects(sn.density_eq8_sum_form(s, 1_000_000))
    assert sn.density("geq:2", 1e-7).value == 0.0
    assert sn.density_zero_branch("geq:2").error_bound == 0.0

    fam = sn.density_per_prime("prefix", 50)
    assert abs(fam.value - 0.7210233) < 5e-7
    assert str(sn.family_set("prefix", 3)) == "upto:3"

    upper, lower, certified = sn.gap_interval(1000)
    assert certified and upper.upper() < lower.lower()

    value, tail = sn.radical_class_sum(s, 6, 10)
    assert abs(value - 1 / 36) < 1e-15 and tail == 0.0

    assert sn.enumerate_powerful(100) == [1, 4, 8, 9, 16, 25, 27, 32, 36, 49, 64, 72, 81, 100]
    assert abs(sn.powerful_main_term(1e6) - 2024.459) < 1e-3
    assert abs(sn.br_main_term(1e6, 1) - six * 1e6) < 1e-6

    rows = sn.verify_density(sieve, "finite:1", [1000, 100_000])
    assert rows[0]["exact_count"] == 608
    assert rows[1]["residual"] == rows[1]["exact_count"] - rows[1]["main_term"]
    cells, ok = sn.audit_lemma1(sieve, [1, 2, 6, 30], [1000, 100_000])
    assert ok and len(cells) == 8
    assert sn.verify_powerful_asymptotic([100])[0]["count"] == 14

    k = sn.lemma_constants()
    assert 57.6826 <= k["k"] <= 57.6827 and k["n"] == 6469693229
    assert len(sn.constants_fingerprint()) == 64
    print("pysnumbers", sn.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
