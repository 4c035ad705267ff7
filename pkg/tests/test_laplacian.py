from fractions import Fraction
from math import comb

import pytest
import sympy

from braidprob.laplacian import (
    BudgetExceeded,
    WalkCounter,
    arcsine_check,
    compare_with_kesten,
    count_trivial_words,
    counts_up_to,
    kesten_series,
    laplacian_moments,
    raw_count,
)

# frozen from the brute-force oracle (raw_count) and from a sympy series expansion
F2_COUNTS = [1, 0, 4, 0, 28, 0, 232, 0, 2092, 0, 19864, 0, 195352]
B3_COUNTS = [1, 0, 4, 0, 28, 0, 244]


def sympy_kesten(max_degree):
    z = sympy.symbols("z")
    expr = (2 * sympy.sqrt(1 - 12 * z**2) - 1) / (1 - 16 * z**2)
    poly = sympy.series(expr, z, 0, max_degree + 1).removeO()
    return [Fraction(int(c.p), int(c.q)) for c in (poly.coeff(z, k) for k in range(max_degree + 1))]


def test_series_matches_sympy():
    assert list(kesten_series(16).coefficients) == sympy_kesten(16)


def test_series_examples():
    s = kesten_series(6)
    assert (s[0], s[2], s[4], s[6]) == (1, 4, 28, 232)
    assert s.degree == 6
    with pytest.raises(ValueError):
        kesten_series(65)


def test_raw_oracle_agrees():
    assert [raw_count("f2", n) for n in range(9)] == F2_COUNTS[:9]
    assert [raw_count("b3", n) for n in range(7)] == B3_COUNTS


def test_dp_counts():
    assert counts_up_to("f2", 12) == F2_COUNTS
    assert counts_up_to("b3", 6) == B3_COUNTS
    assert count_trivial_words("f2", 2) == 4
    assert count_trivial_words("b3", 5) == 0


def test_b3_dominates_f2():
    b3, f2 = counts_up_to("b3", 10), counts_up_to("f2", 10)
    assert all(b >= f for b, f in zip(b3, f2))
    assert b3[:5] == f2[:5]
    assert all(b3[n] > f2[n] for n in (6, 8, 10))


def test_length_six_excess_is_relator_rotations():
    # 6 cyclic rotations each of the relator and of its inverse
    assert B3_COUNTS[6] - F2_COUNTS[6] == 12


def test_squared_generators_are_free():
    assert counts_up_to("b3", 10, power=2) == counts_up_to("f2", 10)


def test_frontier_conservation():
    walk = WalkCounter("b3")
    for n in range(1, 7):
        walk.step()
        assert walk.total == 4**n and walk.length == n


def test_budgets():
    with pytest.raises(BudgetExceeded):
        count_trivial_words("b3", 15)
    walk = WalkCounter("f2", cap=10)
    walk.step()
    with pytest.raises(BudgetExceeded):
        walk.step()


def test_moments():
    assert laplacian_moments("f2", 4, "half") == [1, 0, 1, 0, Fraction(7, 4)]
    assert laplacian_moments("b3", 0) == [1]
    assert laplacian_moments("b3", 4, "count") == laplacian_moments("f2", 4, "count")
    with pytest.raises(ValueError):
        laplacian_moments("f2", 4, "bogus")


def test_compare_with_kesten():
    report = compare_with_kesten(12)
    assert report["match"] and report["counts"] == F2_COUNTS
    assert report["reference"] == "count"
    assert report["half_normalized"][2] == "1"
    assert compare_with_kesten(0)["match"]
    with pytest.raises(ValueError):
        compare_with_kesten(7)


def test_arcsine():
    assert arcsine_check(12)
    assert counts_up_to("b3", 8, generators=1) == [comb(n, n // 2) if n % 2 == 0 else 0 for n in range(9)]
