from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gsclosure.errors import DegreeTooSmall, LevelTooSmall, NotOddPrime
from gsclosure.ramification import (
    DEG, OTHER, ZERO, DegreeExpr, deg_D, deg_L, different_from_paths,
    formula_row, genus_closure, hurwitz_check, hurwitz_genus, path_different, ram_path, ratio_bound,
    ratio_limit, written_sum_other,
)
from oracles import GENUS_COEFF, PATH_DIFFERENT_P3_N4_OTHER, RATIO_AT_FLOOR_P3, hurwitz_coefficients


def test_frozen_values():
    assert path_different(3, 4, OTHER) == PATH_DIFFERENT_P3_N4_OTHER == written_sum_other(3, 4)
    assert path_different(3, 5, ZERO) == 16
    assert deg_D(3, 5).a == Fraction(16, 9)
    assert deg_L(3, 5).a == Fraction(160, 27)
    for key, coeff in GENUS_COEFF.items():
        assert genus_closure(*key) == DegreeExpr(coeff, 1)
    for n, r in RATIO_AT_FLOOR_P3.items():
        assert ratio_bound(3, n, 3 ** (n - 1)) == r


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_written_sum_matches_steps(p):
    for n in range(4, 12):
        assert written_sum_other(p, n) == path_different(p, n, OTHER)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_paths_assemble_the_different(p):
    for n in range(5, 10):
        assert different_from_paths(p, n, ZERO) == deg_D(p, n)
        assert different_from_paths(p, n, OTHER) == deg_L(p, n)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_hurwitz_matches_oracle(p):
    for n in range(5, 13):
        expr = hurwitz_genus(p, n)
        assert (expr.a, expr.b) == hurwitz_coefficients(p, n)
        assert hurwitz_check(p, n)


def test_level_guards():
    with pytest.raises(LevelTooSmall):
        deg_D(3, 3)
    with pytest.raises(LevelTooSmall):
        deg_L(3, 4)
    with pytest.raises(LevelTooSmall):
        genus_closure(3, 4)
    with pytest.raises(LevelTooSmall):
        ram_path(3, 3, ZERO)
    with pytest.raises(NotOddPrime):
        deg_D(4, 6)
    with pytest.raises(DegreeTooSmall):
        ratio_bound(3, 5, 80)
    with pytest.raises(ValueError):
        ram_path(3, 5, "nowhere")


@given(st.sampled_from([3, 5, 7]), st.integers(5, 15), st.integers(0, 10 ** 6))
def test_ratio_never_below_p_minus_one(p, n, extra):
    deg = p ** (n - 1) + extra
    r = ratio_bound(p, n, deg)
    assert isinstance(r, Fraction) and r >= p - 1


def test_limits_decrease_to_p_minus_one():
    for p in (3, 5, 7):
        limits = [ratio_bound(p, n).limit for n in range(5, 30)]
        assert all(a > b for a, b in zip(limits, limits[1:]))
        assert all(x > p - 1 for x in limits)
        assert limits[-1] - (p - 1) < Fraction(1, 10 ** 8)
        assert ratio_limit(p) == p - 1


def test_degree_expr_arithmetic():
    e = DEG * 3 - 2
    assert str(e) == "3*deg - 2" and e.at(5) == 13
    assert (e + e) / 2 == e and -e == DegreeExpr(-3, 2)
    assert 1 - DEG == DegreeExpr(-1, 1)
    assert e.to_json() == {"deg_coefficient": "3", "constant": "-2"}


def test_formula_row():
    row = formula_row(3, 5, 81)
    assert row["ratio_at_deg"] == "243/116" and row["genus_coefficient"] == "77/27"
    assert formula_row(3, 4)["ratio_limit"] is None
