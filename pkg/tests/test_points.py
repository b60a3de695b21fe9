import pytest

from gsclosure.errors import NoSplitFiber, PoleAtInput
from gsclosure.finite_field import make_field
from gsclosure.points import (
    census_csv, count_split_points, degree_via_fiber, enumerate_fiber, next_coordinate, sample_points,
    verify_split_values,
)
from gsclosure.tower import closure_tower, gs_tower
from oracles import CHAIN_TOTALS_P3, FULL_UPPER_BOUND_P3, REDUCED_TOTALS, chain_points


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chain_points_match_exhaustive_search(n):
    spec = gs_tower(3, n)
    ours = set()
    for f in count_split_points(spec).fibers:
        for pt in f.points:
            ours.add(tuple(pt[f"x{i}"].coeffs for i in range(1, n + 1)))
    theirs = {tuple((x.a, x.b) for x in pt) for pt in chain_points(3, n)}
    assert ours == theirs


@pytest.mark.parametrize("n,total", sorted(CHAIN_TOTALS_P3.items()))
def test_chain_totals(n, total):
    census = count_split_points(gs_tower(3, n))
    assert census.total == total
    assert all(f.size == 3 ** (n - 1) and f.split for f in census.fibers)
    assert census.summary()["degree"] == {"exact": 3 ** (n - 1)}


@pytest.mark.parametrize("p", [3, 5])
def test_reduced_closure(p):
    fiber, total = REDUCED_TOTALS[p]
    census = count_split_points(closure_tower(p, 3, None, "reduced"))
    assert census.total == total
    assert {f.size for f in census.fibers} == {fiber}
    s = census.summary()
    assert s["bound"] == total and s["bound_met"]


@pytest.mark.parametrize("n,bound", sorted(FULL_UPPER_BOUND_P3.items()))
def test_full_closure_degree_is_upper_bound(n, bound):
    assert degree_via_fiber(closure_tower(3, n)) == {"upper_bound": bound}


def test_kminus_bases_are_degenerate():
    spec = gs_tower(3, 3)
    for b in make_field(3).kminus_codes():
        rep = enumerate_fiber(spec, make_field(3).of_code(b))
        assert rep.size == 0 and not rep.split and rep.points == []


def test_next_coordinate():
    F = make_field(3)
    ys = next_coordinate(F.one)
    assert len(ys) == 3
    with pytest.raises(PoleAtInput):
        next_coordinate(F.gen)


def test_points_satisfy_relations_and_order_is_canonical():
    spec = closure_tower(3, 3)
    f = enumerate_fiber(spec, "1+t")
    pts = f.points
    assert len(pts) == f.size == 81
    assert all(pt.satisfies(spec) for pt in pts)
    keys = [tuple(v.code for v in pt.assignment.values()) for pt in pts]
    assert keys == sorted(keys)


def test_parallel_matches_serial():
    spec = closure_tower(3, 3, "t", "reduced")
    assert census_csv(count_split_points(spec, parallel=True)) == census_csv(count_split_points(spec))


def test_sampling_is_seeded():
    spec = closure_tower(3, 4)
    a = [str(p) for p in sample_points(spec, 5, seed=3)]
    b = [str(p) for p in sample_points(spec, 5, seed=3)]
    assert a == b
    assert all(p.satisfies(spec) for p in sample_points(spec, 5, seed=3))


def test_split_values_report():
    rep = verify_split_values(closure_tower(3, 3))
    assert rep.passed and rep.instances == 486


def test_no_split_fiber():
    spec = gs_tower(3, 1)
    # level 1 has no algebraic generators: every base is trivially split
    assert degree_via_fiber(spec) == {"exact": 1}
    with pytest.raises(NoSplitFiber):
        degree_via_fiber(spec, fibers=[])
