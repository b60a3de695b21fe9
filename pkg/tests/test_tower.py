import json

import pytest

from gsclosure.errors import BetaNotTraceZero, BetaZero, CyclicDependency, UnsupportedReducedLevel, VectorTooShort
from gsclosure.finite_field import make_field
from gsclosure.tower import (
    Generator, TowerSpec, classify_index, closure_generator_count, closure_tower, default_beta,
    dependency_order, gs_tower, matching_types,
)


def test_chain_spec():
    spec = gs_tower(3, 4)
    assert [g.id for g in spec.generators] == ["x1", "x2", "x3", "x4"]
    assert spec["x4"].parent == "x3" and spec["x4"].shift == 0


@pytest.mark.parametrize("p,n", [(3, 3), (3, 4), (5, 3), (3, 5)])
def test_full_closure_generator_count(p, n):
    spec = closure_tower(p, n)
    # algebraic generators: x2 plus one u per index of length 1..n-2
    assert len(spec.algebraic) == closure_generator_count(p, n)


def test_closure_aliases_and_parents():
    spec = closure_tower(3, 4)
    assert spec.resolve("x3") == "u[0]"
    assert spec.resolve("x4") == "u[0,0]"
    assert spec.resolve("u[ 2t , t ]") == "u[2*t,t]"
    assert spec["u[t]"].parent == "x2"
    assert spec["u[t,2*t]"].parent == "u[t]"
    assert spec.parent_expr(spec["u[t,2*t]"]) == "u[t]+2*t"


def test_default_beta_and_validation():
    F = make_field(3)
    assert str(default_beta(F)) == "t"
    assert str(closure_tower(5, 3).beta) == str(default_beta(make_field(5)))
    with pytest.raises(BetaZero):
        closure_tower(3, 3, "0")
    with pytest.raises(BetaNotTraceZero):
        closure_tower(3, 3, "1")
    with pytest.raises(UnsupportedReducedLevel):
        closure_tower(3, 4, "t", "reduced")


def test_reduced_model():
    spec = closure_tower(3, 3, "2t", "reduced")
    assert [g.id for g in spec.algebraic] == ["x2", "u[0]", "u[2*t]"]


def test_json_round_trip():
    for spec in (gs_tower(3, 3), closure_tower(3, 4), closure_tower(5, 3, "t", "reduced")):
        data = json.loads(spec.dumps())
        back = TowerSpec.from_json(data)
        assert back.dumps() == spec.dumps()
        assert back.resolve("x3") == spec.resolve("x3")


def test_dependency_order_is_topological_and_canonical():
    spec = closure_tower(3, 4)
    order = dependency_order(spec)
    pos = {g: i for i, g in enumerate(order)}
    for g in spec.algebraic:
        assert pos[g.parent] < pos[g.id]
    assert order[:4] == ["x1", "x2", "u[0]", "u[t]"]


def test_cycle_detection():
    spec = TowerSpec(3, 3, "gs", None, [Generator("x1"), Generator("a", "b"), Generator("b", "a")])
    with pytest.raises(CyclicDependency):
        dependency_order(spec)


def test_restrict_keeps_ancestors():
    spec = closure_tower(3, 5)
    sub = spec.restrict(["u[t,t,2*t]"])
    assert [g.id for g in sub.generators] == ["x1", "x2", "u[t]", "u[t,t]", "u[t,t,2*t]"]


def test_classify_index():
    assert classify_index((0, 0, 0)) == 1
    assert classify_index((0, 0, 1)) == 2
    assert classify_index((1, 0, 0)) == 3
    assert classify_index((0, 1, 0)) == 8
    assert classify_index((0, 1, 1)) == 9
    assert classify_index((1, 1, 0)) == 4
    assert classify_index((1, 1, 1)) == 5
    assert classify_index((0, 1, 0, 0)) == 6
    assert classify_index((0, 1, 0, 1)) == 7
    assert classify_index((0, 0, 1, 0)) == 8  # also a sort-6 vector; priority wins
    # overlapping sorts resolve by priority
    assert 8 in matching_types((0, 1, 0)) and 6 in matching_types((0, 1, 0))
    with pytest.raises(VectorTooShort):
        classify_index((0, 1))


def test_classification_partitions_small_cubes():
    from itertools import product
    for length in (3, 4, 5):
        for c in product((0, 1, 2), repeat=length):
            tag = classify_index(c)
            assert tag in matching_types(c)
