import pytest

from gsclosure.errors import NotTraceZero, PreconditionError
from gsclosure.finite_field import make_field
from gsclosure.identities import (
    analyze_difference, checklist, solve_delta, solve_eta, verify_difference_constancy,
    verify_difference_trace_zero, verify_g_shift, verify_lemma_relations, verify_reduced_generation,
    verify_shift_relation,
)


@pytest.mark.parametrize("p", [3, 5])
def test_g_shift(p):
    rep = verify_g_shift(p)
    assert rep.passed and rep.instances == p
    assert rep.details["negative_controls_rejected"] == p
    assert rep.details["points_checked"] >= 10 * p


def test_shift_relations_p3():
    reps = verify_lemma_relations(3, 3)
    assert [r.instances for r in reps] == [2, 6, 18]
    for r in reps:
        assert r.passed
        assert r.details["verdict_disagreements"] == 0
        assert r.details["negative_controls_rejected"] == r.instances


def test_shift_relations_p5_shallow():
    reps = verify_lemma_relations(5, 2)
    assert [r.instances for r in reps] == [4, 20] and all(reps)


def test_shift_relation_domain():
    with pytest.raises(PreconditionError):
        verify_lemma_relations(7, 1)
    with pytest.raises(PreconditionError):
        verify_shift_relation(3, 0)


def test_difference_is_prime_field_constant_on_each_component():
    res = analyze_difference(3, (), "2t", "t")
    assert res.locally_constant and not res.globally_constant
    F = make_field(3)
    assert {v.code for v in res.values} == {F.from_int(i) for i in range(3)}
    assert all(F.is_prime_subfield(v.code) for v in res.values)


@pytest.mark.parametrize("p", [3, 5])
def test_constancy_reports(p):
    assert verify_difference_constancy(p, (0,)).passed
    rep = verify_difference_constancy(p, (1,), name="eta")
    assert rep.passed and rep.details["negative_controls_rejected"] == rep.instances


def test_literal_trace_zero_claim_is_refuted():
    rep = verify_difference_trace_zero(3, (0,))
    assert not rep.passed
    assert rep.details["verdict_disagreements"] == 0
    assert set(rep.details["values_observed"]) == {"0", "1", "2"}


def test_solve_delta_and_eta_raise_outside_kminus():
    with pytest.raises(NotTraceZero):
        solve_delta(3, "t", "2t")
    with pytest.raises(NotTraceZero):
        solve_eta(3, "t", "2t", ("t",))


def test_solve_preconditions():
    for args in (("t", "t"), ("0", "t"), ("1", "t")):
        with pytest.raises(PreconditionError):
            solve_delta(3, *args)
    with pytest.raises(PreconditionError):
        solve_eta(3, "t", "2t", ("t", "t", "t"))


def test_reduced_generation_p3():
    rep = verify_reduced_generation(3)
    assert rep.passed
    assert rep.details["full_points_matched"] == 486
    assert rep.details["negative_control_rejected"]


def test_reduced_generation_other_beta():
    rep = verify_reduced_generation(3, "2t")
    assert rep.passed and rep.details["dependent_generators"] == ["u[t]"]


def test_checklist_order_and_unknown_suite():
    ids = [r.statement_id for r in checklist(3, 1, ("census", "gshift"))]
    assert ids == ["field.norm_over_trace", "g_shift_expansion"]
    with pytest.raises(PreconditionError):
        checklist(3, 1, ("nope",))


def test_sibling_must_share_the_parent():
    """Subtracting u[a,0] instead of u[a1,0] breaks the depth-2 relation."""
    from gsclosure.expr import gen, h, wp
    from gsclosure.funcfield import build_ring
    from gsclosure.tower import closure_tower, u_name

    F = make_field(3)
    t, t2 = F.kminus_codes()[1:]
    spec = closure_tower(3, 4).restrict([u_name(F, (t, t2)), u_name(F, (t2, 0)), u_name(F, (t, 0))])
    rs = build_ring(spec)
    a = F.of_code(t2)
    tail = a ** 2 / (gen("x2") + F.of_code(t))
    rhs = a * h(gen(u_name(F, (t,))))
    good = wp(gen(u_name(F, (t, t2))) - gen(u_name(F, (t, 0))) + tail) - rhs
    bad = wp(gen(u_name(F, (t, t2))) - gen(u_name(F, (t2, 0))) + tail) - rhs
    assert good.symbolic(rs).is_zero()
    assert not bad.symbolic(rs).is_zero()
