"""Machine checks of the function-field identities behind the closure tower.

Every check is two-sided.  The identity is reduced to normal form in the
relevant relation system (symbolic verdict) and evaluated with plain field
arithmetic at random enumerated split points (numeric verdict); the two
verdicts must agree.  Each identity is also perturbed by a nonzero constant
(negative control), and the perturbed version has to be rejected by both
sides.

Index conventions: a node of the closure is ``x2`` (empty index) or ``u[c]``.
The parent of ``u[c]`` is ``x2`` when ``len(c) == 1`` and ``u[c[:-1]]``
otherwise; its shift is ``c[-1]``.  For ``x2`` the parent is ``x1`` with
shift 0.  The shift relation at depth k concerns nodes with index length
``k - 1`` and their children, so depth 1 is the node ``x2`` and depth 2 the
nodes ``u[a1]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import NotConstant, NotTraceZero, PoleAtInput, PreconditionError
from .expr import Expr, gen, g, h, wp
from .finite_field import FieldCtx, FieldElement, check_norm_trace_identity, make_field
from .funcfield import build_ring
from .points import count_split_points, sample_points, verify_split_values, _tree, split_bases
from .report import Report
from .tower import closure_tower, default_beta, gs_tower, u_name

SAMPLE_POINTS = 10
SUITES = ("gshift", "lemma", "delta", "eta", "reduced", "split", "census")


# --- helpers -----------------------------------------------------------------

def _codes(ctx: FieldCtx, values) -> tuple:
    out = []
    for v in values:
        if isinstance(v, FieldElement):
            out.append(v.code)
        elif isinstance(v, str):
            out.append(ctx.parse_code(v))
        else:
            out.append(v)  # already a code
    return tuple(out)


def _element(ctx: FieldCtx, v) -> FieldElement:
    if isinstance(v, FieldElement):
        return ctx.element(v)
    if isinstance(v, str):
        return ctx.parse(v)
    return ctx.of_code(v)


def _node_expr(ctx: FieldCtx, index: tuple) -> Expr:
    return gen("x2") if not index else gen(u_name(ctx, index))


def _parent_plus_shift(ctx: FieldCtx, index: tuple) -> Expr:
    """parent(node) + shift(node) as an expression."""
    if not index:
        return gen("x1")
    parent = gen("x2") if len(index) == 1 else gen(u_name(ctx, index[:-1]))
    return parent + ctx.of_code(index[-1]) if index[-1] else parent


def _model_for(p: int, index: tuple, children: list):
    """Closure model restricted to the listed children of a node and their ancestors."""
    ctx = make_field(p, 2)
    full = closure_tower(p, len(index) + 3)
    return full.restrict([u_name(ctx, index + (a,)) for a in children])


def _numeric(e: Expr, spec, point) -> FieldElement:
    return e.numeric(spec.ctx, point.assignment, resolve=spec.resolve)


@dataclass
class _Tally:
    symbolic: int = 0
    numeric: int = 0
    points: int = 0
    rejected_controls: int = 0
    disagreements: int = 0

    def into(self, rep: Report):
        rep.details.update({
            "symbolic_passed": self.symbolic,
            "numeric_passed": self.numeric,
            "points_checked": self.points,
            "negative_controls_rejected": self.rejected_controls,
            "verdict_disagreements": self.disagreements,
        })


def _check_zero(rep: Report, tally: _Tally, label: dict, e: Expr, spec, rs, seed: int,
                perturbation=1, points: int = SAMPLE_POINTS):
    """Record one instance of 'e == 0', both sides, plus its perturbed control."""
    ctx = spec.ctx
    rep.instances += 1
    s = e.symbolic(rs)
    sym_ok = s.is_zero()
    bump = ctx.element(perturbation)
    control_sym = (s + rs.const(bump)).is_zero()
    num_ok, control_num, bad_point = True, False, None
    for pt in sample_points(spec, points, seed):
        tally.points += 1
        try:
            v = _numeric(e, spec, pt)
        except PoleAtInput as exc:
            num_ok, bad_point = False, {"point": str(pt), "pole": str(exc)}
            continue
        if v:
            num_ok = False
            bad_point = bad_point or {"point": str(pt), "value": str(v)}
        if not (v + bump):
            control_num = True
    tally.symbolic += sym_ok
    tally.numeric += num_ok
    if sym_ok != num_ok:
        tally.disagreements += 1
    if not control_sym and not control_num:
        tally.rejected_controls += 1
    if not (sym_ok and num_ok):
        rep.fail({**label, "symbolic_zero": sym_ok, "numeric_zero": num_ok, **(bad_point or {})})
    elif control_sym or control_num:
        rep.fail({**label, "reason": "perturbed identity was not rejected"})


# --- shift expansion of g ---------------------------------------------------------

def g_shift_expr(ctx: FieldCtx, alpha: FieldElement) -> Expr:
    """g(x+a) - g(x) - a*h(x) + a^2/wp(x)."""
    x = gen("x1")
    return g(x + alpha) - g(x) - alpha * h(x) + alpha ** 2 / wp(x)


def verify_g_shift(p: int, seed: int = 0) -> Report:
    """g(x+a) = g(x) + a*h(x) - a^2/wp(x) for every trace-zero a, over GF(p^2)(x)."""
    ctx = make_field(p, 2)
    spec = gs_tower(p, 1)
    rs = build_ring(spec)
    rep = Report("g_shift_expansion")
    tally = _Tally()
    for a in ctx.kminus_codes():
        alpha = ctx.of_code(a)
        _check_zero(rep, tally, {"alpha": str(alpha)}, g_shift_expr(ctx, alpha), spec, rs, seed + a)
    tally.into(rep)
    return rep


# --- shift relations between siblings -------------------------------------------------

def shift_relation_expr(ctx: FieldCtx, index: tuple, alpha: int) -> Expr:
    """wp(u[c,a] - u[c,0] + a^2/(parent(c)+shift(c))) - a*h(node c).

    For the empty index the node is x2, the children are u[a] and u[0] = x3,
    and the denominator is x1.
    """
    a = ctx.of_code(alpha)
    left = gen(u_name(ctx, index + (alpha,))) - gen(u_name(ctx, index + (0,)))
    left = left + a ** 2 / _parent_plus_shift(ctx, index)
    return wp(left) - a * h(_node_expr(ctx, index))


def verify_shift_relation(p: int, k: int, seed: int = 0) -> Report:
    """All instances of the sibling shift relation at depth k (node index length k-1)."""
    if k < 1:
        raise PreconditionError("depth must be >= 1")
    ctx = make_field(p, 2)
    kminus = ctx.kminus_codes()
    rep = Report(f"shift_relation.depth{k}")
    tally = _Tally()
    for index in itertools.product(kminus, repeat=k - 1):
        for alpha in kminus[1:]:
            spec = _model_for(p, index, [alpha, 0])
            rs = build_ring(spec)
            label = {"node": "x2" if not index else u_name(ctx, index), "alpha": ctx.fmt(alpha)}
            _check_zero(rep, tally, label, shift_relation_expr(ctx, index, alpha), spec, rs,
                        seed + rep.instances)
    tally.into(rep)
    rep.details["node_index_length"] = k - 1
    return rep


def verify_lemma_relations(p: int, k_max: int = 3, seed: int = 0) -> list:
    """Shift relations at depths 1..k_max; one report per depth.

    Depth 1 is the node x2, depth 2 the nodes u[a1], depth k >= 3 the nodes
    with an index of length k-1.  Cost grows very quickly with k: depth 3 at
    p=3 takes under a second, depth 4 several minutes.
    """
    if p not in (3, 5):
        raise PreconditionError("shift relations are checked for p in {3, 5}")
    return [verify_shift_relation(p, k, seed) for k in range(1, k_max + 1)]


# --- sibling differences (delta and eta) ---------------------------------------------

def difference_expr(ctx: FieldCtx, index: tuple, a: int, b: int) -> Expr:
    """a*u[c,b] - b*u[c,a] - (a-b)*u[c,0] - (b*a^2 - a*b^2)/(parent(c)+shift(c))."""
    A, B = ctx.of_code(a), ctx.of_code(b)
    node = lambda s: gen(u_name(ctx, index + (s,)))
    return (A * node(b) - B * node(a) - (A - B) * node(0)
            - (B * A ** 2 - A * B ** 2) / _parent_plus_shift(ctx, index))


@dataclass
class DifferenceConstant:
    """Outcome of solving for the constant in a sibling-difference relation."""

    index: tuple
    a: FieldElement
    b: FieldElement
    value: FieldElement  # at the canonical reference point
    globally_constant: bool  # normal form is a single field constant
    locally_constant: bool  # E^p == E, i.e. constant on every component
    values: list = field(default_factory=list)  # every value over the reference fiber
    in_kminus: bool = False

    def to_json(self) -> dict:
        return {
            "a": str(self.a), "b": str(self.b),
            "value": str(self.value),
            "globally_constant": self.globally_constant,
            "locally_constant": self.locally_constant,
            "values_over_reference_fiber": [str(v) for v in self.values],
            "in_Kminus": self.in_kminus,
        }


def _check_pair(ctx, a, b):
    kminus = ctx.kminus_codes()
    if a == b:
        raise PreconditionError("the two shifts must differ")
    for v in (a, b):
        if v == 0 or v not in kminus:
            raise PreconditionError(f"{ctx.fmt(v)} is not a nonzero trace-zero element")


def analyze_difference(p: int, index, a, b) -> DifferenceConstant:
    """Normalize the sibling difference and collect its constant values.

    The normal form is required to satisfy E^p = E (otherwise NotConstant).
    The model is a product of components, so E may take a different constant
    on each; all values seen on the fiber over the first split base are
    returned together with the value at the canonically first point.
    """
    ctx = make_field(p, 2)
    index = _codes(ctx, index)
    a, b = _codes(ctx, (a, b))
    _check_pair(ctx, a, b)
    spec = _model_for(p, index, [0, a, b])
    rs = build_ring(spec)
    e = difference_expr(ctx, index, a, b)
    s = e.symbolic(rs)
    const = s.constant_value()
    local = const is not None or (s.frobenius() - s).is_zero()
    if not local:
        raise NotConstant(f"difference for index {index} is not constant: {s}")
    tree = _tree(spec)
    base = next(x for x in split_bases(ctx) if tree.count("x1", x))
    values = sorted({_numeric(e, spec, pt).code for pt in tree.iter_points(base)})
    first = next(tree.iter_points(base))
    value = const if const is not None else _numeric(e, spec, first)
    kminus = set(ctx.kminus_codes())
    return DifferenceConstant(
        index, ctx.of_code(a), ctx.of_code(b), value, const is not None, local,
        [ctx.of_code(v) for v in values], all(v in kminus for v in values),
    )


def solve_delta(p: int, b, c) -> FieldElement:
    """Constant in c*u_b - b*u_c = (c-b)*x3 + (b*c^2 - b^2*c)/x1 + delta.

    Raises NotConstant if the difference is not constant and NotTraceZero
    if any of its values over the reference fiber lies outside K_-.
    """
    res = analyze_difference(p, (), c, b)
    if not res.in_kminus:
        raise NotTraceZero(
            f"delta takes values {[str(v) for v in res.values]} outside K_- (b={res.b}, c={res.a})")
    return res.value


def solve_eta(p: int, alpha, beta, c_prime) -> FieldElement:
    """Constant in alpha*u[c',beta] - beta*u[c',alpha] = (alpha-beta)*u[c',0] + ... + eta.

    The rational term is (beta*alpha^2 - alpha*beta^2)/(parent(c') + shift(c')).
    """
    ctx = make_field(p, 2)
    c_prime = _codes(ctx, c_prime)
    if len(c_prime) > 2:
        raise PreconditionError("c_prime may have length at most 2")
    res = analyze_difference(p, c_prime, alpha, beta)
    if not res.in_kminus:
        raise NotTraceZero(
            f"eta takes values {[str(v) for v in res.values]} outside K_- "
            f"(alpha={res.a}, beta={res.b}, c'={[ctx.fmt(x) for x in c_prime]})")
    return res.value


def _pairs(ctx):
    nz = ctx.kminus_codes()[1:]
    return [(a, b) for a in nz for b in nz if a != b]


def verify_difference_constancy(p: int, lengths=(0,), seed: int = 0, name: str = "delta") -> Report:
    """E^p = E for every sibling difference: E is a GF(p) constant on each component.

    The control perturbs E by the field generator t, which is not in GF(p).
    """
    ctx = make_field(p, 2)
    rep = Report(f"{name}.constant_in_prime_field")
    tally = _Tally()
    t = ctx.gen
    for m in lengths:
        for index in itertools.product(ctx.kminus_codes(), repeat=m):
            for a, b in _pairs(ctx):
                spec = _model_for(p, index, [0, a, b])
                rs = build_ring(spec)
                e = difference_expr(ctx, index, a, b)
                stmt = e ** p - e
                label = {"index": [ctx.fmt(x) for x in index], "a": ctx.fmt(a), "b": ctx.fmt(b)}
                # perturbing E by t changes E^p - E by t^p - t, a nonzero constant
                _check_zero(rep, tally, label, stmt, spec, rs, seed + rep.instances,
                            perturbation=t ** p - t)
    tally.into(rep)
    return rep


def verify_difference_trace_zero(p: int, lengths=(0,), seed: int = 0, name: str = "delta") -> Report:
    """The literal claim: the sibling-difference constant lies in K_-, i.e. wp(E) = 0."""
    ctx = make_field(p, 2)
    rep = Report(f"{name}.constant_in_Kminus")
    tally = _Tally()
    observed = set()
    for m in lengths:
        for index in itertools.product(ctx.kminus_codes(), repeat=m):
            for a, b in _pairs(ctx):
                spec = _model_for(p, index, [0, a, b])
                rs = build_ring(spec)
                e = difference_expr(ctx, index, a, b)
                label = {"index": [ctx.fmt(x) for x in index], "a": ctx.fmt(a), "b": ctx.fmt(b)}
                for pt in sample_points(spec, SAMPLE_POINTS, seed + rep.instances):
                    observed.add(str(_numeric(e, spec, pt)))
                _check_zero(rep, tally, label, wp(e), spec, rs, seed + rep.instances)
    tally.into(rep)
    rep.details["values_observed"] = sorted(observed)
    return rep


# --- reduced generation ----------------------------------------------------------------

def reconstruction_expr(ctx: FieldCtx, beta: int, c: int, delta: FieldElement) -> Expr:
    """u_c recovered from x1, x2, x3, u_beta and the constant delta."""
    B, C = ctx.of_code(beta), ctx.of_code(c)
    ub = gen(u_name(ctx, (beta,)))
    return (C * ub - (C - B) * gen("x3") - (B * C ** 2 - B ** 2 * C) / gen("x1") - delta) / B


def verify_reduced_generation(p: int, beta=None, seed: int = 0) -> Report:
    """x1, x2, x3, u_beta generate the level-3 closure, through the difference constant.

    For each c outside {0, beta} and each constant d in GF(p), the element
    rebuilt from the reduced generators is a root of its defining equation
    (symbolically in the reduced ring).  Numerically, the full-model points
    over every split base are exactly the reduced points extended by these
    rebuilt values, one choice of d per dependent generator.  The control
    replaces d by d + t.
    """
    ctx = make_field(p, 2)
    beta = (default_beta(ctx) if beta is None else _element(ctx, beta)).code
    reduced = closure_tower(p, 3, ctx.of_code(beta), "reduced")
    full = closure_tower(p, 3)
    rs = build_ring(reduced)
    rep = Report("reduced_generation.level3")
    kminus = ctx.kminus_codes()
    dependents = [c for c in kminus if c not in (0, beta)]
    prime = [ctx.element(d) for d in range(p)]
    t = ctx.gen

    sym_ok = control_rejected = True
    for c in dependents:
        target = g(gen("x2") + ctx.of_code(c))
        for d in prime:
            ok = (wp(reconstruction_expr(ctx, beta, c, d)) - target).symbolic(rs).is_zero()
            bad = (wp(reconstruction_expr(ctx, beta, c, d + t)) - target).symbolic(rs).is_zero()
            rep.instances += 1
            if not ok:
                sym_ok = False
                rep.fail({"c": ctx.fmt(c), "d": str(d), "side": "symbolic"})
            if bad:
                control_rejected = False
                rep.fail({"c": ctx.fmt(c), "d": str(d + t), "reason": "perturbed constant accepted"})

    red_tree, full_tree = _tree(reduced), _tree(full)
    num_ok = True
    matched = 0
    ids = [full.u(c) for c in dependents]
    for base in split_bases(ctx):
        expected = set()
        for pt in red_tree.iter_points(base):
            rebuilt = []
            for c in dependents:
                opts = []
                for d in prime:
                    v = reconstruction_expr(ctx, beta, c, d).numeric(ctx, pt.assignment, reduced.resolve)
                    opts.append(v.code)
                rebuilt.append(opts)
                for d in prime:
                    v = reconstruction_expr(ctx, beta, c, d + t).numeric(ctx, pt.assignment, reduced.resolve)
                    if ctx.wp(v.code) == g_value(ctx, pt, c):
                        control_rejected = False
            key = tuple(pt.assignment[gid].code for gid in ("x2", reduced.u(0), reduced.u(beta)))
            for combo in itertools.product(*rebuilt):
                expected.add(key + combo)
        actual = {
            tuple(pt.assignment[gid].code for gid in ("x2", full.u(0), full.u(beta)))
            + tuple(pt.assignment[gid].code for gid in ids)
            for pt in full_tree.iter_points(base)
        }
        matched += len(actual & expected)
        if actual != expected:
            num_ok = False
            rep.fail({"base": ctx.fmt(base), "full_points": len(actual), "rebuilt_points": len(expected)})
    rep.details.update({
        "beta": ctx.fmt(beta),
        "dependent_generators": ids,
        "symbolic_passed": sym_ok,
        "numeric_passed": num_ok,
        "full_points_matched": matched,
        "negative_control_rejected": control_rejected,
        "constants_tried": [str(d) for d in prime],
    })
    return rep


def g_value(ctx: FieldCtx, pt, c: int) -> int:
    x = ctx.add(pt.assignment["x2"].code, c)
    return ctx.div(ctx.mul(ctx.frob(x), x), ctx.wp(x))


# --- split census ---------------------------------------------------------------------

def verify_chain_census(p: int, n_max: int) -> Report:
    """Chain tower: every split base carries p^(n-1) points, total (p^2-p) p^(n-1)."""
    rep = Report("chain_split_census")
    totals = {}
    for n in range(2, n_max + 1):
        spec = gs_tower(p, n)
        census = count_split_points(spec)
        rep.instances += len(census.fibers)
        totals[n] = census.total
        for f in census.fibers:
            if f.size != p ** (n - 1) or not f.split:
                rep.fail({"n": n, "base": str(f.base), "fiber_size": f.size})
        if census.total != (p * p - p) * p ** (n - 1):
            rep.fail({"n": n, "total": census.total})
    rep.details["totals"] = totals
    return rep


# --- aggregate -------------------------------------------------------------------------

def checklist(p: int, k_max: int = 3, suites=("all",), seed: int = 0, beta=None) -> list:
    """Run the selected suites and return their reports in a fixed order."""
    make_field(p, 2)
    chosen = set(SUITES) if "all" in suites else set(suites)
    unknown = chosen - set(SUITES)
    if unknown:
        raise PreconditionError(f"unknown suite(s): {sorted(unknown)}")
    out = []
    if "census" in chosen:
        out.append(check_norm_trace_identity(make_field(p, 2)))
    if "gshift" in chosen:
        out.append(verify_g_shift(p, seed))
    if "lemma" in chosen:
        out.extend(verify_lemma_relations(p, k_max, seed))
    if "delta" in chosen:
        out.append(verify_difference_constancy(p, (0,), seed, "delta"))
        out.append(verify_difference_trace_zero(p, (0,), seed, "delta"))
    if "eta" in chosen:
        out.append(verify_difference_constancy(p, (1,), seed, "eta"))
        out.append(verify_difference_trace_zero(p, (1,), seed, "eta"))
    if "reduced" in chosen:
        out.append(verify_reduced_generation(p, beta, seed))
    if "split" in chosen:
        out.append(verify_chain_census(p, 6 if p == 3 else 4))
        for n in (3, 4):
            out.append(verify_split_values(closure_tower(p, n)))
    return out
