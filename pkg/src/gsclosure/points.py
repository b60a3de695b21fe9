"""Rational points of the affine tower models over GF(p^2).

Every algebraic generator has exactly one parent, so the solutions over a
fixed base value form a tree: the choices for the children of a generator
depend only on that generator's value.  Fiber sizes and splitting flags are
therefore computed by memoized recursion over (generator, value) pairs;
explicit point lists are produced lazily in canonical order.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

from .errors import NoSplitFiber
from .finite_field import FieldCtx, FieldElement, eval_wgh
from .report import Report
from .tower import CLOSURE_REDUCED, GS, TowerSpec, dependency_order


def g_code(ctx: FieldCtx, x: int) -> int | None:
    """g(x) on codes; None at a pole."""
    den = ctx.wp(x)
    if den == 0:
        return None
    return ctx.div(ctx.mul(ctx.frob(x), x), den)


def roots_code(ctx: FieldCtx, parent_value: int, shift: int) -> tuple:
    """Codes y with y^p + y = g(parent_value + shift); empty at a pole."""
    w = g_code(ctx, ctx.add(parent_value, shift))
    if w is None:
        return ()
    return ctx.wp_preimages().get(w, ())


def next_coordinate(x: FieldElement) -> list:
    """All y in GF(p^2) with y^p + y = g(x)."""
    ctx = x.ctx
    w = eval_wgh(x, "g")  # raises PoleAtInput for x in K_-
    return [ctx.of_code(c) for c in ctx.wp_preimages().get(w.code, ())]


@dataclass
class PointRecord:
    assignment: dict  # generator id -> FieldElement

    def __getitem__(self, gid):
        return self.assignment[gid]

    def codes(self) -> dict:
        return {k: v.code for k, v in self.assignment.items()}

    def satisfies(self, spec: TowerSpec) -> bool:
        ctx = spec.ctx
        for g in spec.algebraic:
            w = g_code(ctx, ctx.add(self.assignment[g.parent].code, g.shift))
            if w is None or ctx.wp(self.assignment[g.id].code) != w:
                return False
        return True

    def __str__(self):
        return "{" + ", ".join(f"{k}={v}" for k, v in self.assignment.items()) + "}"


class _Tree:
    """Children lists and memoized subtree statistics for a spec."""

    def __init__(self, spec: TowerSpec):
        self.spec = spec
        self.ctx = spec.ctx
        self.order = dependency_order(spec)
        self.children = {gid: [] for gid in self.order}
        for gid in self.order:
            parent = spec[gid].parent
            if parent is not None:
                self.children[parent].append(gid)
        self._count = {}
        self._kminus = frozenset(self.ctx.kminus_codes())

    def count(self, gid: str, value: int) -> int:
        """Number of completions of the subtree below gid given its value."""
        key = (gid, value)
        hit = self._count.get(key)
        if hit is not None:
            return hit
        total = 1
        for child in self.children[gid]:
            s = 0
            for y in roots_code(self.ctx, value, self.spec[child].shift):
                s += self.count(child, y)
            total *= s
            if total == 0:
                break
        self._count[key] = total
        return total

    def reachable(self, base: int) -> dict:
        """gid -> set of values occurring in at least one point over base."""
        out = {gid: set() for gid in self.order}
        if self.count("x1", base) == 0:
            return out
        out["x1"].add(base)
        for gid in self.order:
            for child in self.children[gid]:
                shift = self.spec[child].shift
                for v in out[gid]:
                    for y in roots_code(self.ctx, v, shift):
                        if self.count(child, y):
                            out[child].add(y)
        return out

    def full_branching(self, base: int) -> bool:
        """Every reachable generator value has exactly p roots for each child."""
        p = self.ctx.p
        seen = set()
        stack = [("x1", base)]
        while stack:
            gid, v = stack.pop()
            if (gid, v) in seen:
                continue
            seen.add((gid, v))
            for child in self.children[gid]:
                rts = roots_code(self.ctx, v, self.spec[child].shift)
                if len(rts) != p:
                    return False
                stack.extend((child, y) for y in rts)
        return True

    def iter_points(self, base: int):
        order = self.order
        ctx = self.ctx
        spec = self.spec
        n = len(order)
        values = {}

        def rec(i):
            if i == n:
                yield PointRecord({gid: ctx.of_code(values[gid]) for gid in order})
                return
            gid = order[i]
            g = spec[gid]
            for y in roots_code(ctx, values[g.parent], g.shift):
                values[gid] = y
                yield from rec(i + 1)
            values.pop(gid, None)

        if self.count("x1", base) == 0:
            return
        values["x1"] = base
        yield from rec(1)

    def random_point(self, base: int, rng: random.Random) -> PointRecord:
        values = {"x1": base}
        for gid in self.order[1:]:
            g = self.spec[gid]
            opts = [y for y in roots_code(self.ctx, values[g.parent], g.shift) if self.count(gid, y)]
            values[gid] = rng.choice(opts)
        return PointRecord({gid: self.ctx.of_code(values[gid]) for gid in self.order})


_TREES: dict = {}


def _tree(spec: TowerSpec) -> _Tree:
    key = id(spec)
    hit = _TREES.get(key)
    if hit is None or hit.spec is not spec:
        hit = _Tree(spec)
        _TREES[key] = hit
    return hit


@dataclass
class FiberReport:
    base: FieldElement
    size: int
    split: bool
    all_values_outside_Kminus: bool
    spec: TowerSpec = field(repr=False)

    def iter_points(self):
        return _tree(self.spec).iter_points(self.base.code)

    @cached_property
    def points(self) -> list:
        return list(self.iter_points())

    def row(self) -> dict:
        return {
            "base": str(self.base),
            "fiber_size": self.size,
            "split": self.split,
            "values_outside_Kminus": self.all_values_outside_Kminus,
        }


def enumerate_fiber(spec: TowerSpec, xi) -> FiberReport:
    """Solutions over x1 = xi; degenerate bases give empty, non-split reports."""
    ctx = spec.ctx
    xi = ctx.element(xi)
    tree = _tree(spec)
    size = tree.count("x1", xi.code)
    algebraic = spec.algebraic
    expected = spec.p ** len(algebraic)
    split = size == expected and size > 0 and tree.full_branching(xi.code)
    if size:
        reach = tree.reachable(xi.code)
        kminus = tree._kminus
        outside = all(not (reach[g.id] & kminus) for g in algebraic)
    else:
        outside = False
    return FiberReport(xi, size, split, outside, spec)


@dataclass
class Census:
    spec: TowerSpec
    fibers: list
    total: int

    @property
    def degree(self) -> dict:
        return degree_via_fiber(self.spec, fibers=self.fibers)

    def summary(self) -> dict:
        deg = self.degree
        d = deg.get("exact", deg.get("upper_bound"))
        p = self.spec.p
        bound = (p * p - p) * d
        return {
            "total": self.total,
            "degree": deg,
            "bound": bound,
            "bound_met": self.total >= bound,
        }


def _fiber_worker(args):
    spec, code = args
    return enumerate_fiber(spec, spec.ctx.of_code(code))


def split_bases(ctx: FieldCtx) -> list:
    kminus = set(ctx.kminus_codes())
    return [c for c in range(ctx.q) if c not in kminus]


def count_split_points(spec: TowerSpec, parallel: bool = False) -> Census:
    """Points over every base xi outside K_-, in canonical base order."""
    bases = split_bases(spec.ctx)
    if parallel and len(bases) > 1:
        with ProcessPoolExecutor() as pool:
            fibers = list(pool.map(_fiber_worker, [(spec, c) for c in bases]))
        for f in fibers:
            f.spec = spec
    else:
        fibers = [enumerate_fiber(spec, spec.ctx.of_code(c)) for c in bases]
    return Census(spec, fibers, sum(f.size for f in fibers))


def degree_via_fiber(spec: TowerSpec, fibers=None) -> dict:
    """Degree of the model from a split fiber: exact for irreducible models.

    The chain model and the level-3 reduced closure model are irreducible, so
    the fiber over a split base has exactly deg points.  The full closure
    model contains dependent generators and may be reducible, so its fiber
    size is only an upper bound.
    """
    if fibers is None:
        fibers = (enumerate_fiber(spec, spec.ctx.of_code(c)) for c in split_bases(spec.ctx))
    for f in fibers:
        if f.split:
            if spec.variant in (GS, CLOSURE_REDUCED):
                return {"exact": f.size}
            return {"upper_bound": f.size}
    raise NoSplitFiber("no completely split fiber found")


def verify_split_values(spec: TowerSpec) -> Report:
    """Over every split base: generator values avoid K_- and each f_{c,alpha} splits."""
    ctx = spec.ctx
    p = ctx.p
    kminus = ctx.kminus_codes()
    kset = set(kminus)
    rep = Report(f"split_values.{spec.variant}.p{spec.p}.n{spec.n}")
    tree = _tree(spec)
    points = 0
    checked = 0
    for base in split_bases(ctx):
        fib = enumerate_fiber(spec, ctx.of_code(base))
        points += fib.size
        if not fib.split:
            rep.fail({"base": ctx.fmt(base), "reason": "fiber not completely split"})
            continue
        reach = tree.reachable(base)
        for g in spec.algebraic:
            for v in sorted(reach[g.id]):
                checked += 1
                if v in kset:
                    rep.fail({"base": ctx.fmt(base), "generator": g.id, "value": ctx.fmt(v)})
                    continue
                for alpha in kminus:
                    if len(roots_code(ctx, v, alpha)) != p:
                        rep.fail({"base": ctx.fmt(base), "generator": g.id, "value": ctx.fmt(v),
                                  "alpha": ctx.fmt(alpha), "reason": "f does not split"})
    rep.instances = points
    rep.details["generator_values_checked"] = checked
    return rep


def sample_points(spec: TowerSpec, count: int, seed: int = 0) -> list:
    """Random points over random split bases (deterministic for a seed)."""
    rng = random.Random(seed)
    tree = _tree(spec)
    bases = [b for b in split_bases(spec.ctx) if tree.count("x1", b)]
    if not bases:
        raise NoSplitFiber("no split fiber to sample from")
    return [tree.random_point(rng.choice(bases), rng) for _ in range(count)]


def census_csv(census: Census) -> str:
    lines = ["base,fiber_size,split,values_outside_Kminus"]
    for f in census.fibers:
        r = f.row()
        lines.append(f"{r['base']},{r['fiber_size']},{str(r['split']).lower()},"
                     f"{str(r['values_outside_Kminus']).lower()}")
    return "\n".join(lines) + "\n"
