"""Generator/relation descriptions of the tower and of its Galois closure.

Every algebraic generator ``y`` of a :class:`TowerSpec` satisfies one
Artin-Schreier relation of the same shape::

    y^p + y = g(parent + shift),   g(x) = x^(p+1) / (x^p + x)

where ``parent`` is an earlier generator and ``shift`` is a trace-zero
constant.  The tower chain is ``x_{i+1}`` over ``x_i`` with shift 0; in the
closure, ``u[c1]`` hangs off ``x2`` with shift ``c1`` and ``u[c1,...,cm]``
hangs off ``u[c1,...,c_{m-1}]`` with shift ``cm``.  Inside closure specs the
chain elements ``x3, x4, ...`` are the zero-index nodes ``u[0], u[0,0], ...``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .errors import (
    BetaNotTraceZero,
    BetaZero,
    CyclicDependency,
    UnsupportedReducedLevel,
    VectorTooShort,
)
from .finite_field import FieldCtx, FieldElement, make_field

GS = "gs"
CLOSURE_FULL = "closure-full"
CLOSURE_REDUCED = "closure-reduced"
VARIANTS = (GS, CLOSURE_FULL, CLOSURE_REDUCED)


@dataclass(frozen=True)
class Generator:
    id: str
    parent: str | None = None
    shift: int = 0  # field code of the trace-zero shift
    index: tuple | None = None  # u-index as field codes; None for x1, x2, gs chain

    @property
    def is_transcendental(self) -> bool:
        return self.parent is None


def u_name(ctx: FieldCtx, index) -> str:
    return "u[" + ",".join(ctx.fmt(_code(ctx, c)) for c in index) + "]"


def _code(ctx: FieldCtx, c) -> int:
    if isinstance(c, FieldElement):
        return c.code
    if isinstance(c, str):
        return ctx.parse_code(c)
    return c


@dataclass
class TowerSpec:
    p: int
    n: int
    variant: str
    beta: FieldElement | None
    generators: list
    aliases: dict = field(default_factory=dict)

    def __post_init__(self):
        self._by_id = {g.id: g for g in self.generators}

    @property
    def ctx(self) -> FieldCtx:
        return make_field(self.p, 2)

    @property
    def algebraic(self) -> list:
        return [g for g in self.generators if not g.is_transcendental]

    def __getitem__(self, gid: str) -> Generator:
        return self._by_id[self.resolve(gid)]

    def __contains__(self, gid: str) -> bool:
        return self.resolve(gid) in self._by_id

    def resolve(self, gid: str) -> str:
        """Canonical id for a generator name, following x_k -> u[0,...] aliases."""
        gid = gid.replace(" ", "")
        if gid.startswith("u["):
            ctx = self.ctx
            inner = gid[2:-1]
            codes = [ctx.parse_code(s) for s in inner.split(",")] if inner else []
            gid = u_name(ctx, codes)
        return self.aliases.get(gid, gid)

    def u(self, *index) -> str:
        """Canonical id of u_c for an index given as elements, codes or strings."""
        return self.resolve(u_name(self.ctx, [_code(self.ctx, c) for c in index]))

    def parent_expr(self, g: Generator) -> str:
        if g.parent is None:
            return ""
        if g.shift == 0:
            return g.parent
        return f"{g.parent}+{self.ctx.fmt(g.shift)}"

    def ancestors(self, gid: str) -> list:
        out = []
        cur = self[gid].parent
        while cur is not None:
            out.append(cur)
            cur = self._by_id[cur].parent
        return out

    def restrict(self, ids) -> "TowerSpec":
        """Sub-spec containing the given generators and all their ancestors."""
        keep = set()
        for gid in ids:
            gid = self.resolve(gid)
            keep.add(gid)
            keep.update(self.ancestors(gid))
        gens = [g for g in self.generators if g.id in keep]
        aliases = {a: b for a, b in self.aliases.items() if b in keep}
        return TowerSpec(self.p, self.n, self.variant, self.beta, gens, aliases)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "variant": self.variant,
            "beta": None if self.beta is None else str(self.beta),
            "generators": [
                {
                    "id": g.id,
                    "relation": None if g.parent is None else {
                        "parent_expr": self.parent_expr(g),
                        "parent": g.parent,
                        "shift": self.ctx.fmt(g.shift),
                    },
                }
                for g in self.generators
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "TowerSpec":
        ctx = make_field(data["p"], 2)
        gens = []
        for item in data["generators"]:
            rel = item.get("relation")
            gid = item["id"]
            index = None
            if gid.startswith("u["):
                index = tuple(ctx.parse_code(s) for s in gid[2:-1].split(","))
            if rel is None:
                gens.append(Generator(gid))
            else:
                gens.append(Generator(gid, rel["parent"], ctx.parse_code(rel["shift"]), index))
        beta = None if data.get("beta") is None else ctx.parse(data["beta"])
        spec = cls(data["p"], data["n"], data["variant"], beta, gens)
        if spec.variant != GS:
            spec.aliases = _closure_aliases(spec)
        dependency_order(spec)
        return spec


def _closure_aliases(spec: TowerSpec) -> dict:
    aliases = {}
    for g in spec.generators:
        if g.index is not None and all(c == 0 for c in g.index):
            aliases[f"x{len(g.index) + 2}"] = g.id
    return aliases


def gs_tower(p: int, n: int) -> TowerSpec:
    """The chain x1 -> x2 -> ... -> xn with x_{i+1}^p + x_{i+1} = g(x_i)."""
    make_field(p, 2)
    if n < 1:
        raise ValueError("level must be >= 1")
    gens = [Generator("x1")]
    for i in range(2, n + 1):
        gens.append(Generator(f"x{i}", f"x{i - 1}", 0))
    return TowerSpec(p, n, GS, None, gens)


def default_beta(ctx: FieldCtx) -> FieldElement:
    """Canonically smallest nonzero trace-zero element."""
    return ctx.of_code(ctx.kminus_codes()[1])


def _check_beta(ctx: FieldCtx, beta) -> FieldElement:
    if beta is None:
        return default_beta(ctx)
    if isinstance(beta, str):
        beta = ctx.parse(beta)
    elif isinstance(beta, int):
        beta = ctx.of_code(beta)
    if beta.code == 0:
        raise BetaZero("beta must be nonzero")
    if beta.code not in ctx.kminus_codes():
        raise BetaNotTraceZero(f"beta={beta} does not satisfy beta^p = -beta")
    return beta


def closure_tower(p: int, n: int, beta=None, model: str = "full") -> TowerSpec:
    """Generator system for the Galois closure at level n.

    ``full``: x2 and u_c for every index c of length 1..n-2.
    ``reduced`` (level 3 only): x2, u[0] (= x3) and u[beta].
    """
    ctx = make_field(p, 2)
    if n < 3:
        raise ValueError("the closure is only described for n >= 3")
    beta = _check_beta(ctx, beta)
    gens = [Generator("x1"), Generator("x2", "x1", 0)]
    kminus = ctx.kminus_codes()
    if model == "reduced":
        if n != 3:
            raise UnsupportedReducedLevel("reduced model is only constructed for n = 3")
        for c in (0, beta.code):
            gens.append(Generator(u_name(ctx, (c,)), "x2", c, (c,)))
        variant = CLOSURE_REDUCED
    elif model == "full":
        for m in range(1, n - 1):
            for index in itertools.product(kminus, repeat=m):
                parent = "x2" if m == 1 else u_name(ctx, index[:-1])
                gens.append(Generator(u_name(ctx, index), parent, index[-1], index))
        variant = CLOSURE_FULL
    else:
        raise ValueError(f"unknown model {model!r}")
    spec = TowerSpec(p, n, variant, beta, gens)
    spec.aliases = _closure_aliases(spec)
    return spec


def closure_generator_count(p: int, n: int) -> int:
    """1 + p + ... + p^(n-2): algebraic generators of the full closure model."""
    return 1 + sum(p ** m for m in range(1, n - 1))


def dependency_order(spec: TowerSpec) -> list:
    """Topological order of generator ids; ties broken by (index length, index)."""
    gens = {g.id: g for g in spec.generators}

    def key(gid):
        g = gens[gid]
        if g.index is None:
            return (0, int(gid[1:]) if gid[1:].isdigit() else 0, ())
        return (1, len(g.index), g.index)

    remaining = set(gens)
    done = []
    placed = set()
    while remaining:
        ready = [gid for gid in remaining if gens[gid].parent is None or gens[gid].parent in placed]
        if not ready:
            raise CyclicDependency("generator relations form a cycle: " + ", ".join(sorted(remaining)))
        for gid in ready:
            if gens[gid].parent is not None and gens[gid].parent not in gens:
                raise CyclicDependency(f"{gid} references unknown generator {gens[gid].parent}")
        ready.sort(key=key)
        nxt = ready[0]
        done.append(nxt)
        placed.add(nxt)
        remaining.discard(nxt)
    return done


# --- index classification -------------------------------------------------

PRIORITY = (1, 2, 3, 8, 9, 6, 7, 4, 5)


def _type_predicates(z: list) -> dict:
    """z[i] is True when the i-th entry (0-based) is zero; length is n+1."""
    n = len(z) - 1
    first_nonzero = next((i for i, v in enumerate(z) if not v), None)
    last_zero = z[n]
    preds = {
        1: all(z),
        2: all(z[:n]) and not last_zero,
        3: not z[0] and all(z[1:]),
        4: not z[0] and last_zero,
        5: not z[0] and not last_zero,
        8: all(z[: n - 1]) and not z[n - 1] and last_zero,
        9: all(z[: n - 1]) and not z[n - 1] and not last_zero,
    }
    # s = number of leading zeros, s >= 1 and (n+1) - s >= 2
    s = first_nonzero
    sorts67 = s is not None and s >= 1 and (n + 1) - s >= 2
    preds[6] = sorts67 and last_zero
    preds[7] = sorts67 and not last_zero
    return preds


def classify_index(c) -> int:
    """Sort (1-9) of an index vector of length n+1 >= 3, first match in PRIORITY."""
    if len(c) < 3:
        raise VectorTooShort("index vectors must have length >= 3")
    z = [(x.code if isinstance(x, FieldElement) else x) == 0 for x in c]
    preds = _type_predicates(z)
    for tag in PRIORITY:
        if preds[tag]:
            return tag
    raise AssertionError(f"unclassified index {c}")  # pragma: no cover


def matching_types(c) -> list:
    """All sorts whose defining conditions hold, ignoring priority."""
    z = [(x.code if isinstance(x, FieldElement) else x) == 0 for x in c]
    preds = _type_predicates(z)
    return sorted(t for t, ok in preds.items() if ok)
