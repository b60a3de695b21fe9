"""Expression trees over the tower generators.

The same tree can be evaluated two independent ways: symbolically in a
:class:`~gsclosure.funcfield.RelationSystem` (normal forms) and numerically at
a point (plain field arithmetic, no rewriting).  Identity checks use both.

Grammar accepted by :func:`parse`::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := CONST | 'x'INT | 'u[' elem (',' elem)* ']'
            | ('wp' | 'g' | 'h') '(' expr ')' | '(' expr ')'

CONST is a field element such as ``2``, ``t``, ``2t`` or ``2*t`` written
without spaces around ``*``.
"""

from __future__ import annotations

import re

from .errors import ParseError, PoleAtInput
from .finite_field import FieldCtx, FieldElement


class Expr:
    __slots__ = ("op", "args")

    def __init__(self, op: str, *args):
        self.op = op
        self.args = args

    # builders
    @staticmethod
    def lift(v) -> "Expr":
        if isinstance(v, Expr):
            return v
        if isinstance(v, (int, FieldElement)):
            return Expr("const", v)
        if isinstance(v, str):
            return Expr("gen", v)
        raise TypeError(f"cannot build an expression from {v!r}")

    def __add__(self, o):
        return Expr("add", self, Expr.lift(o))

    def __radd__(self, o):
        return Expr("add", Expr.lift(o), self)

    def __sub__(self, o):
        return Expr("sub", self, Expr.lift(o))

    def __rsub__(self, o):
        return Expr("sub", Expr.lift(o), self)

    def __mul__(self, o):
        return Expr("mul", self, Expr.lift(o))

    def __rmul__(self, o):
        return Expr("mul", Expr.lift(o), self)

    def __truediv__(self, o):
        return Expr("div", self, Expr.lift(o))

    def __rtruediv__(self, o):
        return Expr("div", Expr.lift(o), self)

    def __neg__(self):
        return Expr("neg", self)

    def __pow__(self, e: int):
        return Expr("pow", self, e)

    def generators(self) -> set:
        if self.op == "gen":
            return {self.args[0]}
        if self.op in ("const",):
            return set()
        out = set()
        for a in self.args:
            if isinstance(a, Expr):
                out |= a.generators()
        return out

    def __str__(self):
        op, a = self.op, self.args
        if op == "const":
            return str(a[0])
        if op == "gen":
            return a[0]
        if op in ("wp", "g", "h"):
            return f"{op}({a[0]})"
        if op == "neg":
            return f"-({a[0]})"
        if op == "pow":
            return f"({a[0]})^{a[1]}"
        sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[op]
        return f"({a[0]} {sym} {a[1]})"

    __repr__ = __str__

    # evaluation
    def symbolic(self, rs):
        """Evaluate in a relation system, returning a reduced SymbolicElement."""
        from . import funcfield as ff

        memo = {}

        def go(e):
            key = id(e)
            if key in memo:
                return memo[key]
            op, a = e.op, e.args
            if op == "const":
                r = rs.const(a[0])
            elif op == "gen":
                r = rs.gen(a[0])
            elif op == "add":
                r = go(a[0]) + go(a[1])
            elif op == "sub":
                r = go(a[0]) - go(a[1])
            elif op == "mul":
                r = go(a[0]) * go(a[1])
            elif op == "div":
                r = go(a[0]) / go(a[1])
            elif op == "neg":
                r = -go(a[0])
            elif op == "pow":
                r = go(a[0]) ** a[1]
            elif op == "wp":
                r = ff.wp_apply(go(a[0]))
            elif op == "g":
                r = ff.g_apply(go(a[0]))
            elif op == "h":
                r = ff.h_apply(go(a[0]))
            else:  # pragma: no cover
                raise ValueError(op)
            memo[key] = r
            return r

        return go(self)

    def numeric(self, ctx: FieldCtx, point: dict, resolve=None) -> FieldElement:
        """Evaluate with field arithmetic at {generator id: value}."""
        p = ctx.p

        def val(name):
            key = resolve(name) if resolve else name
            v = point[key]
            return v if isinstance(v, FieldElement) else ctx.of_code(v)

        def go(e):
            op, a = e.op, e.args
            if op == "const":
                return ctx.element(a[0])
            if op == "gen":
                return val(a[0])
            if op == "add":
                return go(a[0]) + go(a[1])
            if op == "sub":
                return go(a[0]) - go(a[1])
            if op == "mul":
                return go(a[0]) * go(a[1])
            if op == "div":
                d = go(a[1])
                if not d:
                    raise PoleAtInput(f"denominator {a[1]} vanishes", str(a[1]))
                return go(a[0]) / d
            if op == "neg":
                return -go(a[0])
            if op == "pow":
                return go(a[0]) ** a[1]
            x = go(a[0])
            if op == "wp":
                return x ** p + x
            if op == "g":
                d = x ** p + x
                if not d:
                    raise PoleAtInput(f"g({a[0]}) has a pole", "x^p+x")
                return x ** (p + 1) / d
            if op == "h":
                d = x ** (p - 1) + 1
                if not d:
                    raise PoleAtInput(f"h({a[0]}) has a pole", "x^(p-1)+1")
                return (x ** (p - 1) - 1) / d
            raise ValueError(op)  # pragma: no cover

        return go(self)


def const(v) -> Expr:
    return Expr("const", v)


def gen(name: str) -> Expr:
    return Expr("gen", name)


def wp(e) -> Expr:
    return Expr("wp", Expr.lift(e))


def g(e) -> Expr:
    return Expr("g", Expr.lift(e))


def h(e) -> Expr:
    return Expr("h", Expr.lift(e))


# --- parser -------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<u>u\[[^\]]*\])"
    r"|(?P<x>x\d+)"
    r"|(?P<fn>wp|g|h)(?=\s*\()"
    r"|(?P<const>\d*t(?:\^\d+)?|\d+(?:\*t(?:\^\d+)?)?)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def parse(text: str, ctx: FieldCtx) -> Expr:
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None or (expected is not None and tok[1] != expected):
            raise ParseError(f"expected {expected or 'token'} in {text!r}")
        pos += 1
        return tok

    def expr():
        left = term()
        while peek()[1] in ("+", "-"):
            op = take()[1]
            right = term()
            left = left + right if op == "+" else left - right
        return left

    def term():
        left = unary()
        while peek()[1] in ("*", "/"):
            op = take()[1]
            right = unary()
            left = left * right if op == "*" else left / right
        return left

    def power():
        base = atom()
        if peek()[1] == "^":
            take()
            kind, val = take()
            if kind != "const" or not val.isdigit():
                raise ParseError("exponent must be a nonnegative integer")
            base = base ** int(val)
        return base

    def unary():
        if peek()[1] == "-":
            take()
            return -unary()
        return power()

    def atom():
        kind, val = take()
        if kind == "const":
            return Expr("const", ctx.parse(val))
        if kind == "x":
            return Expr("gen", val)
        if kind == "u":
            inner = val[2:-1]
            codes = [ctx.parse_code(s) for s in inner.split(",")]
            return Expr("gen", "u[" + ",".join(ctx.fmt(c) for c in codes) + "]")
        if kind == "fn":
            take("(")
            inner = expr()
            take(")")
            return Expr(val, inner)
        if val == "(":
            inner = expr()
            take(")")
            return inner
        raise ParseError(f"unexpected token {val!r} in {text!r}")

    result = expr()
    if pos != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return result
