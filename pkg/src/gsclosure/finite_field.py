"""Arithmetic in GF(p) and GF(p^k) for small k.

Elements are stored as an integer code in ``[0, p^k)``.  The code of
``a0 + a1*t + ... + a_{k-1}*t^{k-1}`` is ``sum(a_i * p^(k-1-i))`` so that
integer order on codes is the lexicographic order on coefficient vectors
``(a0, a1, ...)``.  That order is the canonical element order used by every
other module (smallest nonzero trace-zero element, fiber ordering, ...).

Fast routines working directly on codes (``ctx.add``, ``ctx.mul`` ...) are
used by the enumeration and symbolic code; :class:`FieldElement` wraps a code
for the public API.
"""

from __future__ import annotations

import itertools
import re

from .errors import (
    DegreeTooLarge,
    DivisionByZero,
    FieldMismatch,
    NotOddPrime,
    ParseError,
    PoleAtInput,
    WrongDegree,
)
from .report import Report

MAX_DEGREE = 8
_ADD_TABLE_LIMIT = 625


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# --- polynomials over GF(p), coefficient lists low -> high -----------------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divides(d, f, p) -> bool:
    """True if monic ``d`` divides ``f`` over GF(p)."""
    r = list(f)
    dd = len(d) - 1
    for i in range(len(r) - 1, dd - 1, -1):
        c = r[i] % p
        if c:
            for j in range(dd + 1):
                r[i - dd + j] = (r[i - dd + j] - c * d[j]) % p
    return not any(x % p for x in r[:dd])


def _monic_polys(p, d):
    """Monic degree-d polynomials, lexicographic on (a_{d-1}, ..., a_0)."""
    for high_first in itertools.product(range(p), repeat=d):
        yield list(reversed(high_first)) + [1]


def is_irreducible(poly, p: int) -> bool:
    """Brute-force irreducibility test: no monic factor of degree <= deg/2."""
    poly = _poly_trim([c % p for c in poly])
    k = len(poly) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for cand in _monic_polys(p, d):
            if _poly_divides(cand, poly, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple:
    for cand in _monic_polys(p, k):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def format_poly(poly, var: str = "T") -> str:
    terms = []
    for e in range(len(poly) - 1, -1, -1):
        c = poly[e]
        if not c:
            continue
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) or "0"


# --- field context -------------------------------------------------------------

class FieldCtx:
    """GF(p^k) = GF(p)[t]/(modulus).  Immutable; obtain via :func:`make_field`."""

    __slots__ = (
        "p", "k", "q", "modulus", "_log", "_exp", "_add", "_neg", "_frob",
        "_wp_preimages", "_kminus", "__weakref__",
    )

    def __init__(self, p: int, k: int, modulus: tuple):
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = tuple(modulus)
        self._log = None
        self._exp = None
        self._add = None
        self._neg = None
        self._frob = None
        self._wp_preimages = None
        self._kminus = None

    def __repr__(self):
        return f"FieldCtx(p={self.p}, k={self.k}, modulus={format_poly(self.modulus)})"

    def __reduce__(self):
        return (make_field, (self.p, self.k))

    # code <-> coefficient vector
    def coeffs(self, code: int) -> tuple:
        p, k = self.p, self.k
        out = [0] * k
        for i in range(k - 1, -1, -1):
            code, out[i] = divmod(code, p)
        return tuple(out)

    def code(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            raise ValueError("too many coefficients")
        coeffs += [0] * (self.k - len(coeffs))
        c = 0
        for a in coeffs:
            c = c * self.p + a % self.p
        return c

    def from_int(self, n: int) -> int:
        return (n % self.p) * self.p ** (self.k - 1)

    def is_prime_subfield(self, code: int) -> bool:
        return code % self.p ** (self.k - 1) == 0

    def prime_value(self, code: int) -> int:
        """Integer value of an element of the prime subfield."""
        if not self.is_prime_subfield(code):
            raise ValueError("element is not in the prime field")
        return code // self.p ** (self.k - 1)

    # tables
    def _poly_mulmod(self, a, b):
        p, k, m = self.p, self.k, self.modulus
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for i in range(len(prod) - 1, k - 1, -1):
            c = prod[i]
            if c:
                for j in range(k + 1):
                    prod[i - k + j] = (prod[i - k + j] - c * m[j]) % p
        return prod[:k]

    def _build_tables(self):
        q = self.q
        if q == 2:  # pragma: no cover - odd p only
            raise AssertionError
        order = q - 1
        for g in range(1, q):
            gc = self.coeffs(g)
            powers = [self.code((1,))]
            cur = (1,) + (0,) * (self.k - 1)
            for _ in range(order - 1):
                cur = tuple(self._poly_mulmod(cur, gc))
                powers.append(self.code(cur))
            if len(set(powers)) == order:
                exp = powers
                break
        else:  # pragma: no cover
            raise AssertionError("no primitive element")
        log = [None] * q
        for i, c in enumerate(exp):
            log[c] = i
        self._exp = exp + exp
        self._log = log
        p = self.p
        neg = [self.code([(-a) % p for a in self.coeffs(c)]) for c in range(q)]
        self._neg = neg
        if q <= _ADD_TABLE_LIMIT:
            cs = [self.coeffs(c) for c in range(q)]
            self._add = [
                [self.code([(x + y) % p for x, y in zip(cs[a], cs[b])]) for b in range(q)]
                for a in range(q)
            ]
        self._frob = [self.pow(c, p) for c in range(q)]

    def _ready(self):
        if self._log is None:
            self._build_tables()

    # integer-code arithmetic
    def add(self, a: int, b: int) -> int:
        if self._add is None:
            self._ready()
            if self._add is None:
                p = self.p
                return self.code([(x + y) % p for x, y in zip(self.coeffs(a), self.coeffs(b))])
        return self._add[a][b]

    def neg(self, a: int) -> int:
        self._ready()
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        self._ready()
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        self._ready()
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return self.from_int(1) if e == 0 else 0
        self._ready()
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frob(self, a: int) -> int:
        self._ready()
        return self._frob[a]

    def wp(self, a: int) -> int:
        """x^p + x."""
        return self.add(self.frob(a), a)

    # element-level API
    def __call__(self, value) -> "FieldElement":
        return self.element(value)

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.ctx is not self:
                raise FieldMismatch("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElement(self, self.from_int(value))
        if isinstance(value, str):
            return FieldElement(self, self.parse_code(value))
        return FieldElement(self, self.code(value))

    def of_code(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, self.from_int(1))

    @property
    def gen(self) -> "FieldElement":
        """The class of t (equals -modulus[0] when k = 1)."""
        if self.k == 1:
            return FieldElement(self, self.from_int(-self.modulus[0]))
        return FieldElement(self, self.code((0, 1)))

    def elements(self):
        """All elements in canonical order."""
        return [FieldElement(self, c) for c in range(self.q)]

    def fmt(self, code: int) -> str:
        terms = []
        for i, a in enumerate(self.coeffs(code)):
            if not a:
                continue
            if i == 0:
                terms.append(str(a))
            else:
                mono = "t" if i == 1 else f"t^{i}"
                terms.append(mono if a == 1 else f"{a}*{mono}")
        return "+".join(terms) or "0"

    _TERM = re.compile(r"^(\d*)\*?(t(?:(?:\^|\*\*)(\d+))?)?$")

    def parse_code(self, text: str) -> int:
        s = text.replace(" ", "")
        if not s:
            raise ParseError("empty field element")
        s = s.replace("-", "+-")
        if s.startswith("+"):
            s = s[1:]
        coeffs = [0] * max(self.k, 1)
        for term in s.split("+"):
            sign = 1
            if term.startswith("-"):
                sign, term = -1, term[1:]
            m = self._TERM.match(term)
            if not term or not m or (not m.group(1) and not m.group(2)):
                raise ParseError(f"cannot parse field element {text!r}")
            c = int(m.group(1)) if m.group(1) else 1
            e = 0
            if m.group(2):
                e = int(m.group(3)) if m.group(3) else 1
            if e >= self.k:
                # reduce t^e modulo the defining polynomial
                val = self.pow(self.gen.code, e)
                for i, a in enumerate(self.coeffs(val)):
                    coeffs[i] += sign * c * a
            else:
                coeffs[e] += sign * c
        return self.code([x % self.p for x in coeffs])

    def parse(self, text: str) -> "FieldElement":
        return FieldElement(self, self.parse_code(text))

    # Artin-Schreier support
    def wp_preimages(self) -> dict:
        """Map code w -> sorted codes y with y^p + y = w."""
        if self._wp_preimages is None:
            table = {}
            for y in range(self.q):
                table.setdefault(self.wp(y), []).append(y)
            self._wp_preimages = {w: tuple(ys) for w, ys in table.items()}
        return self._wp_preimages

    def kminus_codes(self) -> tuple:
        """Codes of the trace-zero set in canonical order (requires k = 2)."""
        if self._kminus is None:
            _require_quadratic(self)
            self._kminus = tuple(c for c in range(self.q) if self.frob(c) == self.neg(c))
        return self._kminus


class FieldElement:
    __slots__ = ("ctx", "code")

    def __init__(self, ctx: FieldCtx, code: int):
        self.ctx = ctx
        self.code = code

    @property
    def coeffs(self) -> tuple:
        return self.ctx.coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise FieldMismatch("operands live in different fields")
            return other.code
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def _wrap(self, code):
        return FieldElement(self.ctx, code)

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.sub(o, self.code))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise DivisionByZero("division by zero in " + repr(self.ctx))
        return self._wrap(self.ctx.div(self.code, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.div(o, self.code))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.code))

    def __pow__(self, e: int):
        return self._wrap(self.ctx.pow(self.code, e))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.ctx.inv(self.code))

    def frobenius(self) -> "FieldElement":
        return self._wrap(self.ctx.frob(self.code))

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx is other.ctx and self.code == other.code
        if isinstance(other, int):
            return self.code == self.ctx.from_int(other)
        return NotImplemented

    def __lt__(self, other):
        return self.code < self._other(other)

    def __le__(self, other):
        return self.code <= self._other(other)

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.k, self.code))

    def __str__(self):
        return self.ctx.fmt(self.code)

    def __repr__(self):
        return f"FieldElement({self.ctx.fmt(self.code)!r}, GF({self.ctx.p}^{self.ctx.k}))"


_FIELDS: dict = {}


def make_field(p: int, k: int = 2) -> FieldCtx:
    """GF(p^k) with the lexicographically smallest monic irreducible modulus.

    Lexicographic order reads the non-leading coefficients from the highest
    degree down, so GF(9) is GF(3)[t]/(t^2+1) and GF(25) is GF(5)[t]/(t^2+2).
    """
    if not (isinstance(p, int) and p % 2 == 1 and is_prime(p)):
        raise NotOddPrime(f"p={p} is not an odd prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if k > MAX_DEGREE:
        raise DegreeTooLarge(f"k={k} exceeds {MAX_DEGREE}")
    ctx = _FIELDS.get((p, k))
    if ctx is None:
        ctx = _FIELDS[(p, k)] = FieldCtx(p, k, smallest_irreducible(p, k))
    return ctx


def _require_quadratic(ctx: FieldCtx):
    if ctx.k != 2:
        raise WrongDegree(f"need a quadratic extension, got k={ctx.k}")


def trace_norm(x: FieldElement) -> tuple[FieldElement, FieldElement]:
    """Trace x^p + x and norm x^(p+1) of x in GF(p^2), returned in GF(p)."""
    ctx = x.ctx
    _require_quadratic(ctx)
    prime = make_field(ctx.p, 1)
    tr = ctx.wp(x.code)
    nm = ctx.mul(ctx.frob(x.code), x.code)
    return prime.element(ctx.prime_value(tr)), prime.element(ctx.prime_value(nm))


class TraceZeroSet:
    """K_- = {a in GF(p^2) : a^p = -a}, the kernel of y -> y^p + y."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.elements = [ctx.of_code(c) for c in ctx.kminus_codes()]
        self._codes = frozenset(ctx.kminus_codes())

    def __contains__(self, x) -> bool:
        if isinstance(x, FieldElement):
            if x.ctx is not self.ctx:
                raise FieldMismatch("element belongs to a different field")
            return x.code in self._codes
        return self.ctx.element(x).code in self._codes

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def nonzero(self) -> list:
        return [a for a in self.elements if a]

    def __repr__(self):
        return "{" + ", ".join(map(str, self.elements)) + "}"


def trace_zero_set(ctx: FieldCtx) -> TraceZeroSet:
    _require_quadratic(ctx)
    return TraceZeroSet(ctx)


def in_kminus(x: FieldElement) -> bool:
    return x.ctx.frob(x.code) == x.ctx.neg(x.code)


def artin_schreier_solve(w: FieldElement, ctx: FieldCtx | None = None) -> list:
    """All y in the field with y^p + y = w, in canonical order."""
    ctx = ctx or w.ctx
    if w.ctx is not ctx:
        raise FieldMismatch("w belongs to a different field")
    return [ctx.of_code(c) for c in ctx.wp_preimages().get(w.code, ())]


def wp(x: FieldElement) -> FieldElement:
    return x ** x.ctx.p + x


def eval_wgh(x: FieldElement, which: str) -> FieldElement:
    """Evaluate wp(x) = x^p + x, g(x) = x^(p+1)/wp(x) or h(x) = (x^(p-1)-1)/(x^(p-1)+1)."""
    p = x.ctx.p
    if which in ("wp", "℘"):
        return wp(x)
    if which == "g":
        den = wp(x)
        if not den:
            raise PoleAtInput(f"g has a pole at {x}: x^p+x = 0", "x^p+x")
        return x ** (p + 1) / den
    if which == "h":
        xp = x ** (p - 1)
        den = xp + 1
        if not den:
            raise PoleAtInput(f"h has a pole at {x}: x^(p-1)+1 = 0", "x^(p-1)+1")
        return (xp - 1) / den
    raise ValueError(f"unknown function {which!r}")


def check_norm_trace_identity(ctx: FieldCtx) -> Report:
    """x^(p+1)/(x^p+x) == Nm(x)/Tr(x), a nonzero element of GF(p), off K_-."""
    _require_quadratic(ctx)
    rep = Report("field.norm_over_trace")
    kminus = set(ctx.kminus_codes())
    ratios = set()
    for c in range(ctx.q):
        if c in kminus:
            continue
        x = ctx.of_code(c)
        rep.instances += 1
        value = eval_wgh(x, "g")
        tr, nm = trace_norm(x)
        if not ctx.is_prime_subfield(value.code):
            rep.fail({"xi": str(x), "value": str(value), "reason": "not in GF(p)"})
            continue
        v = ctx.prime_value(value.code)
        if v == 0 or not tr or (nm / tr).code != v:
            rep.fail({"xi": str(x), "value": str(value), "nm": str(nm), "tr": str(tr)})
            continue
        ratios.add(v)
    rep.details["ratios"] = sorted(ratios)
    return rep


_BINARY = {"add", "sub", "mul", "div", "pow"}


def field_arith(a: FieldElement, b, op: str) -> FieldElement:
    """Dispatch one field operation by name; b is ignored for neg and inv, an int for pow."""
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op not in _BINARY:
        raise ValueError(f"unknown operation {op!r}")
    if op == "pow":
        return a ** b
    if isinstance(b, FieldElement) and b.ctx is not a.ctx:
        raise FieldMismatch("operands live in different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    return a / b
