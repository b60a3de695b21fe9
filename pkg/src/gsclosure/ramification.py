"""Different, genus and N/g formulas for the closure tower, in exact arithmetic.

The cover degree ``deg`` of the level-n closure over the projective line is
not known in closed form, so every quantity here is an affine expression
``a*deg + b`` with rational a, b (:class:`DegreeExpr`).  Level guards follow
the hypotheses under which the formulas were established.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegreeTooSmall, LevelTooSmall, NotOddPrime
from .finite_field import is_prime

ZERO = "zero"
OTHER = "Kminus_star_or_infty"
LOCI = (ZERO, OTHER)


def _check_p(p: int):
    if not (p % 2 == 1 and is_prime(p)):
        raise NotOddPrime(f"p={p} is not an odd prime")


@dataclass(frozen=True)
class DegreeExpr:
    """a*deg + b with exact rational coefficients."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def __add__(self, other):
        other = _as_expr(other)
        return DegreeExpr(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_expr(other)
        return DegreeExpr(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return _as_expr(other) - self

    def __neg__(self):
        return DegreeExpr(-self.a, -self.b)

    def __mul__(self, k):
        k = Fraction(k)
        return DegreeExpr(self.a * k, self.b * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1 / Fraction(k))

    def at(self, deg_value) -> Fraction:
        return self.a * deg_value + self.b

    def __str__(self):
        a = f"{self.a}*deg"
        if self.b == 0:
            return a
        sign = "+" if self.b > 0 else "-"
        return f"{a} {sign} {abs(self.b)}"

    def to_json(self) -> dict:
        return {"deg_coefficient": str(self.a), "constant": str(self.b)}


DEG = DegreeExpr(1, 0)


def _as_expr(x) -> DegreeExpr:
    if isinstance(x, DegreeExpr):
        return x
    return DegreeExpr(0, x)


@dataclass(frozen=True)
class RamPath:
    """(ramification index, different exponent) per step from level i to i+1."""

    p: int
    n: int
    locus: str
    steps: tuple

    @property
    def ramification_index(self) -> int:
        e = 1
        for step_e, _ in self.steps:
            e *= step_e
        return e

    @property
    def different(self) -> int:
        """Cumulative exponent over level 1 by transitivity of the different."""
        total = 0
        for e, d in self.steps:
            # d(top|bottom) = d(top|mid) + e(top|mid) * d(mid|bottom)
            total = d + e * total
        return total


def ram_path(p: int, n: int, locus: str) -> RamPath:
    _check_p(p)
    wild = (p, 2 * (p - 1))
    if locus == ZERO:
        if n < 4:
            raise LevelTooSmall("the path over zero is described for n >= 4")
        steps = tuple((1, 0) if i < 3 else wild for i in range(1, n))
    elif locus == OTHER:
        if n < 2:
            raise LevelTooSmall("the path over K_-^* and infinity needs n >= 2")
        steps = tuple(wild for _ in range(1, n))
    else:
        raise ValueError(f"unknown locus {locus!r}")
    return RamPath(p, n, locus, steps)


def path_different(p: int, n: int, locus: str) -> int:
    return ram_path(p, n, locus).different


def closed_form_different(p: int, n: int, locus: str) -> int:
    if locus == ZERO:
        return 2 * (p ** (n - 3) - 1)
    return 2 * (p ** (n - 1) - 1)


def written_sum_other(p: int, n: int) -> int:
    """(1 + ... + p^(n-4)) * 2(p-1) + 2 p^(n-3) (p^2 - 1), the two-stage sum over K_-^*."""
    return sum(p ** k for k in range(n - 3)) * 2 * (p - 1) + 2 * p ** (n - 3) * (p * p - 1)


def base_points(p: int, locus: str) -> int:
    """Rational base points in a locus: {0}, or K_-^* together with infinity."""
    return 1 if locus == ZERO else p


def different_from_paths(p: int, n: int, locus: str) -> DegreeExpr:
    """deg of the different above a locus, assembled from a single path.

    Galois: every point over a rational base point has the same exponent d
    and there are deg / e of them (all rational, f = 1).
    """
    path = ram_path(p, n, locus)
    return DEG * Fraction(base_points(p, locus) * path.different, path.ramification_index)


def deg_D(p: int, n: int) -> DegreeExpr:
    """Degree of the different above x1 = 0: 2(1 - p^(3-n)) deg."""
    _check_p(p)
    if n < 4:
        raise LevelTooSmall("deg(D_n) requires n >= 4")
    return DEG * (2 * (1 - Fraction(p) ** (3 - n)))


def deg_L(p: int, n: int) -> DegreeExpr:
    """Degree of the different above K_-^* and infinity: 2(p - p^(2-n)) deg."""
    _check_p(p)
    if n < 5:
        raise LevelTooSmall("deg(L_n) requires n >= 5")
    return DEG * (2 * (p - Fraction(p) ** (2 - n)))


def genus_coefficient(p: int, n: int) -> Fraction:
    return p - Fraction(p) ** (3 - n) - Fraction(p) ** (2 - n)


def genus_closure(p: int, n: int) -> DegreeExpr:
    """(p - p^(3-n) - p^(2-n)) deg + 1, valid for n > 4."""
    _check_p(p)
    if n <= 4:
        raise LevelTooSmall("the genus formula requires n > 4")
    return DegreeExpr(genus_coefficient(p, n), 1)


def hurwitz_genus(p: int, n: int) -> DegreeExpr:
    """1/2 deg(Diff) - deg + 1 with Diff = D_n + L_n (base genus 0)."""
    return (deg_D(p, n) + deg_L(p, n)) / 2 - DEG + 1


def hurwitz_check(p: int, n: int) -> bool:
    return hurwitz_genus(p, n) == genus_closure(p, n)


@dataclass(frozen=True)
class RatioBound:
    """N_lower / g as a quotient of degree expressions."""

    numerator: DegreeExpr
    denominator: DegreeExpr

    @property
    def limit(self) -> Fraction:
        """Value as deg -> infinity."""
        return self.numerator.a / self.denominator.a

    def at(self, deg_value) -> Fraction:
        return self.numerator.at(deg_value) / self.denominator.at(deg_value)


def ratio_bound(p: int, n: int, deg_value: int | None = None):
    """(p^2 - p) deg / g; exact Fraction when deg_value is given."""
    genus = genus_closure(p, n)
    bound = RatioBound(DEG * (p * p - p), genus)
    if deg_value is None:
        return bound
    if deg_value < p ** (n - 1):
        raise DegreeTooSmall(f"deg={deg_value} is below [T_n:T_1] = {p ** (n - 1)}")
    return bound.at(deg_value)


def ratio_limit(p: int) -> Fraction:
    """Limit of the deg -> infinity ratio as n -> infinity: (p^2 - p)/p."""
    _check_p(p)
    return Fraction(p * p - p, p)


def formula_row(p: int, n: int, deg_value: int | None = None) -> dict:
    """One table row for the CLI; coefficients are exact strings, floats are display only."""
    row = {"n": n}
    row["deg_D/deg"] = str(deg_D(p, n).a) if n >= 4 else None
    row["deg_L/deg"] = str(deg_L(p, n).a) if n >= 5 else None
    if n > 4:
        bound = ratio_bound(p, n)
        row["genus_coefficient"] = str(genus_coefficient(p, n))
        row["ratio_limit"] = str(bound.limit)
        row["ratio_limit_float"] = float(bound.limit)
        if deg_value is not None:
            r = ratio_bound(p, n, deg_value)
            row["deg"] = deg_value
            row["ratio_at_deg"] = str(r)
            row["ratio_at_deg_float"] = float(r)
    else:
        row["genus_coefficient"] = None
        row["ratio_limit"] = None
    return row
