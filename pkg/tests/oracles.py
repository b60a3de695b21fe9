"""Independent reference implementations and frozen values used by the tests.

Nothing here imports the package: GF(p^2) is modelled as pairs (a, b) = a + b*t
with t^2 = -m1*t - m0, and points are found by exhaustive search.
"""

from fractions import Fraction
from itertools import product

# smallest monic irreducible T^2 + m1*T + m0, scanning (m1, m0) lexicographically
MODULI = {3: (1, 0, 1), 5: (2, 0, 1), 7: (1, 0, 1)}  # low -> high coefficients


class Pair:
    """Naive GF(p^2) element; only what the tests need."""

    def __init__(self, p, a, b):
        self.p, self.a, self.b = p, a % p, b % p

    def _m(self):
        m0, m1, _ = MODULI[self.p]
        return m0, m1

    def __add__(self, o):
        return Pair(self.p, self.a + o.a, self.b + o.b)

    def __sub__(self, o):
        return Pair(self.p, self.a - o.a, self.b - o.b)

    def __neg__(self):
        return Pair(self.p, -self.a, -self.b)

    def __mul__(self, o):
        m0, m1 = self._m()
        bb = self.b * o.b  # coefficient of t^2
        return Pair(self.p, self.a * o.a - bb * m0, self.a * o.b + self.b * o.a - bb * m1)

    def __pow__(self, e):
        r = Pair(self.p, 1, 0)
        for _ in range(e):
            r = r * self
        return r

    def inverse(self):
        q = self.p ** 2
        return self ** (q - 2)

    def __eq__(self, o):
        return (self.a, self.b) == (o.a, o.b)

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def code(self):
        return self.a * self.p + self.b


def all_pairs(p):
    return [Pair(p, a, b) for a, b in product(range(p), repeat=2)]


def kminus(p):
    return [x for x in all_pairs(p) if x ** p == -x]


def g(x):
    p = x.p
    den = x ** p + x
    if den.is_zero():
        return None
    return x ** (p + 1) * den.inverse()


def chain_points(p, n):
    """Exhaustive search for (x1..xn) with x_{i+1}^p + x_{i+1} = g(x_i), x1 outside K_-."""
    km = set(kminus(p))
    pts = [(x,) for x in all_pairs(p) if x not in km]
    elems = all_pairs(p)
    for _ in range(n - 1):
        nxt = []
        for pt in pts:
            w = g(pt[-1])
            if w is None:
                continue
            nxt.extend(pt + (y,) for y in elems if y ** p + y == w)
        pts = nxt
    return pts


def transitivity_different(p, steps):
    total = 0
    for e, d in steps:
        total = d + e * total
    return total


def hurwitz_coefficients(p, n):
    """(deg coefficient, constant) of 1/2(deg D + deg L) - deg + 1, by hand."""
    dD = 2 * (1 - Fraction(p) ** (3 - n))
    dL = 2 * (p - Fraction(p) ** (2 - n))
    return (dD + dL) / 2 - 1, Fraction(1)


# frozen values
CHAIN_TOTALS_P3 = {2: 18, 3: 54, 4: 162, 5: 486, 6: 1458}
REDUCED_TOTALS = {3: (27, 162), 5: (125, 2500)}
FULL_UPPER_BOUND_P3 = {3: 81, 4: 3 ** 13}
PATH_DIFFERENT_P3_N4_OTHER = 52
GENUS_COEFF = {(3, 5): Fraction(77, 27), (5, 6): Fraction(3119, 625)}
RATIO_AT_FLOOR_P3 = {5: Fraction(243, 116), 6: Fraction(729, 359)}
