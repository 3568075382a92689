"""Random polynomial generators shared by the test modules."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from hamnf.poly import Poly


def random_monomial(rng, n, max_deg):
    deg = rng.randint(0, max_deg)
    mono = [0] * (2 * n)
    for _ in range(deg):
        mono[rng.randrange(2 * n)] += 1
    return tuple(mono)


def random_poly(rng, n, max_deg=4, max_terms=5, denom=4):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[random_monomial(rng, n, max_deg)] = Fraction(rng.randint(-9, 9), rng.randint(1, denom))
    return Poly(n, terms)


def random_point(rng, n, lo=-1.0, hi=1.0):
    return [rng.uniform(lo, hi) for _ in range(2 * n)]


def random_rational_point(rng, n):
    return [Fraction(rng.randint(-7, 7), rng.randint(1, 5)) for _ in range(2 * n)]


@st.composite
def polys(draw, n=2, max_deg=4, max_terms=4):
    """Hypothesis strategy for small real polynomials in dimension ``n``."""
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_poly(random.Random(seed), n, max_deg, max_terms)


def hh_H1():
    q1, q2 = Poly.q(2, 1), Poly.q(2, 2)
    return q1 ** 3 / 3 - q1 * q2 ** 2


def ep_H1():
    q1, q2 = Poly.q(2, 1), Poly.q(2, 2)
    return -(q1 ** 2) * (1 + q2) / 2
