import random
from fractions import Fraction

import pytest

from rotke import PotentialSpec, Series
from rotke.algebra import CoefPoly


def rand_fraction(rng, max_abs=6, max_den=5, nonzero=False):
    while True:
        f = Fraction(rng.randint(-max_abs, max_abs), rng.randint(1, max_den))
        if f or not nonzero:
            return f


def rand_coefpoly(rng, names=("a", "b"), max_terms=4):
    p = CoefPoly()
    for _ in range(rng.randint(0, max_terms)):
        mono = CoefPoly.const(1)
        for name in names:
            mono = mono * CoefPoly.var(name) ** rng.randint(0, 2)
        p = p + mono.scale(rand_fraction(rng))
    return p


def rand_series(rng, n=2, trunc=5, numeric=True, max_terms=6):
    s = Series.zero(n, trunc)
    for _ in range(rng.randint(0, max_terms)):
        m = tuple(rng.randint(0, trunc) for _ in range(n))
        if sum(m) > trunc:
            continue
        coef = rand_fraction(rng) if numeric else rand_coefpoly(rng)
        s = s + Series(n, trunc, {m: coef})
    return s


def rand_spec(rng, n=2, max_deg=3, max_terms=3, signed=False):
    """Random numeric potential spec; signed=True allows negative coefficients
    (induced flag off) for oracle stress tests."""
    support = {}
    for _ in range(rng.randint(1, max_terms)):
        while True:
            m = tuple(rng.randint(0, max_deg) for _ in range(n))
            if 2 <= sum(m) <= max_deg:
                break
        c = rand_fraction(rng, nonzero=True)
        if not signed:
            c = abs(c)
        support[m] = c
    return PotentialSpec(n, tuple(sorted(support.items())), induced=not signed)


def cpn_unit(n):
    return PotentialSpec(n, ())


@pytest.fixture
def veronese():
    """(1 + (x_1+x_2)/2)^2 with Einstein constant 3."""
    q = Fraction(1, 4)
    h = Fraction(1, 2)
    return PotentialSpec(2, (((0, 2), q), ((1, 1), h), ((2, 0), q)))


@pytest.fixture
def segre():
    """(1+x_1)(1+x_2) with Einstein constant 4."""
    return PotentialSpec(2, (((1, 1), Fraction(1)),))


@pytest.fixture
def rng():
    return random.Random(20240817)
