from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from debruijn.linalg import Polynomial
from debruijn.words import RateSystem

R0_RATES = {(1, 1): 1, (1, 2): 2, (2, 1): 3, (2, 2): 5}


@pytest.fixture
def R0() -> RateSystem:
    return RateSystem(2, 2, R0_RATES)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20261016)


positive_rationals = st.builds(Fraction, st.integers(1, 30), st.integers(1, 12))


@st.composite
def rate_systems(draw, max_n: int = 3, max_L: int = 4):
    n = draw(st.integers(2, max_n))
    L = draw(st.integers(1, max_L))
    rates = {(a, k): draw(positive_rationals) for a in range(1, n + 1) for k in range(1, L + 1)}
    return RateSystem(n, L, rates)


def leibniz_charpoly(A) -> Polynomial:
    """det(l*I - A) by summing over permutations; only for tiny matrices."""
    n = len(A)
    total = Polynomial()
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Polynomial([(-1) ** inversions])
        for i, j in enumerate(perm):
            term = term * (Polynomial([-A[i][j], 1]) if i == j else Polynomial([-A[i][j]]))
        total = total + term
    return total


def random_matrix(rng: random.Random, n: int, m: int | None = None, spread: int = 6):
    m = n if m is None else m
    return [[Fraction(rng.randint(-spread, spread), rng.randint(1, 5)) for _ in range(m)] for _ in range(n)]


def linear_pattern(build, n, L):
    """Coefficient of each rate in each entry, read off by unit perturbations.

    Entries are linear in the rates with no constant term, so
    ``entry(x + e_ak) - entry(x)`` is the coefficient of ``x[a, k]``.
    """
    base_rates = {(a, k): Fraction(1) for a in range(1, n + 1) for k in range(1, L + 1)}
    base = build(RateSystem(n, L, base_rates)).to_dense()
    size = len(base)
    pattern = [[{} for _ in range(size)] for _ in range(size)]
    for key in base_rates:
        bumped = dict(base_rates)
        bumped[key] += 1
        other = build(RateSystem(n, L, bumped)).to_dense()
        for i in range(size):
            for j in range(size):
                c = other[i][j] - base[i][j]
                if c:
                    pattern[i][j][key] = c
    return pattern


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
