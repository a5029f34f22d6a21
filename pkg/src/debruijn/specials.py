"""Bernoulli and skin-deep rate specializations.

The skin-deep chain uses rate ``x`` for depth-one blocks and 1 for deeper
ones.  Its correlations are governed by the transfer matrix
``A_n(x) = (1 - x) I + x J`` whose powers count words by number of blocks.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Polynomial
from .words import RateSystem, block_factorize, parse_rational


@dataclass(frozen=True)
class BernoulliSpec:
    y: tuple[Fraction, ...]
    L: int

    def __post_init__(self):
        y = tuple(parse_rational(v) for v in self.y)
        if any(v <= 0 for v in y):
            raise ValueError("all y_a must be positive")
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return len(self.y)

    def densities(self) -> tuple[Fraction, ...]:
        total = sum(self.y)
        return tuple(v / total for v in self.y)


@dataclass(frozen=True)
class SkinDeepSpec:
    x: Fraction
    n: int
    L: int

    def __post_init__(self):
        x = parse_rational(self.x)
        if x <= 0:
            raise ValueError("x must be positive")
        object.__setattr__(self, "x", x)


def bernoulli_rates(spec: BernoulliSpec) -> RateSystem:
    return RateSystem(
        spec.n, spec.L, {(a, k): spec.y[a - 1] for a in range(1, spec.n + 1) for k in range(1, spec.L + 1)}
    )


def bernoulli_measure(w: Sequence[int], spec: BernoulliSpec) -> Fraction:
    rho = spec.densities()
    p = Fraction(1)
    for a in w:
        p *= rho[a - 1]
    return p


def skin_deep_rates(spec: SkinDeepSpec) -> RateSystem:
    return RateSystem(
        spec.n,
        spec.L,
        {(a, k): (spec.x if k == 1 else Fraction(1)) for a in range(1, spec.n + 1) for k in range(1, spec.L + 1)},
    )


def skin_deep_mu_bar(w: Sequence[int], x, n: int) -> Fraction:
    """x^(blocks - 1) / (n (1 + (n-1) x)^(L-1))."""
    x = Fraction(x)
    blocks = len(block_factorize(w))
    return x ** (blocks - 1) / (n * (1 + (n - 1) * x) ** (len(w) - 1))


def decay_ratio(n: int, x) -> Fraction:
    """(1 - x) / (1 + (n-1) x), the per-site decay of truncated correlations."""
    x = Fraction(x)
    return (1 - x) / (1 + (n - 1) * x)


def alpha_poly(n: int, k: int, diagonal: bool) -> Polynomial:
    """Entry of ``A_n(x)^k`` as a polynomial in ``x``.

    Diagonal: ((1 + (n-1)x)^k + (n-1)(1-x)^k) / n.
    Off-diagonal: ((1 + (n-1)x)^k - (1-x)^k) / n.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    big = Polynomial([1, n - 1]) ** k
    small = Polynomial([1, -1]) ** k
    total = big + (n - 1) * small if diagonal else big - small
    return total * Fraction(1, n)


def alpha_by_enumeration(n: int, k: int, a: int, b: int) -> Polynomial:
    """Sum of x^(blocks - 1) over all words a . w . b with |w| = k - 1."""
    counts = [0] * (k + 1)
    for mid in itertools.product(range(1, n + 1), repeat=k - 1):
        counts[len(block_factorize((a, *mid, b))) - 1] += 1
    return Polynomial(counts)


def transfer_matrix(n: int) -> list[list[Polynomial]]:
    one, x = Polynomial([1]), Polynomial.variable()
    return [[one if i == j else x for j in range(n)] for i in range(n)]


def transfer_matrix_power(n: int, k: int) -> list[list[Polynomial]]:
    if k < 0:
        raise ValueError("k must be >= 0")
    result = [[Polynomial([int(i == j)]) for j in range(n)] for i in range(n)]
    A = transfer_matrix(n)
    for _ in range(k):
        result = [
            [sum((result[i][l] * A[l][j] for l in range(n)), Polynomial()) for j in range(n)] for i in range(n)
        ]
    return result


def two_point(n: int, x, i: int, j: int, same_letter: bool) -> Fraction:
    """Stationary probability of given letters at sites ``i < j``."""
    if not i < j:
        raise ValueError(f"need i < j, got i={i}, j={j}")
    alpha = decay_ratio(n, x) ** (j - i)
    n2 = Fraction(1, n * n)
    if same_letter:
        return n2 + (n - 1) * n2 * alpha
    return n2 - n2 * alpha


def truncated_two_point(n: int, x, gap: int) -> Fraction:
    if gap < 1:
        raise ValueError("gap must be >= 1")
    return Fraction(n - 1, n * n) * decay_ratio(n, x) ** gap


def endpoint_correlation(n: int, x, L: int, a: int, b: int) -> Fraction:
    """Probability of ``a`` at site 1 and ``b`` at site L from the block polynomial."""
    x = Fraction(x)
    alpha = alpha_poly(n, L - 1, a == b)
    return alpha(x) / (n * (1 + (n - 1) * x) ** (L - 1))
