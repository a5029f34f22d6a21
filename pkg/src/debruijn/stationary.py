"""Closed-form stationary measure, partition function and correlations."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .words import RateSystem, Word, beta_index, block_factorize, shift_append, words_of_length

StationaryVector = dict[Word, Fraction]


def mu(w: Sequence[int], R: RateSystem) -> Fraction:
    """beta(w) over the total rate out of ``w``, shifts taken at length ``|w|``."""
    w = tuple(w)
    if not 1 <= len(w) <= R.L:
        raise ValueError(f"prefix length {len(w)} outside 1..{R.L}")
    return R.beta(w) / sum(R.beta(shift_append(w, a)) for a in R.letters())


def mu_bar(w: Sequence[int], R: RateSystem) -> Fraction:
    """Product of ``mu`` over all nonempty prefixes of ``w``."""
    w = tuple(w)
    p = Fraction(1)
    for i in range(1, len(w) + 1):
        p *= mu(w[:i], R)
    return p


def rho_bar(letter: int, run_length: int, R: RateSystem) -> Fraction:
    """prod_{j=1..k} x[a, j] / beta_sum(a, j + 1) for the block ``a^k``."""
    if run_length < 1:
        raise ValueError("run length must be positive")
    if run_length + 1 > R.L:
        raise ValueError(f"block of length {run_length} needs depth {run_length + 1} > L={R.L}")
    p = Fraction(1)
    for j in range(1, run_length + 1):
        p *= R.x(letter, j) / R.beta_sum(letter, j + 1)
    return p


def stationary_vector(R: RateSystem) -> StationaryVector:
    """``mu_bar`` over all words of length L, lexicographic order.

    Built level by level over the prefix tree, so ``mu`` is evaluated once
    per prefix rather than once per prefix of every word.
    """
    level: dict[Word, Fraction] = {(): Fraction(1)}
    for _ in range(R.L):
        level = {w + (a,): p * mu(w + (a,), R) for w, p in level.items() for a in R.letters()}
    return level


def stationary_list(R: RateSystem) -> list[Fraction]:
    return list(stationary_vector(R).values())


RateKey = frozenset  # frozenset of (letter, depth) pairs summed in a denominator


@dataclass(frozen=True)
class PartitionReport:
    formula: Fraction
    formula_short_range: Fraction
    denominator_lcm: Fraction
    denominator_factors: dict[RateKey, int]

    @property
    def matches(self) -> bool:
        return self.formula == self.denominator_lcm


def partition_formula(R: RateSystem, upper: int | None = None) -> Fraction:
    """beta_sum(1,1) * prod_{m=2..upper} prod_a beta_sum(a, m), ``upper`` defaults to L."""
    upper = R.L if upper is None else upper
    z = R.beta_sum(1, 1)
    for m in range(2, upper + 1):
        for a in R.letters():
            z *= R.beta_sum(a, m)
    return z


def mu_denominator_key(w: Sequence[int], R: RateSystem) -> RateKey:
    """The rate variables summed in the denominator of ``mu(w)``."""
    w = tuple(w)
    return frozenset(beta_index(shift_append(w, a)) for a in R.letters())


def denominator_factors(R: RateSystem) -> dict[RateKey, int]:
    """Exponents of the least common denominator of all ``mu_bar(w)``.

    Each ``mu_bar(w)`` is a monomial in the rates over a product of linear
    forms, one per prefix.  Distinct forms are distinct irreducible
    polynomials coprime to any monomial, so the least common denominator of
    the rational functions takes each form at the largest exponent seen in
    a single word.
    """
    best: Counter = Counter()
    for w in words_of_length(R.n, R.L):
        seen = Counter(mu_denominator_key(w[:i], R) for i in range(1, R.L + 1))
        for key, e in seen.items():
            best[key] = max(best[key], e)
    return dict(best)


def partition_function(R: RateSystem) -> PartitionReport:
    """Closed-form partition function next to the least common denominator oracle.

    ``formula_short_range`` is the product with the middle range stopping
    at ``L - 1``; it is reported for comparison only.
    """
    factors = denominator_factors(R)
    lcm_value = Fraction(1)
    for key, e in factors.items():
        lcm_value *= sum(R.x(a, k) for a, k in key) ** e
    return PartitionReport(
        formula=partition_formula(R),
        formula_short_range=partition_formula(R, R.L - 1) if R.L >= 2 else R.beta_sum(1, 1),
        denominator_lcm=lcm_value,
        denominator_factors=factors,
    )


def _validate_query(query: Sequence[tuple[int, int]], R: RateSystem) -> list[tuple[int, int]]:
    query = [(int(i), int(a)) for i, a in query]
    sites = [i for i, _ in query]
    if any(b <= a for a, b in zip(sites, sites[1:])):
        raise ValueError(f"sites must be strictly increasing, got {sites}")
    for i, a in query:
        if not 1 <= i <= R.L:
            raise ValueError(f"site {i} outside 1..{R.L}")
        if not 1 <= a <= R.n:
            raise ValueError(f"letter {a} outside 1..{R.n}")
    return query


def correlation(
    query: Sequence[tuple[int, int]],
    R: RateSystem,
    measure: Mapping[Word, Fraction] | None = None,
) -> Fraction:
    """Stationary probability that each listed ``(site, letter)`` is occupied.

    Exact enumeration over the free sites; pass ``measure`` to reuse a
    precomputed stationary vector.
    """
    query = _validate_query(query, R)
    fixed = {i - 1: a for i, a in query}
    free = [i for i in range(R.L) if i not in fixed]
    value = measure.__getitem__ if measure is not None else (lambda w: mu_bar(w, R))
    total = Fraction(0)
    template = [0] * R.L
    for i, a in fixed.items():
        template[i] = a
    for letters in itertools.product(R.letters(), repeat=len(free)):
        for i, a in zip(free, letters):
            template[i] = a
        total += value(tuple(template))
    return total


def last_k_correlation(suffix: Sequence[int], R: RateSystem) -> Fraction:
    """Probability that the last ``k`` sites read ``suffix``; equals ``mu_bar(suffix)``."""
    suffix = tuple(suffix)
    if not 1 <= len(suffix) <= R.L:
        raise ValueError(f"suffix length {len(suffix)} outside 1..{R.L}")
    return mu_bar(suffix, R)


def block_product(w: Sequence[int], R: RateSystem) -> Fraction:
    """``mu_bar`` of the first block times ``rho_bar`` of the remaining ones."""
    blocks = block_factorize(w)
    first = blocks[0]
    p = mu_bar((first.letter,) * first.run_length, R)
    for b in blocks[1:]:
        p *= rho_bar(b.letter, b.run_length, R)
    return p
