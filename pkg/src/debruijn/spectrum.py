"""Closed-form spectrum of the generator and its exact verification."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import EigenMultiset, Polynomial, char_poly, factor_check
from .matrices import block_decomposition, generator
from .words import RateSystem

DEFAULT_ORACLE_CAP = 256


class OracleCapError(RuntimeError):
    pass


def _add(ms: EigenMultiset, value: Fraction, mult: int) -> None:
    if mult:
        ms[value] = ms.get(value, 0) + mult


def eigenvalue_multiset(R: RateSystem) -> EigenMultiset:
    """0 once, -beta_sum(1,1) with multiplicity n-1, -beta_sum(a,m) with (n-1)n^(L-m)."""
    n, L = R.n, R.L
    ms: EigenMultiset = {}
    _add(ms, Fraction(0), 1)
    _add(ms, -R.beta_sum(1, 1), n - 1)
    for m in range(2, L + 1):
        for a in R.letters():
            _add(ms, -R.beta_sum(a, m), (n - 1) * n ** (L - m))
    return ms


def multiplicity_total(n: int, L: int) -> int:
    return 1 + (n - 1) + n * (n - 1) * sum(n ** (L - m) for m in range(2, L + 1))


@dataclass
class SpectrumReport:
    claimed: EigenMultiset
    charpoly: Polynomial
    matches: bool
    degree_check: tuple[int, int]
    recursion: bool | None = None

    @property
    def verified(self) -> bool:
        return self.matches and self.recursion is not False


def recursion_quotient(R: RateSystem) -> Polynomial:
    """chi(-D)^(n-1) where D holds the column sums of the length-L column block."""
    D = block_decomposition(R).D
    chi_neg_d = Polynomial.from_roots(_count(-d for d in D.diagonal_values()))
    return chi_neg_d ** (R.n - 1)


def _count(values) -> EigenMultiset:
    ms: EigenMultiset = {}
    for v in values:
        _add(ms, v, 1)
    return ms


def recursion_check(R: RateSystem, chi_full: Polynomial | None = None) -> bool:
    """chi(generator at L) == chi(-D)^(n-1) * chi(generator at L-1), by exact division."""
    if R.L < 2:
        raise ValueError("recursion needs L >= 2")
    if chi_full is None:
        chi_full = char_poly(generator(R))
    chi_lower = char_poly(generator(R.truncate(R.L - 1)))
    quotient, remainder = divmod(chi_full, chi_lower)
    return remainder.is_zero() and quotient == recursion_quotient(R)


def spectrum_verify(R: RateSystem, cap: int = DEFAULT_ORACLE_CAP, check_recursion: bool = True) -> SpectrumReport:
    size = R.n**R.L
    if size > cap:
        raise OracleCapError(f"n^L = {size} exceeds the dense oracle cap {cap}")
    claimed = eigenvalue_multiset(R)
    chi = char_poly(generator(R))
    total = sum(claimed.values())
    matches = total == size and factor_check(chi, claimed)
    recursion = recursion_check(R, chi) if check_recursion and R.L >= 2 else None
    return SpectrumReport(claimed, chi, matches, (total, size), recursion)
