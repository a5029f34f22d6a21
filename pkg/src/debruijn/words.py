"""Words over the alphabet {1..n}, block factorization and rate systems.

A word is a plain tuple of 1-based integer letters.  All state orderings in
this package are lexicographic, which is also the order produced by
:func:`words_of_length`.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from types import MappingProxyType
from typing import Iterator, Mapping, NamedTuple, Sequence

Word = tuple[int, ...]


class RateError(ValueError):
    """Malformed or incomplete rate data."""


class Block(NamedTuple):
    letter: int
    run_length: int


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, a decimal string, an int or a Fraction exactly."""
    if isinstance(value, bool):
        raise RateError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise RateError(f"not a rational: {value!r}") from exc
    raise RateError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def parse_word(text: str) -> Word:
    """Digit string (``"1122"``) or comma separated letters (``"10,2,3"``)."""
    text = text.strip()
    if "," in text:
        letters = tuple(int(part) for part in text.split(","))
    else:
        letters = tuple(int(ch) for ch in text)
    if not letters or min(letters) < 1:
        raise ValueError(f"invalid word {text!r}")
    return letters


def format_word(w: Sequence[int], n: int | None = None) -> str:
    if n is None:
        n = max(w, default=1)
    if n <= 9:
        return "".join(str(a) for a in w)
    return ",".join(str(a) for a in w)


def words_of_length(n: int, length: int) -> Iterator[Word]:
    """All words of the given length in lexicographic order."""
    return itertools.product(range(1, n + 1), repeat=length)


def word_index(w: Sequence[int], n: int) -> int:
    """Lexicographic rank of ``w`` among words of the same length."""
    idx = 0
    for a in w:
        idx = idx * n + (a - 1)
    return idx


def block_factorize(w: Sequence[int]) -> list[Block]:
    return [Block(a, sum(1 for _ in run)) for a, run in itertools.groupby(w)]


def beta_index(w: Sequence[int]) -> tuple[int, int]:
    """(letter, depth) of the final maximal block of ``w``."""
    if not w:
        raise ValueError("empty word has no final block")
    a = w[-1]
    k = 1
    while k < len(w) and w[-1 - k] == a:
        k += 1
    return a, k


def shift_append(w: Sequence[int], a: int) -> Word:
    """Drop the first letter and append ``a``."""
    return tuple(w[1:]) + (a,)


@dataclass(frozen=True, eq=False)
class RateSystem:
    """Positive rates ``x[a, k]`` for letters ``1..n`` and depths ``1..L``."""

    n: int
    L: int
    rates: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        if self.n < 2:
            raise RateError(f"alphabet size must be >= 2, got {self.n}")
        if self.L < 1:
            raise RateError(f"word length must be >= 1, got {self.L}")
        clean = {}
        for a in range(1, self.n + 1):
            for k in range(1, self.L + 1):
                if (a, k) not in self.rates:
                    raise RateError(f"missing rate for (a,k)=({a},{k})")
                value = parse_rational(self.rates[(a, k)])
                if value <= 0:
                    raise RateError(f"rate for (a,k)=({a},{k}) must be positive, got {value}")
                clean[(a, k)] = value
        extra = set(self.rates) - set(clean)
        if extra:
            raise RateError(f"rates outside 1..n x 1..L: {sorted(extra)}")
        object.__setattr__(self, "rates", MappingProxyType(clean))

    def __eq__(self, other):
        if not isinstance(other, RateSystem):
            return NotImplemented
        return (self.n, self.L, dict(self.rates)) == (other.n, other.L, dict(other.rates))

    def __hash__(self):
        return hash((self.n, self.L, tuple(sorted(self.rates.items()))))

    def x(self, a: int, k: int) -> Fraction:
        try:
            return self.rates[(a, k)]
        except KeyError:
            raise ValueError(f"no rate (a,k)=({a},{k}) in system with n={self.n}, L={self.L}") from None

    def beta(self, w: Sequence[int]) -> Fraction:
        """Rate attached to the final block of ``w``."""
        return self.x(*beta_index(w))

    def beta_sum(self, a: int, m: int) -> Fraction:
        if not 1 <= m <= self.L:
            raise ValueError(f"depth {m} outside 1..{self.L}")
        return self.x(a, m) + sum(self.x(b, 1) for b in range(1, self.n + 1) if b != a)

    def letters(self) -> range:
        return range(1, self.n + 1)

    def words(self) -> list[Word]:
        return list(words_of_length(self.n, self.L))

    def truncate(self, L: int) -> RateSystem:
        """Same rates restricted to depths ``1..L``."""
        if not 1 <= L <= self.L:
            raise ValueError(f"cannot truncate length {self.L} to {L}")
        return RateSystem(self.n, L, {(a, k): v for (a, k), v in self.rates.items() if k <= L})

    def extend(self, next_depth: Mapping[int, Fraction]) -> RateSystem:
        """Add rates for depth ``L + 1`` given per letter."""
        rates = dict(self.rates)
        for a in self.letters():
            if a not in next_depth:
                raise RateError(f"missing rate for (a,k)=({a},{self.L + 1})")
            rates[(a, self.L + 1)] = next_depth[a]
        return RateSystem(self.n, self.L + 1, rates)

    @classmethod
    def random(cls, n: int, L: int, rng: random.Random, max_num: int = 20, max_den: int = 10) -> RateSystem:
        rates = {
            (a, k): Fraction(rng.randint(1, max_num), rng.randint(1, max_den))
            for a in range(1, n + 1)
            for k in range(1, L + 1)
        }
        return cls(n, L, rates)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "L": self.L,
            "rates": {f"{a},{k}": format_rational(v) for (a, k), v in sorted(self.rates.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> RateSystem:
        try:
            n, L, raw = int(data["n"]), int(data["L"]), data["rates"]
        except (KeyError, TypeError, ValueError) as exc:
            raise RateError(f"rate file needs integer 'n', 'L' and a 'rates' object: {exc}") from exc
        if not isinstance(raw, Mapping):
            raise RateError("'rates' must be an object")
        rates = {}
        for key, value in raw.items():
            try:
                a, k = (int(part) for part in str(key).split(","))
            except ValueError as exc:
                raise RateError(f"bad rate key {key!r}, expected 'a,k'") from exc
            rates[(a, k)] = parse_rational(value)
        return cls(n, L, rates)

    @classmethod
    def load(cls, path: str | Path) -> RateSystem:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise RateError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_json(data)
