"""Sparse exact transition, Kirchhoff and diagonal matrices of the process.

Rows and columns are indexed by lexicographic ranks of words.  ``M[v, u]`` is
the rate of the jump ``u -> v``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .words import (
    RateSystem,
    Word,
    format_rational,
    format_word,
    parse_rational,
    parse_word,
    shift_append,
    word_index,
    words_of_length,
)

DENSE_EXPORT_CAP = 256


@dataclass
class SparseRationalMatrix:
    nrows: int
    ncols: int
    entries: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.entries.get(key, Fraction(0))

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    @classmethod
    def from_dense(cls, rows) -> SparseRationalMatrix:
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = {(i, j): Fraction(v) for i, row in enumerate(rows) for j, v in enumerate(row) if v != 0}
        return cls(nrows, ncols, entries)

    @classmethod
    def diagonal(cls, values: Iterable[Fraction]) -> SparseRationalMatrix:
        values = list(values)
        return cls(len(values), len(values), {(i, i): Fraction(v) for i, v in enumerate(values) if v != 0})

    def column_sums(self) -> list[Fraction]:
        sums = [Fraction(0)] * self.ncols
        for (_, j), v in self.entries.items():
            sums[j] += v
        return sums

    def diagonal_values(self) -> list[Fraction]:
        return [self[i, i] for i in range(min(self.nrows, self.ncols))]

    def matvec(self, vec) -> list[Fraction]:
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match column count")
        out = [Fraction(0)] * self.nrows
        for (i, j), v in self.entries.items():
            out[i] += v * vec[j]
        return out

    def _combine(self, other: SparseRationalMatrix, sign: int) -> SparseRationalMatrix:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        entries = dict(self.entries)
        for key, v in other.entries.items():
            entries[key] = entries.get(key, Fraction(0)) + sign * v
        return SparseRationalMatrix(self.nrows, self.ncols, {k: v for k, v in entries.items() if v != 0})

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return SparseRationalMatrix(self.nrows, self.ncols, {k: -v for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        strip = lambda m: {k: v for k, v in m.entries.items() if v != 0}
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and strip(self) == strip(other)

    def submatrix(self, rows: range, cols: range) -> SparseRationalMatrix:
        entries = {
            (i - rows.start, j - cols.start): v
            for (i, j), v in self.entries.items()
            if i in rows and j in cols
        }
        return SparseRationalMatrix(len(rows), len(cols), entries)


def transition_matrix(R: RateSystem) -> SparseRationalMatrix:
    """``M[v, u] = beta(v)`` whenever ``v = shift_append(u, a)``, self-loops included."""
    size = R.n**R.L
    entries = {}
    for u in words_of_length(R.n, R.L):
        col = word_index(u, R.n)
        for a in R.letters():
            v = shift_append(u, a)
            entries[(word_index(v, R.n), col)] = R.beta(v)
    return SparseRationalMatrix(size, size, entries)


def kirchhoff(M: SparseRationalMatrix) -> SparseRationalMatrix:
    """Subtract each column sum from the matching diagonal entry."""
    if not M.is_square:
        raise ValueError(f"Kirchhoff matrix needs a square input, got {M.nrows}x{M.ncols}")
    return M - SparseRationalMatrix.diagonal(M.column_sums())


def delta_matrix(R: RateSystem) -> SparseRationalMatrix:
    return SparseRationalMatrix.diagonal(
        sum(R.beta(shift_append(u, a)) for a in R.letters()) for u in words_of_length(R.n, R.L)
    )


def generator(R: RateSystem) -> SparseRationalMatrix:
    return kirchhoff(transition_matrix(R))


@dataclass
class BlockDecomposition:
    """Pieces of ``M`` at length ``L``, one level down.

    ``A`` is ``n^L x n^(L-1)`` with ``M = [A | A | ... | A]``; ``B[a]`` is the
    square block of rows of ``A`` whose word starts with ``a``; ``D`` is the
    diagonal of column sums of ``A``.
    """

    n: int
    L: int
    A: SparseRationalMatrix
    B: dict[int, SparseRationalMatrix]
    D: SparseRationalMatrix

    @property
    def B_sum(self) -> SparseRationalMatrix:
        total = SparseRationalMatrix(self.D.nrows, self.D.ncols)
        for Ba in self.B.values():
            total = total + Ba
        return total

    def assemble_transition(self) -> SparseRationalMatrix:
        """``[A | ... | A]``, which must reproduce ``M``."""
        size = self.A.nrows
        width = self.A.ncols
        entries = {}
        for (i, j), v in self.A.entries.items():
            for c in range(self.n):
                entries[(i, c * width + j)] = v
        return SparseRationalMatrix(size, size, entries)

    def assemble_kirchhoff(self) -> SparseRationalMatrix:
        """Block matrix with blocks ``B[a] - [a == c] * D``."""
        k = self.D.nrows
        size = self.n * k
        entries = {}
        for a, Ba in self.B.items():
            for c in range(1, self.n + 1):
                block = Ba - self.D if a == c else Ba
                for (i, j), v in block.entries.items():
                    entries[((a - 1) * k + i, (c - 1) * k + j)] = v
        return SparseRationalMatrix(size, size, entries)


def a_matrix(R: RateSystem) -> SparseRationalMatrix:
    """``A[v, u] = beta(v)`` when the first ``L-1`` letters of ``v`` equal ``u``."""
    entries = {}
    for v in words_of_length(R.n, R.L):
        entries[(word_index(v, R.n), word_index(v[:-1], R.n))] = R.beta(v)
    return SparseRationalMatrix(R.n**R.L, R.n ** (R.L - 1), entries)


def block_decomposition(R: RateSystem) -> BlockDecomposition:
    A = a_matrix(R)
    k = A.ncols
    B = {a: A.submatrix(range((a - 1) * k, a * k), range(k)) for a in R.letters()}
    D = SparseRationalMatrix.diagonal(A.column_sums())
    return BlockDecomposition(R.n, R.L, A, B, D)


def b_matrix_direct(R: RateSystem) -> SparseRationalMatrix:
    """``B`` at length ``L - 1`` from its closed description.

    ``B[v, u] = beta(u_1 . v)`` when ``h(v) = t(u)``, evaluated with the
    length-``L`` rates of ``R``.  Independent of the slicing used by
    :func:`block_decomposition`.
    """
    if R.L < 2:
        raise ValueError("needs L >= 2")
    size = R.n ** (R.L - 1)
    entries = {}
    for u in words_of_length(R.n, R.L - 1):
        for v in words_of_length(R.n, R.L - 1):
            if v[:-1] == u[1:]:
                entries[(word_index(v, R.n), word_index(u, R.n))] = R.beta((u[0],) + v)
    return SparseRationalMatrix(size, size, entries)


# ------------------------------------------------------------------ export

def _labels(n: int, size: int) -> list[str]:
    length = 0
    while n**length < size:
        length += 1
    return [format_word(w, n) for w in words_of_length(n, length)]


def to_csv(M: SparseRationalMatrix, n: int) -> str:
    rows = _labels(n, M.nrows)
    cols = _labels(n, M.ncols)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row_word", "col_word", "value"])
    for (i, j), v in sorted(M.entries.items()):
        writer.writerow([rows[i], cols[j], format_rational(v)])
    return buf.getvalue()


def from_csv(text: str, n: int, size: int) -> SparseRationalMatrix:
    reader = csv.DictReader(io.StringIO(text))
    entries = {}
    for row in reader:
        i = word_index(parse_word(row["row_word"]), n)
        j = word_index(parse_word(row["col_word"]), n)
        entries[(i, j)] = parse_rational(row["value"])
    return SparseRationalMatrix(size, size, entries)


def to_dense_json(M: SparseRationalMatrix, n: int) -> str:
    if M.nrows > DENSE_EXPORT_CAP or M.ncols > DENSE_EXPORT_CAP:
        raise ValueError(f"dense export limited to {DENSE_EXPORT_CAP} states")
    payload = {
        "rows": _labels(n, M.nrows),
        "cols": _labels(n, M.ncols),
        "values": [[format_rational(v) for v in row] for row in M.to_dense()],
    }
    return json.dumps(payload)


def state_labels(R: RateSystem) -> list[Word]:
    return list(words_of_length(R.n, R.L))
