"""Exact rational linear algebra used as independent oracles.

Matrices here are dense lists of rows of :class:`~fractions.Fraction`.  Heavy
loops clear denominators first and run over Python integers, which keeps the
characteristic polynomial of an 81 x 81 generator well under a second.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Matrix = list[list[Fraction]]
EigenMultiset = dict[Fraction, int]


class KernelDimensionError(ValueError):
    def __init__(self, rank: int, ncols: int):
        self.rank = rank
        self.kernel_dim = ncols - rank
        super().__init__(f"expected a 1-dimensional kernel, got dimension {self.kernel_dim} (rank {rank} of {ncols})")


class SingularParameterError(ValueError):
    pass


class Polynomial:
    """Univariate polynomial with exact rational coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls([c])

    @classmethod
    def variable(cls) -> Polynomial:
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Mapping[Fraction, int]) -> Polynomial:
        """prod (l - r)^m over the multiset."""
        p = cls([1])
        for r, m in roots.items():
            p = p * cls([-Fraction(r), 1]) ** m
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, value):
        acc = Fraction(0) if isinstance(value, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    @staticmethod
    def _lift(other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        return NotImplemented

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(size))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = Polynomial([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - dq - 1, -1, -1):
            c = rem[i + dq] / lead
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Polynomial(quot), Polynomial(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return self.format("l")

    def format(self, var: str = "l") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*{var}")
            else:
                terms.append(f"{c}*{var}^{i}")
        return " + ".join(terms)


def root_multiplicity(p: Polynomial, root) -> int:
    """How many times ``(l - root)`` divides ``p``."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    factor = Polynomial([-Fraction(root), 1])
    m = 0
    while True:
        q, r = divmod(p, factor)
        if not r.is_zero():
            return m
        p, m = q, m + 1


# ---------------------------------------------------------------- matrices

def as_dense(M) -> Matrix:
    if hasattr(M, "to_dense"):
        return M.to_dense()
    return [[Fraction(v) for v in row] for row in M]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if len(A[0]) != len(B):
        raise ValueError("dimension mismatch")
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in A]


def matadd(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(c, A: Matrix) -> Matrix:
    return [[c * a for a in row] for row in A]


def _check_square(A: Matrix) -> int:
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix is not square")
    return n


def _integer_rows(A: Matrix) -> tuple[list[list[int]], int]:
    """Scale by the lcm of all denominators; returns (integer rows, scale)."""
    d = 1
    for row in A:
        for v in row:
            d = math.lcm(d, Fraction(v).denominator)
    return [[int(Fraction(v) * d) for v in row] for row in A], d


def _bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free row echelon form.

    Returns (echelon rows, pivot columns, sign of the row permutation).
    """
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    sign = 1
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        piv = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            if f == 0:
                if piv != prev:
                    rows[i] = [(piv * v) // prev for v in row]
                continue
            rows[i] = [(piv * v - f * pv) // prev for v, pv in zip(row, prow)]
        pivots.append(c)
        prev = piv
        r += 1
    return rows, pivots, sign


def rank(M) -> int:
    rows, _ = _integer_rows(as_dense(M))
    return len(_bareiss_echelon(rows)[1])


def determinant(M) -> Fraction:
    A = as_dense(M)
    n = _check_square(A)
    if n == 0:
        return Fraction(1)
    rows, d = _integer_rows(A)
    ech, pivots, sign = _bareiss_echelon(rows)
    if len(pivots) < n:
        return Fraction(0)
    return Fraction(sign * ech[n - 1][n - 1], d**n)


def null_space_vector(M) -> list[Fraction]:
    """The kernel vector of a corank-1 matrix, normalized to component sum 1."""
    A = as_dense(M)
    ncols = len(A[0])
    rows, _ = _integer_rows(A)
    ech, pivots, _ = _bareiss_echelon(rows)
    if len(pivots) != ncols - 1:
        raise KernelDimensionError(len(pivots), ncols)
    free = next(c for c in range(ncols) if c not in set(pivots))
    x = [Fraction(0)] * ncols
    x[free] = Fraction(1)
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = ech[r]
        s = sum((row[j] * x[j] for j in range(c + 1, ncols) if row[j]), Fraction(0))
        x[c] = -s / row[c]
    total = sum(x, Fraction(0))
    if total == 0:
        raise ValueError("kernel vector has zero component sum and cannot be normalized")
    return [v / total for v in x]


def char_poly(M) -> Polynomial:
    """det(l*I - M) by Faddeev-LeVerrier over the integers.

    With ``M = B / d`` for an integer matrix ``B``, the coefficient of ``l^j``
    is ``c_j(B) / d^(N - j)``.  Multiplication by ``B`` uses only its nonzero
    entries so sparse generators stay cheap.
    """
    A = as_dense(M)
    N = _check_square(A)
    if N == 0:
        return Polynomial([1])
    B, d = _integer_rows(A)
    sparse = [[(j, v) for j, v in enumerate(row) if v] for row in B]
    coeffs = [0] * (N + 1)
    coeffs[N] = 1
    Mk = [[int(i == j) for j in range(N)] for i in range(N)]
    for k in range(1, N + 1):
        AM = []
        for i in range(N):
            acc = [0] * N
            for j, v in sparse[i]:
                src = Mk[j]
                acc = [a + v * s for a, s in zip(acc, src)]
            AM.append(acc)
        tr = sum(AM[i][i] for i in range(N))
        c, rem = divmod(-tr, k)
        if rem:
            raise ArithmeticError("non-integral Faddeev-LeVerrier coefficient")
        coeffs[N - k] = c
        if k < N:
            for i in range(N):
                AM[i][i] += c
            Mk = AM
    return Polynomial(Fraction(coeffs[j], d ** (N - j)) for j in range(N + 1))


def factor_check(p: Polynomial, roots: Mapping[Fraction, int]) -> bool:
    """True iff ``p`` equals prod (l - r)^m exactly."""
    total = sum(roots.values())
    if total != p.degree:
        raise ValueError(f"multiplicities sum to {total} but the polynomial has degree {p.degree}")
    return p == Polynomial.from_roots(roots)


def block_matrix(P_list: Sequence[Matrix], Q: Matrix) -> Matrix:
    """Rows of blocks ``[P_1 .. P_m]`` with ``Q`` added on the diagonal blocks."""
    m = len(P_list)
    k = len(Q)
    for P in list(P_list) + [Q]:
        if len(P) != k or any(len(row) != k for row in P):
            raise ValueError("all blocks must be k x k with the same k")
    R = zeros(m * k, m * k)
    for bi in range(m):
        for bj, P in enumerate(P_list):
            for i in range(k):
                for j in range(k):
                    v = P[i][j] + (Q[i][j] if bi == bj else 0)
                    R[bi * k + i][bj * k + j] = Fraction(v)
    return R


def blockm_charpoly_check(P_list: Sequence[Matrix], Q: Matrix) -> bool:
    """chi(R) == chi(Q)^(m-1) * chi(sum P + Q) for the repeated-column block matrix R."""
    P_list = [as_dense(P) for P in P_list]
    Q = as_dense(Q)
    if not P_list:
        raise ValueError("need at least one block")
    R = block_matrix(P_list, Q)
    total = Q
    for P in P_list:
        total = matadd(total, P)
    return char_poly(R) == char_poly(Q) ** (len(P_list) - 1) * char_poly(total)


def kn_matrix(s, t, n: int) -> Matrix:
    """s*I + t*J."""
    s, t = Fraction(s), Fraction(t)
    return [[s * (i == j) + t for j in range(n)] for i in range(n)]


def kn_inverse(s, t, n: int) -> Matrix:
    s, t = Fraction(s), Fraction(t)
    if s == 0 or s + n * t == 0:
        raise SingularParameterError(f"s*I + t*J is singular for s={s}, t={t}, n={n}")
    return scale(1 / (s * (s + n * t)), kn_matrix(s + n * t, -t, n))
