"""The Gosper group: block matrices ``[[A, u], [0, 1]]`` under multiplication.

Only ``A`` (N x N, dense) and ``u`` (length N, matrix row order, i.e.
``u[0]`` is the top entry) are stored; the bottom row ``[0 ... 0 1]`` is
implicit.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .numeric import BigFloat

__all__ = [
    "GosperMatrix",
    "DimensionError",
    "SingularMatrixError",
    "ApproximateInverseWarning",
    "identity",
    "multiply",
    "inverse",
    "finite_product",
    "segmented_product",
]


class DimensionError(ValueError):
    pass


class SingularMatrixError(ZeroDivisionError):
    pass


class ApproximateInverseWarning(UserWarning):
    pass


@dataclass(frozen=True)
class GosperMatrix:
    A: Tuple[Tuple, ...]
    u: Tuple

    def __post_init__(self):
        n = len(self.u)
        if n < 1 or len(self.A) != n or any(len(row) != n for row in self.A):
            raise DimensionError(f"A must be {n}x{n} to match u of length {n}")

    @property
    def n(self) -> int:
        return len(self.u)

    @classmethod
    def from_lists(cls, A, u) -> "GosperMatrix":
        return cls(tuple(tuple(_scalar(x) for x in row) for row in A), tuple(_scalar(x) for x in u))

    def full(self):
        """The explicit (N+1) x (N+1) matrix as nested lists."""
        rows = [list(self.A[i]) + [self.u[i]] for i in range(self.n)]
        rows.append([Fraction(0)] * self.n + [Fraction(1)])
        return rows

    def __matmul__(self, other: "GosperMatrix") -> "GosperMatrix":
        return multiply(self, other)


def _scalar(x):
    return Fraction(x) if isinstance(x, int) else x


def identity(n: int) -> GosperMatrix:
    one, zero = Fraction(1), Fraction(0)
    A = tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
    return GosperMatrix(A, (zero,) * n)


def _matmul(X, Y):
    n = len(X)
    out = []
    for i in range(n):
        xi = X[i]
        row = []
        for j in range(n):
            acc = Fraction(0)
            for t in range(n):
                a = xi[t]
                if a:
                    b = Y[t][j]
                    if b:
                        acc = acc + a * b
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _matvec(X, v):
    out = []
    for row in X:
        acc = Fraction(0)
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return tuple(out)


def multiply(m1: GosperMatrix, m2: GosperMatrix) -> GosperMatrix:
    """``[[A1 A2, A1 u2 + u1], [0, 1]]``."""
    if m1.n != m2.n:
        raise DimensionError(f"cannot multiply Gosper matrices of dimensions {m1.n} and {m2.n}")
    A = _matmul(m1.A, m2.A)
    Au = _matvec(m1.A, m2.u)
    return GosperMatrix(A, tuple(x + y for x, y in zip(Au, m1.u)))


def _is_upper_triangular(A) -> bool:
    return all(not A[i][j] for i in range(len(A)) for j in range(i))


def _invert_dense(A):
    n = len(A)
    if _is_upper_triangular(A):
        for i in range(n):
            if not A[i][i]:
                raise SingularMatrixError(f"A is singular: diagonal entry A[{i}][{i}] is zero")
        inv = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n - 1, -1, -1):
            inv[i][i] = 1 / A[i][i]
            for j in range(i + 1, n):
                acc = Fraction(0)
                for t in range(i + 1, j + 1):
                    acc = acc + A[i][t] * inv[t][j]
                inv[i][j] = -acc / A[i][i]
        return tuple(tuple(r) for r in inv)
    # Gauss-Jordan with exact pivot search
    M = [list(A[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise SingularMatrixError(f"A is singular: no pivot in column {col}")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def inverse(m: GosperMatrix) -> GosperMatrix:
    """``[[A^-1, -A^-1 u], [0, 1]]``.

    Exact for rational entries; with float entries the result is rounded and
    an :class:`ApproximateInverseWarning` is issued.
    """
    if any(isinstance(x, BigFloat) for row in m.A for x in row) or any(isinstance(x, BigFloat) for x in m.u):
        warnings.warn("inverse of a float Gosper matrix is approximate", ApproximateInverseWarning, stacklevel=2)
    Ainv = _invert_dense(m.A)
    return GosperMatrix(Ainv, tuple(-x for x in _matvec(Ainv, m.u)))


def finite_product(ms: Sequence[GosperMatrix], n: Optional[int] = None) -> GosperMatrix:
    """Left-to-right product ``M_1 M_2 ... M_p``; the empty product is the identity."""
    ms = list(ms)
    if not ms:
        if n is None:
            raise DimensionError("empty product needs an explicit dimension")
        return identity(n)
    acc = ms[0]
    if n is not None and acc.n != n:
        raise DimensionError(f"expected dimension {n}, got {acc.n}")
    for m in ms[1:]:
        acc = multiply(acc, m)
    return acc


def _tree_reduce(ms):
    while len(ms) > 1:
        nxt = [multiply(ms[i], ms[i + 1]) for i in range(0, len(ms) - 1, 2)]
        if len(ms) % 2:
            nxt.append(ms[-1])
        ms = nxt
    return ms[0]


def segmented_product(
    ms: Sequence[GosperMatrix],
    n: Optional[int] = None,
    segments: int = 4,
    workers: Optional[int] = None,
) -> GosperMatrix:
    """Product by balanced reduction over contiguous segments.

    Segments are reduced independently (in a process pool when ``workers``
    > 1) and then combined in order.  Associativity makes the result equal
    to :func:`finite_product`; with rational entries the equality is exact.
    """
    ms = list(ms)
    if not ms:
        return finite_product(ms, n)
    dims = {m.n for m in ms}
    if len(dims) != 1 or (n is not None and dims != {n}):
        raise DimensionError(f"mixed dimensions in product: {sorted(dims)}")
    segments = max(1, min(segments, len(ms)))
    size = -(-len(ms) // segments)
    chunks = [ms[i:i + size] for i in range(0, len(ms), size)]
    if workers and workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_tree_reduce, chunks))
    else:
        partials = [_tree_reduce(c) for c in chunks]
    return _tree_reduce(partials)
