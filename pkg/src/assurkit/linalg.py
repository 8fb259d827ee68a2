"""Exact and floating linear algebra on small dense matrices.

Exact matrices are lists of row lists over either a prime field (entries are
ints in ``[0, p)``) or the rationals (entries are ``Fraction``). Elimination
is plain Gauss-Jordan; the matrices handled here have a few dozen rows.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import nextprime


class PrimeField:
    def __init__(self, p: int):
        self.p = p
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"PrimeField({self.p})"

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator vanishes mod {self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        if isinstance(x, float):
            return self.coerce(Fraction(x))
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * pow(b, -1, self.p) % self.p

    def dot(self, xs, ys):
        return sum(x * y for x, y in zip(xs, ys)) % self.p

    def signed(self, a) -> int:
        """Symmetric representative in ``(-p/2, p/2]``."""
        return a - self.p if a > self.p // 2 else a


class RationalField:
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "RationalField()"

    def coerce(self, x) -> Fraction:
        return Fraction(x)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        return Fraction(1) / a

    @staticmethod
    def div(a, b):
        return Fraction(a) / b

    @staticmethod
    def dot(xs, ys):
        return sum((x * y for x, y in zip(xs, ys)), Fraction(0))

    @staticmethod
    def signed(a):
        return a


QQ = RationalField()


def random_prime(rng: random.Random, bits: int = 62) -> int:
    """A prime drawn from ``[2**(bits-1), 2**bits)`` using ``rng``."""
    return int(nextprime(rng.randrange(2 ** (bits - 1), 2 ** bits - 2 ** (bits - 4))))


def to_field(rows: Sequence[Sequence], field) -> list[list]:
    return [[field.coerce(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence], field, ncols: int | None = None):
    """Reduced row echelon form. Returns ``(matrix, pivot_columns)``."""
    m = to_field(rows, field)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(x, inv) for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                ri = m[i]
                rr = m[r]
                m[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(ri, rr)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence], field, ncols: int | None = None) -> int:
    if not rows:
        return 0
    return _forward_rank(rows, field, ncols)


def _forward_rank(rows, field, ncols=None) -> int:
    # forward elimination only; cheaper than full rref
    m = to_field(rows, field)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        rr = m[r]
        for i in range(r + 1, nrows):
            if m[i][c] != 0:
                f = field.mul(m[i][c], inv)
                m[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(m[i], rr)]
        r += 1
    return r


def det(rows: Sequence[Sequence], field):
    n = len(rows)
    if n == 0:
        return field.one
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    m = to_field(rows, field)
    result = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = field.neg(result)
        result = field.mul(result, m[c][c])
        inv = field.inv(m[c][c])
        rc = m[c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = field.mul(m[i][c], inv)
                m[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(m[i], rc)]
    return result


def nullspace(rows: Sequence[Sequence], field, ncols: int) -> list[list]:
    """Basis of ``{x : A x = 0}``, one vector per free column."""
    if not rows:
        basis = []
        for j in range(ncols):
            vec = [field.zero] * ncols
            vec[j] = field.one
            basis.append(vec)
        return basis
    m, pivots = rref(rows, field, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        vec = [field.zero] * ncols
        vec[fcol] = field.one
        for r, pc in enumerate(pivots):
            vec[pc] = field.neg(m[r][fcol])
        basis.append(vec)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, field) -> list | None:
    """Unique solution of a square system, or None when it is singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, pivots = rref(aug, field, n)
    if pivots != list(range(n)):
        return None
    return [m[i][n] for i in range(n)]


def matvec(rows: Sequence[Sequence], x: Sequence, field) -> list:
    return [field.dot(to_field([r], field)[0], [field.coerce(v) for v in x]) for r in rows]


# -- float path ------------------------------------------------------------

def float_rank(a: np.ndarray, tol: float = 1e-9) -> int:
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def float_nullspace(a: np.ndarray, ncols: int, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal kernel basis as columns; singular values below ``tol * s_max`` count as zero."""
    if a.shape[0] == 0:
        return np.eye(ncols)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return vt[r:].T.copy()
