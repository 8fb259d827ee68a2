from fractions import Fraction

import numpy as np
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from assurkit import linalg
from assurkit.linalg import QQ, PrimeField

P = 2305843009213693951  # 2**61 - 1

small_ints = st.integers(min_value=-6, max_value=6)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


def square(max_n=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rational_rank_matches_sympy(rows):
    assert linalg.rank(rows, QQ) == sympy.Matrix(rows).rank()


@settings(max_examples=150, deadline=None)
@given(square())
def test_det_matches_sympy_over_q_and_mod_p(rows):
    expected = sympy.Matrix(rows).det()
    assert linalg.det(rows, QQ) == expected
    f = PrimeField(P)
    assert linalg.det(rows, f) == int(expected) % P


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_nullspace_is_kernel(rows):
    ncols = len(rows[0])
    basis = linalg.nullspace(rows, QQ, ncols)
    assert len(basis) == ncols - linalg.rank(rows, QQ)
    for vec in basis:
        assert all(x == 0 for x in linalg.matvec(rows, vec, QQ))


@settings(max_examples=100, deadline=None)
@given(square(), st.lists(small_ints, min_size=5, max_size=5))
def test_solve(rows, rhs):
    n = len(rows)
    b = rhs[:n]
    x = linalg.solve(rows, b, QQ)
    if linalg.det(rows, QQ) == 0:
        assert x is None
    else:
        assert linalg.matvec(rows, x, QQ) == [Fraction(v) for v in b]


def test_prime_field_arithmetic():
    f = PrimeField(13)
    assert f.mul(f.inv(5), 5) == 1
    assert f.coerce(Fraction(1, 2)) == 7
    assert f.signed(12) == -1


def test_float_helpers():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    assert linalg.float_rank(a) == 1
    k = linalg.float_nullspace(a, 2)
    assert k.shape == (2, 1)
    assert np.allclose(a @ k, 0)


def test_random_prime_is_prime():
    import random

    p = linalg.random_prime(random.Random(3))
    assert sympy.isprime(p) and p.bit_length() >= 62
