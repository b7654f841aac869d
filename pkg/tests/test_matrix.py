import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from fractions import Fraction as F

from sphdist.exactnum import FieldTag, QuadExt
from sphdist.matrix import ExactMatrix, bareiss_rank, int_matmul, psd_rank

Q5 = FieldTag(5)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.integers(0, 3), st.data())
def test_bareiss_matches_sympy(r, c, k, data):
    # low-rank integer matrices: product of r x k and k x c factors
    a = data.draw(st.lists(st.integers(-9, 9), min_size=r * k, max_size=r * k))
    b = data.draw(st.lists(st.integers(-9, 9), min_size=k * c, max_size=k * c))
    A = np.array(a, dtype=object).reshape(r, k) if k else np.zeros((r, 0), dtype=object)
    B = np.array(b, dtype=object).reshape(k, c) if k else np.zeros((0, c), dtype=object)
    M = A.dot(B) if k else np.zeros((r, c), dtype=object)
    expected = sympy.Matrix(M.tolist()).rank()
    assert bareiss_rank(np.array(M, dtype=object)) == expected


def test_int_matmul_large_entries():
    rng = np.random.default_rng(7)
    A = rng.integers(-(2**40), 2**40, size=(30, 20))
    B = rng.integers(-(2**40), 2**40, size=(20, 25))
    exact = np.array(A, dtype=object).dot(np.array(B, dtype=object))
    assert (int_matmul(A, B) == exact).all()


def test_int_matmul_object_input():
    A = np.array([[2**70, 1], [3, -(2**65)]], dtype=object)
    assert (int_matmul(A, A) == A.dot(A)).all()


def test_matrix_normal_form_and_ops():
    M = ExactMatrix.from_rows([[F(1, 2), F(1, 3)], [F(1, 3), F(1, 4)]])
    assert M.den == 12
    assert M.entry(0, 1) == F(1, 3)
    assert (M @ ExactMatrix.identity(2)) == M
    assert M.trace() == F(3, 4)
    assert M.total() == F(1, 2) + F(2, 3) + F(1, 4)
    assert M.is_symmetric()
    assert (M - M).is_zero()


def test_quadratic_matrix():
    phi = QuadExt(F(1, 2), F(1, 2), 5)
    M = ExactMatrix.from_rows([[phi, 1], [1, phi - 1]], Q5)
    P = M @ M
    assert P.entry(0, 0) == phi * phi + 1
    assert P.entry(0, 1) == phi + phi - 1


def test_psd_rank():
    ok, r = psd_rank(np.array([[F(2), F(1)], [F(1), F(2)]], dtype=object))
    assert ok and r == 2
    ok, _ = psd_rank(np.array([[F(1), F(2)], [F(2), F(1)]], dtype=object))
    assert not ok
    ok, r = psd_rank(np.array([[F(1), F(1)], [F(1), F(1)]], dtype=object))
    assert ok and r == 1
