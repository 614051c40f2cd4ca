import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bethe_qes import Polynomial

coef = st.floats(-10, 10, allow_nan=False)


def test_trailing_zeros_trimmed():
    p = Polynomial((1.0, 2.0, 0.0, 0.0))
    assert p.coeffs == (1.0, 2.0)
    assert p.degree == 1
    assert Polynomial((0.0,)).degree is None


def test_from_roots_monic():
    p = Polynomial.from_roots([1.0, -2.0, 3.0])
    assert p.degree == 3 and p.coefficient(3) == 1.0
    assert np.allclose(np.sort(p.roots().real), [-2.0, 1.0, 3.0])
    assert Polynomial.from_roots([]).coeffs == (1.0,)


def test_deriv():
    p = Polynomial((1.0, 2.0, 3.0, 4.0))
    assert p.deriv(1).coeffs == (2.0, 6.0, 12.0)
    assert p.deriv(2).coeffs == (6.0, 24.0)
    assert p.deriv(4).degree is None


def test_call_scalar_and_array():
    p = Polynomial((1.0, -1.0, 2.0))
    assert p(2.0) == 7.0
    assert np.allclose(p(np.array([0.0, 1.0])), [1.0, 2.0])


@settings(max_examples=60)
@given(st.lists(coef, min_size=1, max_size=5), st.lists(coef, min_size=1, max_size=5), coef)
def test_product_evaluates_pointwise(a, b, x):
    p, q = Polynomial(tuple(a)), Polynomial(tuple(b))
    expect = p(x) * q(x)
    assert (p * q)(x) == pytest.approx(expect, rel=1e-9, abs=1e-6)
    assert (p + q)(x) == pytest.approx(p(x) + q(x), rel=1e-9, abs=1e-9)
