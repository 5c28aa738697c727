from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kdvlab.symbolic import (
    ELLIPTIC,
    HYPERBOLIC,
    SYMBOLS,
    BasisExpression,
    ConditionPolynomial as P,
    FamilyMismatchError,
)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
exps = st.tuples(*[st.integers(0, 2) for _ in SYMBOLS])
polys = st.dictionaries(exps, fractions, max_size=4).map(P)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == P()
    assert a * P.const(1) == a


def test_s_squared_reduces_to_m():
    s = P.var("s")
    assert s * s == P.var("m")
    assert s ** 3 == P.var("m") * s


def test_divide_by_one_minus_m_exact():
    q = P.var("A") * 3 + P.var("m") * P.var("B") - P.var("m", 2) * Fraction(1, 2)
    p = q * (P.const(1) - P.var("m"))
    assert p.divide_by_one_minus_m() == q


def test_divide_by_one_minus_m_rejects_non_multiple():
    with pytest.raises(ValueError):
        (P.var("m") + 2).divide_by_one_minus_m()


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_derivation_product_rule(a, b):
    for name in ("A", "v", "beta"):
        assert (a * b).diff(name) == a.diff(name) * b + a * b.diff(name)


def test_diff_in_m_refuses_sqrt_m():
    assert (P.var("m", 3) * P.var("A")).diff("m") == P.var("m", 2) * P.var("A") * 3
    with pytest.raises(ValueError):
        (P.var("s") * P.var("A")).diff("m")
    with pytest.raises(ValueError):
        P.var("A").diff("s")


def test_normalized_strips_content_and_sign():
    p = (P.var("alpha") * P.var("A") * 9 - P.var("beta") * P.var("B", 2) * 12) * P.var("m") * Fraction(-1, 3)
    n = p.normalized()
    assert n == P.var("alpha") * P.var("A") * 3 - P.var("beta") * P.var("B", 2) * 4


def test_json_roundtrip():
    p = P.var("alpha") * Fraction(3, 7) - P.var("v") + P.var("s") * P.var("B", 2)
    assert P.from_json(p.to_json()) == p


def test_evaluate():
    p = P.var("A") * 2 + P.var("B", 2) * P.var("beta")
    assert p.evaluate({"A": 1.5, "B": 2.0, "beta": 0.1}) == pytest.approx(3.4)


# --- differential rings -----------------------------------------------------

def _fd(expr, values, y, h=1e-5):
    """4th-order central difference of expr(y)."""
    f = lambda t: expr.evaluate(values, t)
    return (-f(y + 2 * h) + 8 * f(y + h) - 8 * f(y - h) + f(y - 2 * h)) / (12 * h)


def test_hyperbolic_derivative_numeric():
    vals = {"A": 1.3, "B": 0.7}
    e = BasisExpression.monomial(HYPERBOLIC, (2, 0), P.var("A"))
    y = np.linspace(-3, 3, 9)
    d1 = e.differentiate()
    assert np.allclose(d1.evaluate(vals, y), _fd(e, vals, y), atol=1e-8)
    d3 = e.derivative(3)
    assert np.allclose(d3.evaluate(vals, y), _fd(e.derivative(2), vals, y), atol=1e-7)


def test_elliptic_derivative_numeric():
    m = 0.6
    vals = {"A": 1.1, "B": 1.4, "D": -0.2, "m": m, "s": math.sqrt(m)}
    e = BasisExpression(ELLIPTIC, {(0, 0, 2): P.var("A"), (1, 0, 1): P.var("s"), (0, 0, 0): P.var("D")})
    y = np.linspace(-2, 2, 9)
    for k in range(3):
        dk = e.derivative(k)
        assert np.allclose(dk.differentiate().evaluate(vals, y), _fd(dk, vals, y), atol=1e-7)


def test_canonical_form_is_reduced():
    e = BasisExpression.monomial(ELLIPTIC, (1, 3, 4))
    assert all(x[1] <= 1 and x[2] <= 1 for x in e.terms)
    h = BasisExpression.monomial(HYPERBOLIC, (1, 5))
    assert all(x[1] <= 1 for x in h.terms)


def test_elliptic_identities_numeric():
    m = 0.37
    vals = {"m": m, "s": math.sqrt(m), "B": 1.0}
    y = np.linspace(-4, 4, 17)
    # sn^2 dn^2 after reduction equals the product of the numeric values
    e = BasisExpression.monomial(ELLIPTIC, (0, 2, 2))
    cn, sn, dn = e.basis_values(vals, y)
    assert np.allclose(e.evaluate(vals, y), sn ** 2 * dn ** 2, atol=1e-14)


def test_family_mismatch():
    with pytest.raises(FamilyMismatchError):
        BasisExpression.constant(HYPERBOLIC, 1) + BasisExpression.constant(ELLIPTIC, 1)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 2), fractions), min_size=1, max_size=3),
       st.lists(st.tuples(st.integers(0, 3), st.integers(0, 2), fractions), min_size=1, max_size=3))
def test_leibniz_rule_hyperbolic(ta, tb):
    a = BasisExpression(HYPERBOLIC, {(i, j): c for i, j, c in ta})
    b = BasisExpression(HYPERBOLIC, {(i, j): c for i, j, c in tb})
    assert (a * b).differentiate() == a.differentiate() * b + a * b.differentiate()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 1), st.integers(0, 2), fractions), min_size=1, max_size=3),
       st.lists(st.tuples(st.integers(0, 2), st.integers(0, 1), st.integers(0, 2), fractions), min_size=1, max_size=3))
def test_leibniz_rule_elliptic(ta, tb):
    a = BasisExpression(ELLIPTIC, {(i, j, k): c for i, j, k, c in ta})
    b = BasisExpression(ELLIPTIC, {(i, j, k): c for i, j, k, c in tb})
    assert (a * b).differentiate() == a.differentiate() * b + a * b.differentiate()
