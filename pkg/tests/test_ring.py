from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _strategies import gaussian, laurent, monomial, point
from dnreflect.ring import (
    ONE,
    ZERO,
    GaussianRational,
    LaurentPoly,
    PoleError,
    S,
    X,
    parse_monomial,
    q_binomial,
    q_factorial,
    q_integer,
    q_pow,
    s_pow,
)


def test_gaussian_normalization():
    g = GaussianRational(Fraction(2, 4), Fraction(-3, 6))
    assert g.re == Fraction(1, 2) and g.im == Fraction(-1, 2)
    assert g.canonical() == "(1/2)+(-1/2)i"
    assert GaussianRational(0, 1) * GaussianRational(0, 1) == -1


def test_gaussian_inverse():
    g = GaussianRational(3, -4)
    assert g * g.inverse() == 1
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


def test_difference_of_squares():
    assert (S - S.inverse_monomial()) * (S + S.inverse_monomial()) == s_pow(2) - s_pow(-2)


def test_additive_identity():
    p = X * 3 + S
    assert p + ZERO == p


def test_xi_product_n4():
    xi = q_pow(-6)
    p = (X - q_pow(-2)) * (X - xi)
    expected = X * X - (s_pow(-4) + s_pow(-12)) * X + s_pow(-16)
    assert p == expected


def test_zero_terms_dropped():
    p = LaurentPoly({(1, 0, 0): 1, (0, 0, 0): 0})
    assert len(p) == 1
    assert (p - p) == ZERO and not (p - p)


def test_substitute_examples():
    assert (X * X).substitute("x", X * LaurentPoly.monomial(1, y=1)) == LaurentPoly.monomial(1, x=2, y=2)
    assert X.substitute("x", X.inverse_monomial()) == LaurentPoly.monomial(1, x=-1)
    k = s_pow(2) * (1 - X)  # k(x) at n = 4
    got = k.tilde().substitute("x", X.inverse_monomial())
    assert got == s_pow(-2) * (1 - LaurentPoly.monomial(1, x=-1))


def test_substitute_rejects_non_monomial():
    with pytest.raises(ValueError):
        X.substitute("x", X + 1)


def test_evaluate_examples():
    assert s_pow(2).evaluate(s=2) == pytest.approx(4)
    with pytest.raises(PoleError):
        X.inverse_monomial().evaluate(x=0)
    p = (X - q_pow(-2)) * (X - q_pow(-6))
    s, x = 0.9, 0.5
    direct = (x - s**-4) * (x - s**-12)
    assert p.evaluate(s=s, x=x) == pytest.approx(direct, rel=1e-12)


def test_canonical_form():
    p = LaurentPoly({(1, 0, 0): GaussianRational(Fraction(1, 2), 1), (-1, 2, 0): -3})
    assert p.canonical() == "(-3/1)+(0/1)i * s^-1 x^2 y^0 + (1/2)+(2/2)i * s^1 x^0 y^0"
    assert ZERO.canonical() == "0"


def test_parse_monomial():
    assert parse_monomial("s") == S
    assert parse_monomial("-i*s^-2*x") == LaurentPoly.monomial(GaussianRational(0, -1), s=-2, x=1)
    assert parse_monomial("1/x") == X.inverse_monomial()
    assert parse_monomial("1/2") == LaurentPoly.constant(Fraction(1, 2))
    with pytest.raises(ValueError):
        parse_monomial("z")


def test_q_binomial_examples():
    assert q_binomial(2, 1) == s_pow(2) + s_pow(-2)
    assert q_binomial(5, 0) == ONE
    assert q_binomial(2, 2) == ONE
    with pytest.raises(ValueError):
        q_binomial(1, 2)


def test_q_integer():
    assert q_integer(3) == q_pow(2) + 1 + q_pow(-2)
    assert q_integer(0) == ZERO


def test_negative_power_of_non_monomial():
    with pytest.raises(ValueError):
        (X + 1) ** -1
    assert (2 * X) ** -2 * (2 * X) ** 2 == ONE


# -- properties -------------------------------------------------------------------


@given(laurent, laurent, laurent)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(laurent, laurent, point, point, point)
def test_evaluation_homomorphism(p, r, s, x, y):
    lhs = (p * r).evaluate(s, x, y)
    rhs = p.evaluate(s, x, y) * r.evaluate(s, x, y)
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(rhs))
    lhs = (p + r).evaluate(s, x, y)
    assert abs(lhs - p.evaluate(s, x, y) - r.evaluate(s, x, y)) <= 1e-10 * (1 + abs(lhs))


@given(laurent)
def test_double_inversion_identity(p):
    inv = X.inverse_monomial()
    assert p.substitute("x", inv).substitute("x", inv) == p
    assert p.tilde().tilde() == p


@given(laurent, monomial)
def test_substitution_is_homomorphism(p, m):
    q = p * p + p
    assert q.substitute("y", m) == p.substitute("y", m) * p.substitute("y", m) + p.substitute("y", m)


@given(st.integers(0, 7), st.data())
def test_q_binomial_symmetry(a, data):
    b = data.draw(st.integers(0, a))
    assert q_binomial(a, b) == q_binomial(a, a - b)
    assert q_binomial(a, b) * q_factorial(b) * q_factorial(a - b) == q_factorial(a)
    assert q_binomial(a, b).tilde() == q_binomial(a, b)


@given(gaussian, gaussian)
def test_gaussian_field(a, b):
    if b:
        assert (a / b) * b == a
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
