import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lekac.divided_power import (
    Shape,
    SuperPolynomial,
    format_monomial,
    format_polynomial,
    monomial_degree,
    monomial_parity,
    multiply,
    parse_monomial,
    partial,
)

SH = Shape(2, 2, 5)


def monos(shape):
    return st.sampled_from(shape.monomials())


def polys(shape, max_terms=4):
    return st.dictionaries(monos(shape), st.integers(1, shape.p - 1), max_size=max_terms).map(
        lambda d: SuperPolynomial(shape, d)
    )


def _inversions(seq):
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


def product_oracle(r, s, shape):
    """Even part: binomial coefficients; odd part: sign of the sorting permutation."""
    p, m = shape.p, shape.m
    c = 1
    for a, b in zip(r[:m], s[:m]):
        if a + b >= p:
            return 0, None
        c *= math.comb(a + b, a)
    odd_r = [i for i in range(m, shape.nvars) if r[i]]
    odd_s = [i for i in range(m, shape.nvars) if s[i]]
    if set(odd_r) & set(odd_s):
        return 0, None
    c *= (-1) ** _inversions(odd_r + odd_s)
    return c % p, tuple(a + b for a, b in zip(r, s))


def test_dimension():
    assert SH.dim() == 5**2 * 2**2
    assert len(SH.monomials()) == SH.dim()
    assert Shape(1, 1, 7).dim() == 14


def test_bad_prime():
    with pytest.raises(ValueError):
        Shape(1, 1, 3)


@given(monos(SH), monos(SH))
def test_monomial_product_against_oracle(r, s):
    f = SuperPolynomial.monomial(SH, r) * SuperPolynomial.monomial(SH, s)
    c, t = product_oracle(r, s, SH)
    if c == 0:
        assert not f
    else:
        assert f == SuperPolynomial.monomial(SH, t, c)


def test_divided_power_rule():
    x1 = SuperPolynomial.generator(SH, 1)
    f = SuperPolynomial.one(SH)
    for k in range(1, 5):
        f = f * x1
        # x1^k = k! x1^(k)
        assert f == SuperPolynomial.monomial(SH, (k, 0, 0, 0), math.factorial(k))
    assert not f * x1  # x1^5 = 5! x1^(5) = 0


def test_odd_square_vanishes():
    x3 = SuperPolynomial.generator(SH, 3)
    assert not x3 * x3
    x4 = SuperPolynomial.generator(SH, 4)
    assert x3 * x4 == -(x4 * x3)


@settings(max_examples=60)
@given(polys(SH), polys(SH), polys(SH))
def test_associative(f, g, h):
    assert (f * g) * h == f * (g * h)


@settings(max_examples=80)
@given(monos(SH), monos(SH))
def test_supercommutative(r, s):
    f, g = SuperPolynomial.monomial(SH, r), SuperPolynomial.monomial(SH, s)
    sign = -1 if monomial_parity(r, SH) and monomial_parity(s, SH) else 1
    assert f * g == (g * f).scale(sign)


@settings(max_examples=80)
@given(st.integers(1, 4), monos(SH), monos(SH))
def test_partial_is_superderivation(i, r, s):
    f, g = SuperPolynomial.monomial(SH, r), SuperPolynomial.monomial(SH, s)
    d_odd = 1 if i > SH.m else 0
    sign = -1 if d_odd and monomial_parity(r, SH) else 1
    assert partial(i, f * g) == partial(i, f) * g + (f * partial(i, g)).scale(sign)


def test_partial_on_divided_powers():
    f = SuperPolynomial.monomial(SH, (3, 1, 1, 0))
    assert partial(1, f) == SuperPolynomial.monomial(SH, (2, 1, 1, 0))
    assert partial(3, f) == SuperPolynomial.monomial(SH, (3, 1, 0, 0))
    # the odd derivative passes no odd factor here; d4 kills it
    assert not partial(4, f)
    g = SuperPolynomial.monomial(SH, (0, 0, 1, 1))
    assert partial(4, g) == SuperPolynomial.monomial(SH, (0, 0, 1, 0), -1)
    with pytest.raises(IndexError):
        partial(5, f)


def test_parity_and_degree():
    assert monomial_parity((3, 0, 1, 1), SH) == 0
    assert monomial_parity((3, 0, 1, 0), SH) == 1
    assert monomial_degree((3, 1, 1, 0)) == 5
    f = SuperPolynomial.monomial(SH, (1, 0, 0, 0)) + SuperPolynomial.monomial(SH, (0, 0, 1, 0))
    with pytest.raises(ValueError):
        f.parity()
    even, odd = f.parts_by_parity()
    assert even.parity() == 0 and odd.parity() == 1


@given(monos(SH))
def test_text_round_trip(r):
    assert parse_monomial(format_monomial(r), SH) == r


def test_text_syntax():
    assert format_monomial((3, 0, 1, 0)) == "x1^(3)*x3"
    assert format_monomial((0, 0, 0, 0)) == "1"
    assert parse_monomial("x1^(3)*x4", SH) == (3, 0, 0, 1)
    with pytest.raises(ValueError):
        parse_monomial("x3^(2)", SH)
    with pytest.raises(ValueError):
        parse_monomial("y1", SH)
    f = SuperPolynomial.monomial(SH, (1, 0, 0, 0), 2)
    assert format_polynomial(f) == "2*x1"
    assert format_polynomial(SuperPolynomial(SH)) == "0"


def test_multiply_function_matches_operator():
    f = SuperPolynomial.monomial(SH, (1, 1, 0, 1))
    g = SuperPolynomial.monomial(SH, (2, 0, 1, 0))
    assert multiply(f, g) == f * g
