import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewpit.errors import ParseError
from skewpit.sparse import SparsePoly, format_poly, parse_poly


def test_canonicalisation():
    p = SparsePoly(2, (((1, 0), 3), ((0, 2), 1), ((1, 0), -3), ((0, 0), 0)))
    assert p.terms == (((0, 2), 1),)
    q = SparsePoly(1, (((5,), 7), ((2,), 4)), modulus=7)
    assert q.terms == (((2,), 4),)
    with pytest.raises(ValueError):
        SparsePoly(1, (((1, 2), 1),))
    with pytest.raises(ValueError):
        SparsePoly(1, (((-1,), 1),))


def test_degree_and_size():
    p = parse_poly("3*x1^17 + -1*x2^5")
    assert p.nvars == 2
    assert p.degree(1) == 17 and p.degree(2) == 5
    assert SparsePoly(1).degree() == -1
    assert p.size() == 2 + 5 + 1 + 3
    assert p.max_abs_coeff() == 3


def test_format():
    assert format_poly(parse_poly("3*x1^17 + -1*x2^5")) == "3*x1^17 + -1*x2^5"
    assert format_poly(parse_poly("x + 1 + x^2")) == "1*x^2 + 1*x + 1"
    assert format_poly(SparsePoly(3)) == "0"
    assert str(parse_poly("-x^18446744073709551616")) == "-1*x^18446744073709551616"


def test_parse_forms():
    assert parse_poly("2*3*x*x") == SparsePoly.monomial(6, (2,))
    assert parse_poly("x - x") == SparsePoly(1)
    assert parse_poly("+-x") == SparsePoly.monomial(-1, (1,))
    assert parse_poly("x2", nvars=3).nvars == 3
    for bad in ["", "x^", "2**x", "y", "x0", "x + + "]:
        with pytest.raises(ParseError):
            parse_poly(bad)
    with pytest.raises(ParseError):
        parse_poly("x3", nvars=2)


monomials = st.tuples(st.tuples(st.integers(0, 2**70), st.integers(0, 9)), st.integers(-10**6, 10**6))


@given(st.lists(monomials, max_size=6))
def test_format_parse_round_trip(terms):
    p = SparsePoly(2, tuple(terms))
    assert parse_poly(format_poly(p), nvars=2) == p


@given(st.lists(monomials, max_size=6), st.sampled_from([2, 3, 7]))
def test_reduce_then_lift(terms, p):
    poly = SparsePoly(2, tuple(terms))
    red = poly.reduce_mod(p)
    assert all(0 < c < p for _, c in red.terms)
    assert red.lift().reduce_mod(p) == red
