from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from veronalt.termlang import (
    TermSyntaxError,
    UnknownGeneratorError,
    format_poly,
    parse,
    parse_with_names,
)
from veronalt.terms import FreePoly, associator

x, y, z = (FreePoly.gen(i) for i in range(3))


def test_parse_builtins():
    assert parse("assoc(x,y,z)") == associator(x, y, z)
    assert parse("comm(x,y)") == x * y - y * x
    assert parse("lpow(x,3)") == (x * x) * x
    assert parse("0").is_zero()


def test_parse_coefficients_and_signs():
    assert parse("-3/2*x*y + 2 x") == Fraction(-3, 2) * (x * y) + 2 * x
    assert parse("x*y*z") == (x * y) * z


def test_format_round_trip_example():
    p = x * y - Fraction(3, 2) * (x * (y * z))
    assert format_poly(p) == "x*y - 3/2*x*(y*z)"
    assert parse(format_poly(p)) == p
    assert format_poly(FreePoly.zero()) == "0"


def test_syntax_errors_have_positions():
    with pytest.raises(TermSyntaxError) as e:
        parse("x*(y")
    assert e.value.position == 4
    with pytest.raises(TermSyntaxError):
        parse("1/0*x")


def test_unknown_generators():
    with pytest.raises(UnknownGeneratorError):
        parse("r*s")
    with pytest.raises(UnknownGeneratorError):
        parse("x*z", rank=2)
    with pytest.raises(UnknownGeneratorError):
        parse("a*b", names=["a"])


def test_auto_names():
    p, names = parse_with_names("assoc(r*x,s,x)")
    assert names == ["r", "x", "s"]
    assert p == associator(x * y, z, y)
    _, names = parse_with_names("x*z")
    assert names == ["x", "y", "z"]


coef = st.fractions(min_value=-5, max_value=5, max_denominator=6)
leaf = st.sampled_from([x, y, z])
tree = st.recursive(leaf, lambda kids: st.builds(lambda a, b: a * b, kids, kids), max_leaves=6)


@given(st.lists(st.tuples(coef, tree), min_size=0, max_size=5))
def test_parse_format_round_trip(terms):
    p = sum((c * t for c, t in terms), FreePoly.zero())
    assert parse(format_poly(p)) == p
