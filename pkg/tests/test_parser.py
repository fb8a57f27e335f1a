import pytest
from hypothesis import given
from hypothesis import strategies as st

from glacalc.errors import ParseError
from glacalc.parser import parse_expr, tokenize
from strategies import XY


@pytest.mark.parametrize("text, expected", [
    ("-x^2", "-x^2"),
    ("(-x)^2", "x^2"),
    ("2 - -x", "x + 2"),
    ("x - y - 1", "x - y - 1"),
    ("x/y/2", "(x/2)/y"),
    ("  x*  y ", "x*y"),
    ("(x+y)^0", "1"),
    ("x^10/x^9", "x"),
])
def test_precedence_and_associativity(text, expected):
    assert str(parse_expr(text, XY)) == expected


@pytest.mark.parametrize("text, message, position", [
    ("x +", "unexpected end of input", 3),
    ("2x", "implicit multiplication", 1),
    ("x (y)", "implicit multiplication", 2),
    ("x^-1", "negative exponent", 3),
    ("x^y", "exponent must be a nonnegative integer", 2),
    ("1.5*x", "non-integer literal", 0),
    ("q + 1", "unknown identifier", 0),
    ("x/0", "division by zero", 1),
    ("x/(y - y)", "division by zero", 1),
    ("(x + 1", "expected ')'", 6),
    ("x $ y", "unexpected character", 2),
    ("", "empty expression", 0),
    ("x)", "unexpected ')'", 1),
])
def test_errors_report_position(text, message, position):
    with pytest.raises(ParseError) as info:
        parse_expr(text, XY)
    assert message in str(info.value)
    assert info.value.position == position


def test_basis_atoms_not_allowed_in_scalars():
    with pytest.raises(ParseError):
        parse_expr("x * e^{1}", XY)


def test_tokenize_basis():
    toks = tokenize("x * e^{1,2} + e_{3}", allow_basis=True)
    kinds = [t.kind for t in toks]
    assert kinds == ["ident", "op", "cobasis", "op", "basis", "end"]
    assert toks[2].value == (1, 2) and toks[4].value == (3,)


@given(st.integers(-10**6, 10**6), st.integers(0, 6))
def test_integer_powers(n, k):
    assert parse_expr(f"({n})^{k}", XY) == n**k
