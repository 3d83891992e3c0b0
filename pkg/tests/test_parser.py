from __future__ import annotations

import pytest
from gmpy2 import mpq

from newtonpuiseux import OperatorSpec, parse_equation, parse_scalar, parse_series
from newtonpuiseux.parser import ParseError, render_series
from newtonpuiseux.scalars import ExactField, QuadraticNumber

DIFF = OperatorSpec.differential()


def test_series_literal():
    s = parse_series("- x - sqrt(11)*x^(3/2) - (121/30)*x^2")
    assert s.n == 2
    assert s.coeffs == {2: -1, 3: QuadraticNumber(0, -1, 11), 4: mpq(-121, 30)}


def test_series_round_trip():
    s = parse_series("- x - sqrt(11)*x^(3/2) - (121/30)*x^2")
    assert parse_series(render_series(s), s.field) == s


def test_scalars():
    assert parse_scalar("3/4") == mpq(3, 4)
    assert parse_scalar("0.25") == mpq(1, 4)
    assert parse_scalar("2*sqrt(11)") == QuadraticNumber(0, 2, 11)
    assert complex(parse_scalar("3+i/4")) == complex(3, 0.25)


def test_parenthesised_groups_expand():
    P = parse_equation("(x + y)^2 + (x - y)*y1", DIFF)
    assert P.to_text() == parse_equation("x^2 + 2*x*y + y^2 + x*y1 - y*y1", DIFF).to_text()


def test_syntax_error_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_equation("x + * y", DIFF)
    assert exc.value.position == 4


def test_y1_degree_two_rejected():
    with pytest.raises(ParseError):
        parse_equation("y1^2 + x", DIFF)
    with pytest.raises(ParseError):
        parse_equation("y1*(y1 + x)", DIFF)


def test_unknown_symbol_rejected():
    with pytest.raises(ParseError):
        parse_equation("x + z", DIFF)


def test_quadratic_coefficients_need_matching_field():
    P = parse_equation("sqrt(11)*x*y + y^2", DIFF, ExactField(11))
    assert P.field == ExactField(11)
