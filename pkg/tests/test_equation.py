from __future__ import annotations

import random
from fractions import Fraction

import pytest
from gmpy2 import mpq

from newtonpuiseux import OperatorSpec, nu0, parse_equation, parse_series
from newtonpuiseux.equation import CoveredEquation, evaluate, substitute_parametric, validate_covered
from newtonpuiseux.scalars import QuadraticNumber

from conftest import DIFF, FIG_EQ, Q11, WORKED_EQ, pts

QOP = OperatorSpec.q_difference(2)


def test_fig_b_support_is_shifted():
    assert set(parse_equation(FIG_EQ, DIFF).B) == {(0, 4), (1, 2)}
    assert set(parse_equation(FIG_EQ, QOP).B) == {(1, 4), (2, 2)}


def test_a_only_equation():
    P = parse_equation("y - x", DIFF)
    assert set(P.A) == {(1, 0), (0, 1)} and not P.B


def test_cloud_fig():
    assert pts(parse_equation(FIG_EQ, DIFF).cloud_keys()) == {
        ("0", 4), ("1", 2), ("3", 3), ("3", 1), ("5", 0)}


def test_cloud_sources():
    marks = {(str(c.iota), c.j): set(c.sources) for c in parse_equation(FIG_EQ, QOP).cloud()}
    assert marks[("1", 4)] == {"B"} and marks[("0", 4)] == {"A"}


def test_shift_round_trip():
    P = parse_equation(FIG_EQ, DIFF)
    Q = CoveredEquation.from_raw(P.op, P.m, P.A, P.raw_B(), P.field)
    assert Q.equals(P)


def test_text_round_trip():
    for text, op in ((FIG_EQ, DIFF), (FIG_EQ, QOP), (WORKED_EQ, DIFF)):
        P = parse_equation(text, op)
        assert parse_equation(P.to_text(), op).equals(P)


def test_differential_cloud_reaches_minus_one_only_for_diff():
    P = parse_equation("-3*x^2 + 2*y*y1", DIFF)
    assert ("-1", 2) in pts(P.cloud_keys())
    Q = parse_equation("-3*x^2 + 2*y*y1", QOP)
    assert min(i for i, _ in Q.cloud_keys()) >= 0


def test_validate_covered():
    assert validate_covered(parse_equation(WORKED_EQ, DIFF)).valid
    assert validate_covered(parse_equation("y - x", DIFF)).valid
    rep = validate_covered(parse_equation("4*y - y1", OperatorSpec.q_difference(16, 4, 2)))
    assert not rep.valid and rep.b00 == -1 and rep.warnings


def test_substitute_worked_step():
    P0 = parse_equation(WORKED_EQ, DIFF, Q11)
    P2 = P0.substitute(-1, 1, 1)
    expected = parse_equation("y^4 + x*y^3 + x^4*y + x^7 + (-x*y^3 - x^2*y^2 + 3*x^5)*y1", DIFF, Q11)
    assert P2.equals(expected)


P3_TEXT = (
    "y^4 - 5/2*sqrt(11)*x^(3/2)*y^3 - 3/2*sqrt(11)*x^(5/2)*y^2 + x*y^3 + 33/2*x^3*y^2 + x^4*y"
    " + 11/2*sqrt(11)*x^(9/2)*y - 121/2*x^6 + x^7"
    " + (-x*y^3 - x^2*y^2 + 3*sqrt(11)*x^(5/2)*y^2 + 2*sqrt(11)*x^(7/2)*y - 33*x^4*y - 8*x^5"
    " + 11*sqrt(11)*x^(11/2))*y1"
)


def test_substitute_second_step():
    P0 = parse_equation(WORKED_EQ, DIFF, Q11)
    P3 = P0.substitute(-1, 1, 1).substitute(QuadraticNumber(0, -1, 11), 3, 2)
    assert P3.equals(parse_equation(P3_TEXT, DIFF, Q11))
    assert P3.m == 2
    assert P3.a(Fraction(6), 0) == mpq(-121, 2)


def test_substitute_zero_is_identity():
    P = parse_equation(WORKED_EQ, DIFF)
    assert P.substitute(0, 3, 2).equals(P)


def test_substitute_composes_additively():
    P = parse_equation(FIG_EQ, OperatorSpec.q_difference(4))
    a = P.substitute(2, 1, 2).substitute(3, 1, 2)
    assert a.equals(P.substitute(5, 1, 2))


def test_parametric_matches_substitute():
    rng = random.Random(7)
    P = parse_equation(FIG_EQ, DIFF)
    par = substitute_parametric(P, 3, 2)
    for _ in range(10):
        c = mpq(rng.randint(-9, 9), rng.randint(1, 5))
        assert par.evaluate(c).equals(P.substitute(c, 3, 2))


def test_parametric_dicritical_coefficient_vanishes():
    P0 = parse_equation(WORKED_EQ, DIFF)
    par = substitute_parametric(P0, 1, 1)
    assert all(c == 0 for c in par.a(Fraction(2), 0))


def test_nu0():
    assert nu0(parse_equation(FIG_EQ, DIFF)) == 3
    assert nu0(parse_equation("-3*x^2 + 2*y*y1", DIFF)) == 1
    assert nu0(parse_equation("y - x", DIFF)) == 1


def test_evaluate_exact_solution():
    P = parse_equation("-3*x^2 + 2*y*y1", DIFF)
    assert evaluate(P, parse_series("x^(3/2)")).is_zero()
    assert not evaluate(P, parse_series("x^(5/2)")).is_zero()


def test_zero_equation_rejected():
    with pytest.raises(ValueError):
        nu0(parse_equation("0", DIFF))
