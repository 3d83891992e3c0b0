from __future__ import annotations

import math
from fractions import Fraction

import pytest
from gmpy2 import mpq

from newtonpuiseux import OperatorSpec, PuiseuxPoly, characteristic_data, parse_series
from newtonpuiseux.series import order, sigma_apply, truncate
from newtonpuiseux.scalars import ExactField

from conftest import WORKED_SOL

Q11 = ExactField(11)


def test_order():
    assert order(PuiseuxPoly.zero()) == math.inf
    assert order(parse_series("-x - sqrt(11)*x^(3/2)")) == 1
    assert order(parse_series("x^(4/6) + x^(5/6)")) == Fraction(2, 3)


def test_truncate():
    s = parse_series(WORKED_SOL, Q11)
    assert truncate(s, 2) == parse_series("-x", Q11)
    assert truncate(s, 0).is_zero()
    assert truncate(s, 3) == parse_series("-x - sqrt(11)*x^(3/2)", Q11)


def test_sigma_differential():
    D = OperatorSpec.differential()
    assert sigma_apply(parse_series("x^(3/2)"), D) == parse_series("3/2*x^(1/2)")
    got = sigma_apply(parse_series("-x - sqrt(11)*x^(3/2)"), D)
    assert got == parse_series("-1 - 3/2*sqrt(11)*x^(1/2)", Q11)
    assert sigma_apply(parse_series("5"), D).is_zero()


def test_sigma_q_difference():
    op = OperatorSpec.q_difference(4)
    assert sigma_apply(parse_series("x^(3/2)"), op) == parse_series("8*x^(3/2)")


def test_sigma_q_uses_fixed_root():
    op = OperatorSpec.q_difference(4, -2, 2)
    assert sigma_apply(parse_series("x^(1/2)"), op) == parse_series("-2*x^(1/2)")
    with pytest.raises(ValueError):
        OperatorSpec.q_difference(16, 2, 2)


def test_characteristic_data_worked_example():
    cd = characteristic_data(parse_series(WORKED_SOL, Q11))
    assert (cd.genus, cd.exponents, cd.factors) == (1, (3,), (2,))


def test_characteristic_data_smooth():
    assert characteristic_data(parse_series("x")).genus == 0


def test_characteristic_data_two_pairs():
    cd = characteristic_data(parse_series("x^(4/6) + x^(5/6)"))
    assert cd.genus == 2
    assert cd.exponents == (4, 5)
    assert cd.factors == (3, 2)
    assert tuple(p for p, _ in cd.pairs) == (2, 5)


def test_reduce_and_reramify():
    s = PuiseuxPoly(6, {3: mpq(1), 9: mpq(2)})
    assert s.reduce().n == 2
    assert s.reduce().reduce() == s.reduce()
    t = s.reduce().reramify(5)
    assert t.n == 10 and t.reduce() == s.reduce()
    assert characteristic_data(t.reduce()) == characteristic_data(s.reduce())


def test_arithmetic():
    a = parse_series("x + x^(1/2)")
    b = parse_series("x^(1/3) - x")
    assert (a + b) - b == a
    assert a * b == parse_series("x^(4/3) + x^(5/6) - x^2 - x^(3/2)")
    assert a ** 2 == a * a
    assert parse_series("sqrt(11)*x", Q11) * parse_series("sqrt(11)*x", Q11) == parse_series("11*x^2")
