from __future__ import annotations

import pytest
from gmpy2 import mpq

from newtonpuiseux.scalars import (
    ComplexField,
    ExactField,
    NotRepresentable,
    QuadraticNumber,
    exact_root,
    field_from_name,
    squarefree_decomposition,
)


def test_squarefree_decomposition():
    assert squarefree_decomposition(44) == (2, 11)
    assert squarefree_decomposition(11) == (1, 11)


def test_quadratic_arithmetic():
    r = QuadraticNumber(0, 1, 11)
    assert r * r == 11
    assert (1 + r) * (1 - r) == -10
    assert (1 / (1 + r)) * (1 + r) == 1
    assert (r ** 3) == QuadraticNumber(0, 11, 11)


def test_exact_root():
    assert exact_root(mpq(9, 4), 2) == mpq(3, 2)
    assert exact_root(mpq(11), 2) == QuadraticNumber(0, 1, 11)
    with pytest.raises(NotRepresentable):
        exact_root(mpq(2), 3)


def test_exact_field_zero_is_decidable():
    f = ExactField(11)
    assert f.is_zero(QuadraticNumber(0, 0, 11))
    assert not f.is_zero(QuadraticNumber(mpq(1, 10**40), 0, 11))


def test_numeric_field_threshold_is_explicit():
    f = ComplexField(256)
    assert f.is_zero(f.convert(mpq(1, 2 ** 140)))
    assert not f.is_zero(f.convert(mpq(1, 2 ** 100)))
    g = ComplexField(256, eps=mpq(1, 2 ** 90))
    assert g.is_zero(g.convert(mpq(1, 2 ** 100)))


def test_field_from_name():
    assert field_from_name("rational") == ExactField()
    assert field_from_name("quadratic:11") == ExactField(11)
    assert isinstance(field_from_name("numeric", 128), ComplexField)
    with pytest.raises(ValueError):
        field_from_name("octonion")
