from __future__ import annotations

import pytest
from gmpy2 import mpq

from newtonpuiseux import upoly
from newtonpuiseux.scalars import ComplexField, ExactField, QuadraticNumber

QQ = ExactField()


def _roots(p, fld):
    return {(fld.format(r.value), r.multiplicity) for r in upoly.find_roots(p, fld).roots}


def test_roots_cubic_in_quadratic_field():
    # -C^3/2 + 11C/2 has roots 0, +-sqrt(11)
    p = [mpq(0), mpq(11, 2), mpq(0), mpq(-1, 2)]
    res = upoly.find_roots(p, ExactField(11))
    assert res.complete and res.count() == 3
    assert set(res.values()) == {0, QuadraticNumber(0, 1, 11), QuadraticNumber(0, -1, 11)}


def test_roots_linear():
    res = upoly.find_roots([mpq(-121, 2), mpq(-15)], QQ)
    assert res.values() == [mpq(-121, 30)]


def test_roots_double_zero():
    res = upoly.find_roots([0, 0, 1], QQ)
    assert [(r.value, r.multiplicity) for r in res.roots] == [(0, 2)]


def test_rational_field_promotes_quadratic_roots():
    res = upoly.find_roots([mpq(-11), 0, 1], QQ)
    assert res.complete and res.count() == 2


def test_irreducible_cubic_is_flagged():
    res = upoly.find_roots([mpq(-2), 0, 0, 1], QQ)
    assert not res.complete
    assert res.count() == 0 and len(res.unsolved) == 1


def test_numeric_roots_count_and_residual():
    fld = ComplexField()
    p = [fld.convert(c) for c in (-2, 0, 0, 1)]
    res = upoly.find_roots(p, fld)
    assert res.count() == 3
    for r in res.roots:
        assert abs(upoly.evaluate(p, r.value)) < 1e-60


def test_numeric_multiplicity_clusters():
    fld = ComplexField()
    p = [fld.convert(c) for c in (1, -2, 1)]
    res = upoly.find_roots(p, fld)
    assert [r.multiplicity for r in res.roots] == [2]


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        upoly.find_roots([0, 0], QQ)


def test_root_multiplicity_and_taylor():
    p = upoly.mul(upoly.mul([-1, 1], [-1, 1]), [2, 1])  # (C-1)^2 (C+2)
    assert upoly.root_multiplicity(p, 1, QQ) == 2
    assert upoly.root_multiplicity(p, 3, QQ) == 0
    assert upoly.taylor_coefficient(p, 1) == upoly.derivative(p)
    assert upoly.format_poly([mpq(0), mpq(11, 2), 0, mpq(-1, 2)], QQ) == "(-1/2)*C^3 + (11/2)*C"
