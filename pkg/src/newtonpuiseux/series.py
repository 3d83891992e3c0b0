"""Puiseux polynomials and characteristic data.

A :class:`PuiseuxPoly` is a finite sum ``sum a_i x**(i/n)``. Indices are
integers and may be negative (derivatives of low order terms), the zero
coefficients are never stored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from .operators import OperatorSpec
from .scalars import ComplexField, NotRepresentable, common_field, field_with_root


def _default_field(values):
    fld = common_field(values)
    return fld if fld is not None else ComplexField()


class PuiseuxPoly:
    """Finite Puiseux series ``sum coeffs[i] * x**(i/n)``.

    The ramification is kept as given; call :meth:`reduce` for the minimal one.
    """

    __slots__ = ("n", "coeffs", "field")

    def __init__(self, n: int, coeffs=None, field=None):
        if n < 1:
            raise ValueError("ramification must be positive")
        coeffs = dict(coeffs or {})
        if field is None:
            field = _default_field(coeffs.values())
        self.field = field
        self.n = int(n)
        self.coeffs = {
            int(i): field.convert(c) for i, c in coeffs.items() if not field.is_zero(c)
        }

    # construction helpers

    @classmethod
    def zero(cls, field=None, n: int = 1):
        return cls(n, {}, field)

    @classmethod
    def monomial(cls, c, exponent, field=None):
        e = Fraction(exponent)
        return cls(e.denominator, {e.numerator: c}, field)

    @classmethod
    def from_terms(cls, terms, field=None):
        """Build from ``(exponent, coefficient)`` pairs; repeated exponents add up."""
        terms = [(Fraction(e), c) for e, c in terms]
        n = 1
        for e, _ in terms:
            n = math.lcm(n, e.denominator)
        coeffs = {}
        for e, c in terms:
            i = int(e * n)
            coeffs[i] = coeffs.get(i, 0) + c
        return cls(n, coeffs, field)

    def with_field(self, field):
        return PuiseuxPoly(self.n, self.coeffs, field)

    # basic queries

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self):
        """``(exponent, coefficient)`` pairs in increasing exponent order."""
        return [(Fraction(i, self.n), self.coeffs[i]) for i in sorted(self.coeffs)]

    def exponents(self):
        return [Fraction(i, self.n) for i in sorted(self.coeffs)]

    def coefficient(self, exponent):
        e = Fraction(exponent) * self.n
        if e.denominator != 1:
            return self.field.zero
        return self.coeffs.get(int(e), self.field.zero)

    def order(self):
        """Smallest exponent with a nonzero coefficient; ``math.inf`` for zero."""
        if not self.coeffs:
            return math.inf
        return Fraction(min(self.coeffs), self.n)

    def reduce(self) -> "PuiseuxPoly":
        g = self.n
        for i in self.coeffs:
            g = math.gcd(g, i)
        if not self.coeffs:
            g = self.n
        return PuiseuxPoly(self.n // g, {i // g: c for i, c in self.coeffs.items()}, self.field)

    def reramify(self, m: int) -> "PuiseuxPoly":
        """Same series presented with ramification ``m * n``."""
        return PuiseuxPoly(self.n * m, {i * m: c for i, c in self.coeffs.items()}, self.field)

    def truncate(self, k: int) -> "PuiseuxPoly":
        """``sum_{0 < i <= k} a_i x**(i/n)``; the zero series for ``k = 0``."""
        if k < 0:
            raise ValueError("truncation index must be nonnegative")
        return PuiseuxPoly(self.n, {i: c for i, c in self.coeffs.items() if 0 < i <= k}, self.field)

    def truncate_exponent(self, bound) -> "PuiseuxPoly":
        """Keep the terms with exponent ``<= bound``."""
        bound = Fraction(bound)
        return PuiseuxPoly(
            self.n,
            {i: c for i, c in self.coeffs.items() if Fraction(i, self.n) <= bound},
            self.field,
        )

    # arithmetic

    def _align(self, other):
        fld = self.field if self.field == other.field else _merge_fields(self.field, other.field)
        n = math.lcm(self.n, other.n)
        a = {i * (n // self.n): c for i, c in self.coeffs.items()}
        b = {i * (n // other.n): c for i, c in other.coeffs.items()}
        return n, a, b, fld

    def __add__(self, other):
        if not isinstance(other, PuiseuxPoly):
            other = PuiseuxPoly(1, {0: other}, self.field)
        n, a, b, fld = self._align(other)
        for i, c in b.items():
            a[i] = a.get(i, 0) + c
        return PuiseuxPoly(n, a, fld)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxPoly(self.n, {i: -c for i, c in self.coeffs.items()}, self.field)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PuiseuxPoly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def mul(self, other, cap=None):
        """Product, dropping exponents above ``cap`` when given."""
        if not isinstance(other, PuiseuxPoly):
            if self.field.is_zero(other):
                return PuiseuxPoly(self.n, {}, self.field)
            return PuiseuxPoly(self.n, {i: c * other for i, c in self.coeffs.items()}, self.field)
        n, a, b, fld = self._align(other)
        limit = None if cap is None else math.floor(Fraction(cap) * n)
        out = {}
        for i, c in a.items():
            for j, d in b.items():
                if limit is not None and i + j > limit:
                    continue
                out[i + j] = out.get(i + j, 0) + c * d
        return PuiseuxPoly(n, out, fld)

    def __mul__(self, other):
        return self.mul(other)

    __rmul__ = __mul__

    def pow(self, e: int, cap=None):
        if e < 0:
            raise ValueError("negative powers are not series")
        result = PuiseuxPoly(self.n, {0: self.field.one}, self.field)
        base = self
        while e:
            if e & 1:
                result = result.mul(base, cap)
            e >>= 1
            if e:
                base = base.mul(base, cap)
        return result

    def __pow__(self, e: int):
        return self.pow(e)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxPoly):
            return NotImplemented
        a, b = self.reduce(), other.reduce()
        return a.n == b.n and a.coeffs == b.coeffs

    def __hash__(self):
        r = self.reduce()
        return hash((r.n, frozenset(r.coeffs.items())))

    def __repr__(self):
        return f"PuiseuxPoly({self.n}, {self.coeffs!r})"

    def __str__(self):
        from .parser import render_series

        return render_series(self)

    def sigma_apply(self, op: OperatorSpec) -> "PuiseuxPoly":
        return sigma_apply(self, op)

    def characteristic_data(self, base: int = 1) -> "CharacteristicData":
        return characteristic_data(self, base)


def _merge_fields(f, g):
    if f.exact and g.exact:
        if f.d is None:
            return g
        if g.d is None or g.d == f.d:
            return f
        raise TypeError(f"incompatible fields {f.name} and {g.name}")
    return f if not f.exact else g


def order(s: PuiseuxPoly):
    return s.order()


def truncate(s: PuiseuxPoly, k: int) -> PuiseuxPoly:
    return s.truncate(k)


def sigma_apply(s: PuiseuxPoly, op: OperatorSpec) -> PuiseuxPoly:
    """Term-wise image under the operator.

    Differential: ``x**(i/n) -> (i/n) x**(i/n - 1)``.
    q-difference: ``x**(i/n) -> q**(i/n) x**(i/n)``.
    """
    fld = s.field
    out = {}
    if op.is_differential:
        for i, c in s.coeffs.items():
            if i:
                out[i - s.n] = c * mpq(i, s.n)
    else:
        try:
            deltas = {i: op.delta(Fraction(i, s.n), fld) for i in s.coeffs}
        except NotRepresentable:
            fld = field_with_root(fld, op.q, s.n)
            s = s.with_field(fld)
            deltas = {i: op.delta(Fraction(i, s.n), fld) for i in s.coeffs}
        for i, c in s.coeffs.items():
            out[i] = c * deltas[i]
    return PuiseuxPoly(s.n, out, fld)


@dataclass(frozen=True)
class CharacteristicData:
    """Characteristic exponents of a reduced series.

    ``exponents`` are indices in units of ``1/n``; ``pairs`` are the reduced
    fractions ``(p_i, r_i)``; ``base`` is the lattice ``(1/base) Z`` the
    recurrence starts from (1 for the classical definition).
    """

    n: int
    exponents: tuple = ()
    pairs: tuple = ()
    base: int = 1

    @property
    def genus(self) -> int:
        return len(self.exponents)

    @property
    def factors(self) -> tuple:
        return tuple(r for _, r in self.pairs)

    def factor_at(self, k: int) -> int:
        """``r_l`` when ``k = e_l``, else 1."""
        for e, (_, r) in zip(self.exponents, self.pairs):
            if e == k:
                return r
        return 1

    def index_of(self, k: int):
        """1-based position of ``k`` among the characteristic exponents, or None."""
        for pos, e in enumerate(self.exponents, 1):
            if e == k:
                return pos
        return None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "genus": self.genus,
            "exponents": list(self.exponents),
            "pairs": [list(p) for p in self.pairs],
            "factors": list(self.factors),
            "base": self.base,
        }


def characteristic_data(s: PuiseuxPoly, base: int = 1) -> CharacteristicData:
    """Run the characteristic exponent recurrence on ``s``.

    Walking the support in increasing order, an index ``e`` is characteristic
    when ``e/n`` leaves the current lattice ``(1/D) Z``; then ``D*e/n = p/r`` in
    lowest terms and ``D`` becomes ``D*r``. ``D`` starts at ``base`` so that
    covered equations over ``x**(1/m)`` can measure refinements relative to
    their own grid. Indices refer to ``n = lcm(base, reduced ramification)``.
    """
    if s.is_zero():
        raise ValueError("characteristic data of the zero series")
    r = s.reduce()
    n = r.n
    if base != 1:
        n = math.lcm(n, base)
        r = r.reramify(n // r.n)
    D = base
    exps, pairs = [], []
    for i in sorted(r.coeffs):
        t = Fraction(D * i, n)
        if t.denominator != 1:
            exps.append(i)
            pairs.append((t.numerator, t.denominator))
            D *= t.denominator
    return CharacteristicData(n, tuple(exps), tuple(pairs), base)
