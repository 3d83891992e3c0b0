"""Covered equations ``P = A(x, y) + B(x, y) * y1``.

Coefficients are stored sparsely, keyed by ``(i, j)`` where the x-exponent is
``i / m`` for the ramification ``m``. ``B`` is kept in the shifted indexing: a
raw monomial ``b x**a y**j y1`` lives at ``(a - o, j + 1)`` with ``o`` the order
of the operator (1 for ``d/dx``, 0 for the q-dilation). In these coordinates
the cloud, the polygon and the initial polynomial read the same way for both
operators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import upoly
from .operators import OperatorSpec
from .scalars import ComplexField, common_field
from .series import PuiseuxPoly, _merge_fields, sigma_apply


@dataclass(frozen=True)
class CloudPoint:
    iota: Fraction
    j: int
    sources: frozenset

    @property
    def key(self):
        return (self.iota, self.j)

    def to_json(self):
        return [self.iota.numerator, self.iota.denominator, self.j, sorted(self.sources)]


@dataclass(frozen=True)
class CoveredReport:
    valid: bool
    a00: object
    b00: object
    warnings: tuple = ()

    def to_json(self, field):
        return {
            "valid": self.valid,
            "A00": field.to_json(self.a00),
            "B00": field.to_json(self.b00),
            "warnings": list(self.warnings),
        }


def _clean(d, field):
    return {k: v for k, v in d.items() if not field.is_zero(v)}


class CoveredEquation:
    """A first order, first degree equation in shifted coordinates.

    Instances are treated as immutable; every operation returns a new one.
    """

    __slots__ = ("op", "m", "A", "B", "field")

    def __init__(self, op: OperatorSpec, m: int, A, B, field=None):
        if m < 1:
            raise ValueError("ramification must be positive")
        if field is None:
            field = common_field(list(A.values()) + list(B.values()))
            if field is None:
                field = ComplexField()
        self.op = op
        self.m = int(m)
        self.field = field
        self.A = {(int(i), int(j)): field.convert(c) for (i, j), c in _clean(A, field).items()}
        self.B = {(int(i), int(j)): field.convert(c) for (i, j), c in _clean(B, field).items()}
        # substitutions into y1 can push A left of the axis, never past the B shift
        for (i, j) in self.A:
            if i < -self.op.order * self.m or j < 0:
                raise ValueError(f"A has a monomial outside the shifted range at {(i, j)}")
        for (i, j) in self.B:
            if i < -self.op.order * self.m or j < 1:
                raise ValueError(f"B has a monomial outside the shifted range at {(i, j)}")

    # construction

    @classmethod
    def from_raw(cls, op, m, A, B_raw, field=None):
        """Build from raw supports; ``B_raw[(a, j)]`` is the coefficient of ``x**(a/m) y**j y1``."""
        shift = op.order * m
        B = {(a - shift, j + 1): c for (a, j), c in B_raw.items()}
        return cls(op, m, A, B, field)

    @classmethod
    def from_terms(cls, op, A_terms, B_raw_terms, field=None):
        """From ``[(x_exponent, y_degree, coefficient)]`` lists, ``B`` given raw."""
        m = 1
        for e, _, _ in list(A_terms) + list(B_raw_terms):
            m = math.lcm(m, Fraction(e).denominator)
        A, B = {}, {}
        for e, j, c in A_terms:
            k = (int(Fraction(e) * m), j)
            A[k] = A.get(k, 0) + c
        for e, j, c in B_raw_terms:
            k = (int(Fraction(e) * m), j)
            B[k] = B.get(k, 0) + c
        return cls.from_raw(op, m, A, B, field)

    def with_field(self, field) -> "CoveredEquation":
        return CoveredEquation(self.op, self.m, self.A, self.B, field)

    def with_op(self, op) -> "CoveredEquation":
        return CoveredEquation.from_raw(op, self.m, self.A, self.raw_B(), self.field)

    def reramify(self, M: int) -> "CoveredEquation":
        """Same equation with keys in units of ``1/M`` (``m`` must divide ``M``)."""
        if M % self.m:
            raise ValueError(f"{self.m} does not divide {M}")
        f = M // self.m
        return CoveredEquation(
            self.op, M,
            {(i * f, j): c for (i, j), c in self.A.items()},
            {(i * f, j): c for (i, j), c in self.B.items()},
            self.field,
        )

    def reduce(self) -> "CoveredEquation":
        """Smallest ramification that holds every exponent."""
        g = self.m
        for (i, _) in list(self.A) + list(self.B):
            g = math.gcd(g, i)
        f = g if g else self.m
        return CoveredEquation(
            self.op, self.m // f,
            {(i // f, j): c for (i, j), c in self.A.items()},
            {(i // f, j): c for (i, j), c in self.B.items()},
            self.field,
        )

    # accessors

    def raw_B(self):
        shift = self.op.order * self.m
        return {(i + shift, j - 1): c for (i, j), c in self.B.items()}

    def is_zero(self) -> bool:
        return not self.A and not self.B

    def a(self, iota, j):
        t = Fraction(iota) * self.m
        if t.denominator != 1:
            return self.field.zero
        return self.A.get((int(t), j), self.field.zero)

    def b(self, iota, j):
        t = Fraction(iota) * self.m
        if t.denominator != 1:
            return self.field.zero
        return self.B.get((int(t), j), self.field.zero)

    def cloud(self):
        """Cloud points sorted by ``(iota, j)``."""
        keys = {}
        for k in self.A:
            keys.setdefault(k, set()).add("A")
        for k in self.B:
            keys.setdefault(k, set()).add("B")
        return [
            CloudPoint(Fraction(i, self.m), j, frozenset(src))
            for (i, j), src in sorted(keys.items())
        ]

    def cloud_keys(self):
        return sorted({(Fraction(i, self.m), j) for (i, j) in list(self.A) + list(self.B)})

    def grid(self) -> int:
        """Least ``r`` with every abscissa of the cloud in ``(1/r) Z``."""
        g = 0
        for (i, _) in list(self.A) + list(self.B):
            g = math.gcd(g, i)
        return self.m // math.gcd(g, self.m)

    def points_on_line(self, mu, alpha):
        """Keys ``(i, j)`` with ``j + (i/m)/mu == alpha``."""
        mu, alpha = Fraction(mu), Fraction(alpha)
        out = set()
        for (i, j) in list(self.A) + list(self.B):
            if j + Fraction(i, self.m) / mu == alpha:
                out.add((i, j))
        return out

    def restrict_to_line(self, mu, alpha) -> "CoveredEquation":
        keys = self.points_on_line(mu, alpha)
        return CoveredEquation(
            self.op, self.m,
            {k: v for k, v in self.A.items() if k in keys},
            {k: v for k, v in self.B.items() if k in keys},
            self.field,
        )

    def y_degree(self) -> int:
        return max([j for (_, j) in self.A] + [j - 1 for (_, j) in self.B] + [0])

    def equals(self, other) -> bool:
        """Same operator and same coefficients, independent of ramification."""
        if self.op != other.op:
            return False
        M = math.lcm(self.m, other.m)
        a, b = self.reramify(M), other.reramify(M)
        return a.A == b.A and a.B == b.B

    __eq__ = equals

    def __hash__(self):
        r = self.reduce()
        return hash((r.m, frozenset(r.A.items()), frozenset(r.B.items())))

    def __repr__(self):
        return f"CoveredEquation({self.to_text()!r}, op={self.op.kind})"

    # text

    def to_text(self) -> str:
        from .parser import render_monomials

        items = []
        for (i, j), c in sorted(self.A.items(), key=lambda kv: (-kv[0][1], kv[0][0])):
            items.append((Fraction(i, self.m), j, 0, c))
        for (i, j), c in sorted(self.raw_B().items(), key=lambda kv: (-kv[0][1], kv[0][0])):
            items.append((Fraction(i, self.m), j, 1, c))
        return render_monomials(items, self.field)

    def to_json(self) -> dict:
        return {
            "op": self.op.describe(),
            "ramification": self.m,
            "backend": self.field.name,
            "text": self.to_text(),
            "A": [[i, self.m, j, self.field.to_json(c)] for (i, j), c in sorted(self.A.items())],
            "B": [[i, self.m, j, self.field.to_json(c)] for (i, j), c in sorted(self.B.items())],
        }

    # algebra

    def substitute(self, c, k: int, n: int) -> "CoveredEquation":
        return substitute(self, c, k, n)

    def evaluate(self, s: PuiseuxPoly, cap=None) -> PuiseuxPoly:
        return evaluate(self, s, cap)


def parse_equation(text: str, op: OperatorSpec, field=None) -> CoveredEquation:
    """Parse ``A(x, y) + B(x, y)*y1`` (see :mod:`newtonpuiseux.parser`)."""
    from .parser import ParseError, parse_polynomial

    poly = parse_polynomial(text)
    A_terms, B_terms = [], []
    for (xe, ye, y1e), c in poly.items():
        if y1e >= 2:
            raise ParseError(f"y1 appears with degree {y1e}; only degree 1 is supported", 0, text)
        (B_terms if y1e else A_terms).append((xe, ye, c))
    if not A_terms and not B_terms:
        raise ParseError("the zero equation", 0, text)
    if field is not None and field.exact:
        vals = [c for _, _, c in A_terms + B_terms]
        fld = common_field(vals, field)
        if fld is None or fld != field:
            raise ParseError(f"coefficients do not fit backend {field.name}", 0, text)
    return CoveredEquation.from_terms(op, A_terms, B_terms, field)


def validate_covered(P: CoveredEquation) -> CoveredReport:
    """Check ``A(0,0) = B(0,0) = 0``; a failure is a warning only."""
    a00 = P.A.get((0, 0), P.field.zero)
    b00 = P.raw_B().get((0, 0), P.field.zero)
    warnings = []
    if not P.field.is_zero(a00):
        warnings.append(f"A(0,0) = {P.field.format(a00)} != 0")
    if not P.field.is_zero(b00):
        warnings.append(f"B(0,0) = {P.field.format(b00)} != 0")
    return CoveredReport(not warnings, a00, b00, tuple(warnings))


def nu0(P: CoveredEquation):
    """Multiplicity at the origin: least total degree over the raw supports."""
    if P.is_zero():
        raise ValueError("nu0 of the zero equation")
    degs = [Fraction(i, P.m) + j for (i, j) in P.A]
    degs += [Fraction(a, P.m) + j for (a, j) in P.raw_B()]
    v = min(degs)
    return int(v) if v.denominator == 1 else v


def _expand(P: CoveredEquation, k: int, n: int, coeff_power, add, field, delta):
    """Shared bookkeeping of the substitution ``y -> y + c x**(k/n)``.

    ``coeff_power(e, scalar)`` returns ``scalar * c**e`` in the target ring.
    """
    M = math.lcm(P.m, n)
    fm = M // P.m
    step = k * (M // n)  # mu in units of 1/M
    A, B = {}, {}
    for (i, j), a in P.A.items():
        base = i * fm
        for l in range(j + 1):
            key = (base + step * (j - l), l)
            add(A, key, coeff_power(j - l, a * comb(j, l)))
    for (i, j), b in P.B.items():
        base = i * fm
        db = delta * b
        for l in range(j):
            key = (base + step * (j - l), l)
            add(A, key, coeff_power(j - l, db * comb(j - 1, l)))
        for l in range(1, j + 1):
            key = (base + step * (j - l), l)
            add(B, key, coeff_power(j - l, b * comb(j - 1, l - 1)))
    return M, A, B


def substitute(P: CoveredEquation, c, k: int, n: int) -> CoveredEquation:
    """``P(x, y + c x**(k/n), y1 + sigma(c x**(k/n)))`` expanded exactly."""
    if k < 1 or n < 1:
        raise ValueError("substitution needs k >= 1 and n >= 1")
    fld = P.field
    c = fld.convert(c)
    if fld.is_zero(c):
        return P
    mu = Fraction(k, n)
    delta = P.op.delta(mu, fld)
    powers = [fld.one]

    def cpow(e, s):
        while len(powers) <= e:
            powers.append(powers[-1] * c)
        return s * powers[e]

    if fld.exact:
        def add(d, key, v):
            d[key] = d.get(key, 0) + v
        M, A, B = _expand(P, k, n, cpow, add, fld, delta)
    else:
        # numeric: a sum counts as zero when it is tiny relative to its largest summand
        scale = {}

        def add(d, key, v):
            d[key] = d.get(key, 0) + v
            sk = (id(d), key)
            scale[sk] = max(scale.get(sk, 0), abs(v))
        M, A, B = _expand(P, k, n, cpow, add, fld, delta)
        eps = fld.eps
        A = {kk: v for kk, v in A.items() if abs(v) > eps * scale[(id(A), kk)]}
        B = {kk: v for kk, v in B.items() if abs(v) > eps * scale[(id(B), kk)]}
    return CoveredEquation(P.op, M, A, B, fld)


@dataclass
class ParametricEquation:
    """Equation whose coefficients are polynomials in a parameter ``C``."""

    op: OperatorSpec
    m: int
    A: dict
    B: dict
    field: object

    def evaluate(self, c) -> CoveredEquation:
        fld = self.field
        c = fld.convert(c)
        A = {k: upoly.evaluate(p, c) for k, p in self.A.items()}
        B = {k: upoly.evaluate(p, c) for k, p in self.B.items()}
        return CoveredEquation(self.op, self.m, A, B, fld)

    def a(self, iota, j):
        t = Fraction(iota) * self.m
        if t.denominator != 1:
            return []
        return self.A.get((int(t), j), [])

    def b(self, iota, j):
        t = Fraction(iota) * self.m
        if t.denominator != 1:
            return []
        return self.B.get((int(t), j), [])


def substitute_parametric(P: CoveredEquation, k: int, n: int) -> ParametricEquation:
    """The substitution with a symbolic coefficient ``C``."""
    if k < 1 or n < 1:
        raise ValueError("substitution needs k >= 1 and n >= 1")
    fld = P.field
    delta = P.op.delta(Fraction(k, n), fld)

    def cpow(e, s):
        return upoly.monomial(s, e)

    def add(d, key, v):
        d[key] = upoly.add(d.get(key, []), v)

    M, A, B = _expand(P, k, n, cpow, add, fld, delta)
    A = {kk: upoly.trim(v, fld) for kk, v in A.items()}
    B = {kk: upoly.trim(v, fld) for kk, v in B.items()}
    return ParametricEquation(
        P.op, M, {kk: v for kk, v in A.items() if v}, {kk: v for kk, v in B.items() if v}, fld
    )


def evaluate(P: CoveredEquation, s: PuiseuxPoly, cap=None) -> PuiseuxPoly:
    """``A(x, s) + B(x, s) * sigma(s)``, dropping exponents above ``cap`` if given."""
    fld = _merge_fields(P.field, s.field)
    if fld != P.field:
        P = P.with_field(fld)
    s = s.with_field(fld)
    ss = sigma_apply(s, P.op)
    o = P.op.order
    top = P.y_degree()
    powers = [PuiseuxPoly(1, {0: fld.one}, fld)]
    for _ in range(top):
        powers.append(powers[-1].mul(s, cap))
    total = PuiseuxPoly(P.m, {}, fld)
    groups = {}
    for (i, j), c in P.A.items():
        groups.setdefault(j, {})[i] = c
    for j, row in groups.items():
        xpart = PuiseuxPoly(P.m, row, fld)
        total = total + xpart.mul(powers[j], cap)
    bgroups = {}
    for (i, j), c in P.B.items():
        bgroups.setdefault(j - 1, {})[i + o * P.m] = c
    for j, row in bgroups.items():
        xpart = PuiseuxPoly(P.m, row, fld)
        total = total + xpart.mul(powers[j], cap).mul(ss, cap)
    return total


def promote(P: CoveredEquation, value) -> CoveredEquation:
    """Move ``P`` into a field that also holds ``value``.

    Exact fields are promoted to a quadratic field when possible and fall
    back to the numeric backend otherwise.
    """
    if not P.field.exact or P.field.contains(value):
        return P
    fld = common_field([value], P.field)
    if fld is None:
        fld = ComplexField()
    return P.with_field(fld)

