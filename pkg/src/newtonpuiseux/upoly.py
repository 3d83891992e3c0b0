"""Dense univariate polynomials in the parameter ``C``.

A polynomial is a list of coefficients, lowest degree first. Helpers take the
coefficient field explicitly so that numeric zero thresholds are respected.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb

import sympy
from gmpy2 import mpq

from .scalars import (
    ExactField,
    QuadraticNumber,
    RATIONAL_TYPES,
    squarefree_decomposition,
)


def trim(p, fld):
    p = list(p)
    while p and fld.is_zero(p[-1]):
        p.pop()
    return p


def is_zero_poly(p, fld) -> bool:
    return all(fld.is_zero(c) for c in p)


def degree(p, fld) -> int:
    """Degree, ``-1`` for the zero polynomial."""
    return len(trim(p, fld)) - 1


def add(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = q[i] if i < len(q) else 0
        out.append(a + b)
    return out


def sub(p, q):
    return add(p, [-c for c in q])


def scale(p, c):
    return [c * a for a in p]


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def shift(p, k: int):
    """Multiply by ``C**k``."""
    return [0] * k + list(p)


def evaluate(p, c):
    acc = 0
    for a in reversed(p):
        acc = acc * c + a
    return acc


def derivative(p, order: int = 1):
    """``order``-th derivative."""
    out = list(p)
    for _ in range(order):
        out = [i * out[i] for i in range(1, len(out))]
    return out


def taylor_coefficient(p, j: int):
    """``p^(j) / j!`` as a polynomial, computed with binomials (exact)."""
    return [comb(i, j) * p[i] for i in range(j, len(p))]


def monomial(c, k: int):
    return [0] * k + [c]


def polys_equal(p, q, fld, rel_tol=None) -> bool:
    """Coefficientwise equality; numeric fields compare to ``rel_tol`` relative."""
    diff = sub(p, q)
    if fld.exact:
        return all(c == 0 for c in diff)
    tol = fld.eps if rel_tol is None else rel_tol
    scale_ = max([1] + [abs(fld.convert(c)) for c in list(p) + list(q)])
    return all(abs(fld.convert(c)) <= tol * scale_ for c in diff)


def root_multiplicity(p, c, fld) -> int:
    """Multiplicity of ``c`` as a root of ``p`` (``p`` must be nonzero)."""
    p = trim(p, fld)
    if not p:
        raise ValueError("zero polynomial has no root multiplicity")
    m = 0
    cur = p
    while cur and _is_zero_value(evaluate(cur, c), cur, c, fld):
        m += 1
        cur = derivative(cur)
    return m


def _is_zero_value(v, p, c, fld) -> bool:
    if fld.exact:
        return v == 0
    scale_ = max([1] + [abs(fld.convert(a)) for a in p])
    r = max(1, abs(fld.convert(c)))
    return abs(fld.convert(v)) <= fld.eps * scale_ * r ** max(len(p) - 1, 0)


def divide_linear(p, c):
    """Synthetic division of ``p`` by ``C - c``; returns the quotient (exact remainder dropped)."""
    n = len(p) - 1
    if n < 1:
        return []
    q = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = acc * c + p[i]
        q[i - 1] = acc
    return q


def conjugate_coeffs(p):
    return [c.conjugate() if isinstance(c, QuadraticNumber) else c for c in p]


@dataclass(frozen=True)
class Root:
    value: object
    multiplicity: int


@dataclass
class RootResult:
    """Roots found with multiplicity, plus factors left unsolved.

    ``unsolved`` holds polynomials (coefficient lists) with no root in the
    working exact field; it is always empty in numeric mode.
    """

    roots: list = dc_field(default_factory=list)
    unsolved: list = dc_field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.unsolved

    def values(self):
        return [r.value for r in self.roots]

    def count(self) -> int:
        return sum(r.multiplicity for r in self.roots)


def find_roots(p, fld, allow_promotion: bool = True) -> RootResult:
    """Roots of ``p`` over ``fld`` with multiplicities.

    Exact fields: candidate roots come from the factorisation over Q of ``p``
    (or of its norm ``p * conj(p)`` when ``p`` has quadratic coefficients);
    linear factors give rational roots, quadratic factors give roots in
    Q(sqrt(disc)). Roots outside the working field are only admitted when
    ``allow_promotion`` is set and the field is Q. Anything left is reported
    in ``unsolved``.

    Numeric fields: simultaneous iteration (``mpmath.polyroots``) with
    clustering of repeated roots and a residual check.
    """
    p = trim(p, fld)
    if not p:
        raise ValueError("find_roots: zero polynomial")
    if fld.exact:
        return _exact_roots(p, fld, allow_promotion)
    return _numeric_roots(p, fld)


def _exact_roots(p, fld, allow_promotion):
    result = RootResult()
    zero_mult = 0
    while p and p[0] == 0:
        p = p[1:]
        zero_mult += 1
    if zero_mult:
        result.roots.append(Root(mpq(0), zero_mult))
    if len(p) == 1:
        return result

    rational = all(isinstance(c, RATIONAL_TYPES) for c in p)
    norm = p if rational else mul(p, conjugate_coeffs(p))
    C = sympy.Symbol("C")
    expr = sum(sympy.Rational(int(mpq(c).numerator), int(mpq(c).denominator)) * C**i
               for i, c in enumerate(norm))
    _, factors = sympy.factor_list(sympy.Poly(expr, C, domain="QQ"))

    candidates = []
    for fac, _mult in factors:
        coeffs = [mpq(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
                  for c in reversed(fac.all_coeffs())]
        if len(coeffs) == 2:
            candidates.append(-coeffs[0] / coeffs[1])
        elif len(coeffs) == 3:
            c0, c1, c2 = coeffs
            disc = c1 * c1 - 4 * c2 * c0
            num, den = int(disc.numerator), int(disc.denominator)
            s, w = squarefree_decomposition(num * den)
            if w == 1:
                continue  # reducible, already seen as linear factors
            if fld.d is not None and w != fld.d:
                continue
            if fld.d is None and not allow_promotion:
                continue
            root_disc = QuadraticNumber(0, mpq(s, den), w)
            candidates.append((-c1 + root_disc) / (2 * c2))
            candidates.append((-c1 - root_disc) / (2 * c2))

    rest = p
    for c in candidates:
        if isinstance(c, QuadraticNumber) and any(
            isinstance(v, QuadraticNumber) and v.d != c.d for v in rest
        ):
            continue
        m = 0
        while len(rest) > 1 and evaluate(rest, c) == 0:
            rest = divide_linear(rest, c)
            m += 1
        if m:
            result.roots.append(Root(c, m))
    if len(rest) > 1:
        result.unsolved.append(rest)
    sort_fld = fld if fld.d is not None else ExactField()
    result.roots.sort(key=lambda r: _exact_sort_key(r.value, sort_fld))
    return result


def _exact_sort_key(x, fld):
    if isinstance(x, QuadraticNumber):
        c = complex(x)
        return (c.real, c.imag, x.a, x.b)
    return (float(x), 0.0, mpq(x), mpq(0))


def _numeric_roots(p, fld):
    ctx = fld.ctx
    p = [fld.convert(c) for c in p]
    result = RootResult()
    zero_mult = 0
    while len(p) > 1 and fld.is_zero(p[0]):
        p = p[1:]
        zero_mult += 1
    if zero_mult:
        result.roots.append(Root(fld.zero, zero_mult))
    deg = len(p) - 1
    if deg == 0:
        return result
    if deg == 1:
        result.roots.append(Root(-p[0] / p[1], 1))
        return result
    with ctx.workprec(2 * fld.prec):
        raw = ctx.polyroots(list(reversed(p)), maxsteps=400, extraprec=2 * fld.prec,
                            error=False, cleanup=True)
    raw = [ctx.mpc(z) for z in raw]
    # repeated roots of multiplicity m are only resolved to ~eps**(1/m)
    bits = ctx.prec // max(deg, 2)
    cluster_tol = ctx.ldexp(1, -bits)
    clusters = []
    for z in raw:
        for cl in clusters:
            center = cl[0]
            if abs(z - center) <= cluster_tol * max(1, abs(center)):
                cl.append(z)
                break
        else:
            clusters.append([z])
    for cl in clusters:
        center = sum(cl) / len(cl)
        result.roots.append(Root(center, len(cl)))
    result.roots.sort(key=lambda r: fld.sort_key(r.value))
    return result


def to_json(p, fld):
    return [fld.to_json(c) for c in p]


def format_poly(p, fld, var: str = "C") -> str:
    p = trim(p, fld)
    if not p:
        return "0"
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if fld.is_zero(c):
            continue
        cs = fld.format(c)
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono:
            terms.append(f"({cs})*{mono}")
        else:
            terms.append(f"({cs})")
    return " + ".join(terms)
