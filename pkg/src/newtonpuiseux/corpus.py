"""Equations with known Puiseux solutions, generated from seeds.

Two constructions are provided:

* from a branch ``s``: its minimal polynomial ``f`` gives the differential
  equation ``f_x + f_y * y1`` (the curve is an integral curve of ``df``);
* by planting: ``A = -B*(sigma(s) + e*(y - s)) + D*(y - s)`` makes ``s`` a
  solution of ``A + B*y1`` for any ``B``, ``D``, ``e`` and either operator.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from .equation import CoveredEquation
from .operators import OperatorSpec
from .scalars import ComplexField, ExactField, QuadraticNumber, RATIONAL_TYPES, root_field
from .series import PuiseuxPoly, characteristic_data, sigma_apply


@dataclass(frozen=True)
class CorpusSpec:
    """Parameters of a generated family; generation is a pure function of these."""

    seed: int = 0
    genus: int = 1
    max_ramification: int = 12
    coefficients: tuple = (-3, -2, -1, 1, 2, 3)
    operator: str = "diff"
    q: str | None = None
    max_terms: int = 4


# bivariate polynomials: dict (x_index, y_degree) -> coefficient, x exponent = x_index / n

def branch_minimal_polynomial(s: PuiseuxPoly):
    """``prod_{zeta^n = 1} (y - s(zeta x^(1/n)))`` as ``{(a, j): c}`` with integer ``a``.

    Computed through Newton's identities: the power sums of the conjugates
    are ``n`` times the part of ``s**m`` with exponents in ``Z``.
    """
    s = s.reduce()
    if s.order() <= 0:
        raise ValueError("the branch must pass through the origin")
    n = s.n
    fld = s.field
    power = PuiseuxPoly(n, {0: fld.one}, fld)
    p = [None]
    for _ in range(n):
        power = power * s
        p.append({i // n: c * n for i, c in power.coeffs.items() if i % n == 0})
    e = [{0: fld.one}]
    for m in range(1, n + 1):
        acc = {}
        for i in range(1, m + 1):
            sign = 1 if i % 2 == 1 else -1
            for a, c in e[m - i].items():
                for b, d in p[i].items():
                    acc[a + b] = acc.get(a + b, 0) + sign * c * d
        e.append({a: c / m for a, c in acc.items() if c != 0})
    f = {}
    for m in range(n + 1):
        sign = 1 if m % 2 == 0 else -1
        for a, c in e[m].items():
            if c != 0:
                f[(a, n - m)] = sign * c
    return f


def bivariate_eval(f, s: PuiseuxPoly) -> PuiseuxPoly:
    """``f(x, s(x))`` for ``f`` with integer x-exponents."""
    fld = s.field
    out = PuiseuxPoly(1, {}, fld)
    rows = {}
    for (a, j), c in f.items():
        rows.setdefault(j, {})[a] = c
    for j, row in rows.items():
        out = out + PuiseuxPoly(1, row, fld) * s.pow(j)
    return out


def partial_x(f):
    return {(a - 1, j): c * a for (a, j), c in f.items() if a}


def partial_y(f):
    return {(a, j - 1): c * j for (a, j), c in f.items() if j}


def gen_differential_from_branch(s: PuiseuxPoly) -> CoveredEquation:
    """``f_x + f_y * y1`` for the minimal polynomial ``f`` of ``s``."""
    f = branch_minimal_polynomial(s)
    return CoveredEquation.from_raw(OperatorSpec.differential(), 1, partial_x(f), partial_y(f), s.field)


def _ypoly_mul(p, q):
    out = {}
    for j1, a in p.items():
        for j2, b in q.items():
            out[j1 + j2] = out[j1 + j2] + a * b if j1 + j2 in out else a * b
    return out


def _ypoly_add(p, q, sign=1):
    out = dict(p)
    for j, b in q.items():
        out[j] = out[j] + sign * b if j in out else sign * b
    return out


def _as_ypoly(terms, fld):
    """``[(x_exponent, y_degree, c)]`` into ``{y_degree: PuiseuxPoly}``."""
    rows = {}
    for e, j, c in terms:
        rows.setdefault(j, []).append((Fraction(e), c))
    return {j: PuiseuxPoly.from_terms(r, fld) for j, r in rows.items()}


def gen_covered_with_solution(s: PuiseuxPoly, B_terms, D_terms, e, op: OperatorSpec, field=None):
    """Plant ``s`` as a solution of ``A + B*y1``.

    ``B_terms`` and ``D_terms`` are lists ``(x_exponent, y_degree, coefficient)``;
    ``A = -B*(sigma(s) + e*(y - s)) + D*(y - s)``.
    """
    fld = field or s.field
    s = s.with_field(fld)
    B = _as_ypoly(B_terms, fld)
    if not any(not v.is_zero() for v in B.values()):
        raise ValueError("B must be nonzero")
    D = _as_ypoly(D_terms, fld)
    y_minus_s = {1: PuiseuxPoly(1, {0: fld.one}, fld), 0: -s}
    inner = _ypoly_add({0: sigma_apply(s, op)}, {j: v * fld.convert(e) for j, v in y_minus_s.items()})
    A = _ypoly_add(_ypoly_mul(D, y_minus_s), _ypoly_mul(B, inner), -1)
    terms_A, terms_B = [], []
    for j, ser in A.items():
        for ex, c in ser.terms():
            terms_A.append((ex, j, c))
    for j, ser in B.items():
        for ex, c in ser.terms():
            terms_B.append((ex, j, c))
    for ex, _, _ in terms_A + terms_B:
        if ex < 0:
            raise ValueError("planting produced a negative x-exponent; multiply B by a power of x")
    return CoveredEquation.from_terms(op, terms_A, terms_B, fld)


# random branches

def random_factors(rng: random.Random, genus: int, max_ramification: int):
    """Characteristic factors ``(r_1..r_g)`` with each ``r_i >= 2`` and product bounded."""
    if genus == 0:
        return ()
    if 2 ** genus > max_ramification:
        raise ValueError(f"genus {genus} needs ramification at least {2 ** genus}")
    while True:
        fs = tuple(rng.randint(2, max(2, max_ramification // 2 ** (genus - 1))) for _ in range(genus))
        if math.prod(fs) <= max_ramification:
            return fs


def gen_random_branch(spec_or_rng, genus: int | None = None, factors=None,
                      max_ramification: int = 12, coefficients=(-3, -2, -1, 1, 2, 3),
                      max_terms: int = 4, field=None):
    """A random branch with prescribed genus (and optionally factors).

    Characteristic exponents are chosen small: the ``i``-th one is the first
    or second fraction ``p/(D r_i)`` beyond the previous exponent with
    ``gcd(p, r_i) = 1``. A few non-characteristic terms on the current
    lattice are sprinkled in between.
    """
    if isinstance(spec_or_rng, CorpusSpec):
        spec = spec_or_rng
        rng = random.Random(spec.seed)
        genus = spec.genus if genus is None else genus
        max_ramification = spec.max_ramification
        coefficients = spec.coefficients
        max_terms = spec.max_terms
    else:
        rng = spec_or_rng
    if factors is None:
        factors = random_factors(rng, genus or 0, max_ramification)
    factors = tuple(factors)
    if genus is not None and len(factors) != genus:
        raise ValueError("genus and factors disagree")
    if any(r < 2 for r in factors):
        raise ValueError("characteristic factors must be at least 2")
    fld = field or ExactField()
    pool = [c for c in coefficients if c != 0]
    terms = []
    D = 1
    last = Fraction(0)
    extra = max(0, max_terms - len(factors))

    def sprinkle(limit):
        nonlocal last
        # non-characteristic terms on the lattice (1/D)Z, strictly increasing
        k = math.floor(last * D) + 1
        if Fraction(k, D) < limit and rng.random() < 0.5:
            last = Fraction(k, D)
            terms.append((last, rng.choice(pool)))
            return 1
        return 0

    if not factors:
        count = rng.randint(1, max(1, max_terms))
        k = rng.randint(1, 2)
        for _ in range(count):
            terms.append((Fraction(k), rng.choice(pool)))
            k += rng.randint(1, 2)
        return PuiseuxPoly.from_terms(terms, fld)
    for r in factors:
        if extra and sprinkle(last + 1):
            extra -= 1
        p = math.floor(last * D * r) + 1
        while math.gcd(p, r) != 1:
            p += 1
        if rng.random() < 0.3:
            p += 1
            while math.gcd(p, r) != 1:
                p += 1
        last = Fraction(p, D * r)
        terms.append((last, rng.choice(pool)))
        D *= r
    if extra and rng.random() < 0.5:
        last = Fraction(math.floor(last * D) + 1, D)
        terms.append((last, rng.choice(pool)))
    return PuiseuxPoly.from_terms(terms, fld)


def parse_q(text: str):
    from .parser import parse_scalar

    return parse_scalar(text)


def q_field(q, n: int):
    """Exact field holding ``q**(k/n)`` for all ``k``, or the numeric backend."""
    return root_field(q, n)


def gen_q_planted(rng: random.Random, q, genus: int = 1, max_ramification: int = 6,
                  coefficients=(-2, -1, 1, 2), max_terms: int = 3):
    """A random planted q-difference equation with a random branch solution."""
    s0 = gen_random_branch(rng, genus=genus, max_ramification=max_ramification,
                           coefficients=coefficients, max_terms=max_terms)
    n = s0.n
    fld = q_field(q, n)
    s = s0.with_field(fld)
    op = OperatorSpec.q_difference(q)
    pool = list(coefficients)
    B_terms = []
    for _ in range(rng.randint(1, 3)):
        B_terms.append((Fraction(rng.randint(0, 2 * n), n), rng.randint(0, 3), rng.choice(pool)))
    D_terms = []
    for _ in range(rng.randint(0, 3)):
        D_terms.append((Fraction(rng.randint(0, 2 * n), n), rng.randint(0, 3), rng.choice(pool)))
    e = rng.choice([0, 0, 1, -1])
    P = gen_covered_with_solution(s, B_terms, D_terms, e, op, fld)
    return P, s


@dataclass
class Fixture:
    equation: CoveredEquation
    solution: PuiseuxPoly
    name: str = ""

    def to_json(self) -> dict:
        from .parser import format_coefficient, render_series

        op = self.equation.op
        cd = characteristic_data(self.solution, base=self.equation.m)
        out = {
            "name": self.name,
            "op": op.kind,
            "backend": self.equation.field.name,
            "equation": self.equation.to_text(),
            "solution": render_series(self.solution),
            "characteristic": cd.to_json(),
        }
        if not op.is_differential:
            out["q"] = format_coefficient(op.q, q_display_field(op.q))[1:-1]
        return out


def q_display_field(q):
    if isinstance(q, QuadraticNumber):
        return ExactField(q.d)
    return ExactField() if isinstance(q, RATIONAL_TYPES) else ComplexField()


def load_fixture(doc: dict, precision: int = 256):
    """Inverse of :meth:`Fixture.to_json`: returns ``(equation, solution)``."""
    from .equation import parse_equation
    from .parser import parse_scalar, parse_series
    from .scalars import field_from_name

    fld = field_from_name(doc.get("backend", "rational"), precision)
    if doc.get("op", "diff") == "diff":
        op = OperatorSpec.differential()
    else:
        op = OperatorSpec.q_difference(parse_scalar(doc["q"]))
    P = parse_equation(doc["equation"], op, fld)
    s = parse_series(doc["solution"], fld)
    return P, s


def generate(spec: CorpusSpec, count: int):
    """``count`` fixtures; fixture ``i`` draws from seed ``spec.seed * 1_000_003 + i``."""
    out = []
    for i in range(count):
        rng = random.Random(spec.seed * 1_000_003 + i)
        if spec.operator == "diff":
            genus = rng.randint(0, spec.genus)
            s = gen_random_branch(rng, genus=genus, max_ramification=spec.max_ramification,
                                  coefficients=spec.coefficients, max_terms=spec.max_terms)
            P = gen_differential_from_branch(s)
        else:
            q = parse_q(spec.q or "2")
            genus = rng.randint(0, spec.genus)
            P, s = gen_q_planted(rng, q, genus, spec.max_ramification, spec.coefficients, spec.max_terms)
        out.append(Fixture(P, s, f"{spec.operator}-seed{spec.seed}-{i}"))
    return out


def write_fixtures(fixtures, directory) -> list:
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    written = []
    for fx in fixtures:
        target = path / f"{fx.name}.json"
        target.write_text(json.dumps(fx.to_json(), indent=2, sort_keys=True) + "\n")
        written.append(str(target))
    return written


def spec_to_json(spec: CorpusSpec) -> dict:
    d = asdict(spec)
    d["coefficients"] = list(spec.coefficients)
    return d
