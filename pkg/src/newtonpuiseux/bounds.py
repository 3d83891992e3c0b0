"""Lower bounds for polygon heights and multiplicities along a Puiseux solution.

Everything here reads quantities off a :class:`~newtonpuiseux.analysis.Trace`
and compares them with closed-form right-hand sides built from the
characteristic factors ``r_1..r_g`` of the solution.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath
import sympy
from gmpy2 import mpq

from .analysis import Trace, trace as run_trace
from .equation import CoveredEquation, evaluate, nu0
from .operators import OperatorSpec
from .polygon import element, height, relative_height
from .scalars import ComplexField, QuadraticNumber
from .series import PuiseuxPoly, characteristic_data


def _prod(xs) -> int:
    return math.prod(xs)


def theorem_main_rhs(factors, dicritical_indices=()) -> int:
    """``prod r_j - sum_k (prod_{j <= i_k} r_j - prod_{j < i_k} r_j)``."""
    r = tuple(factors)
    idx = tuple(dicritical_indices)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("dicritical indices must be strictly increasing")
    if idx and (idx[0] < 1 or idx[-1] > len(r)):
        raise ValueError("dicritical indices must lie in 1..g")
    return _prod(r) - sum(_prod(r[:i]) - _prod(r[: i - 1]) for i in idx)


def corollary_a_rhs(factors) -> int:
    """``prod_{j <= g-1} r_j - prod_{j <= g-2} r_j`` (a strict lower bound)."""
    r = tuple(factors)
    g = len(r)
    return _prod(r[: max(g - 1, 0)]) - _prod(r[: max(g - 2, 0)])


def theorem_reasonable_rhs(factors) -> int:
    """``prod_{j <= g-1} r_j``."""
    r = tuple(factors)
    return _prod(r[: max(len(r) - 1, 0)])


# improper polynomials

@dataclass
class ImproperReport:
    is_improper: bool
    lower: float
    upper: object
    roots: list
    within: bool | None

    def to_json(self) -> dict:
        return {
            "is_improper": self.is_improper,
            "lower": self.lower,
            "upper": str(self.upper),
            "roots": [[mpmath.nstr(z.real, 20), mpmath.nstr(z.imag, 20)] for z in self.roots],
            "within": self.within,
        }


def improper_check(u, tol: float = 1e-10, prec: int = 96) -> ImproperReport:
    """Test ``z^m + u_{m-1} z^{m-1} + ... + u_0`` for impropriety and its root annulus.

    ``u`` lists ``u_0..u_{m-1}``. Improper means all ``u_i > 0`` and
    ``1 <= u_{m-1} <= ... <= u_0``; then every root has modulus in
    ``[1, max(u_0/u_1, ..., u_{m-2}/u_{m-1}, u_{m-1})]`` (checked to ``tol``).
    """
    u = [Fraction(x) if not isinstance(x, float) else x for x in u]
    m = len(u)
    if m == 0:
        raise ValueError("improper_check needs degree at least 1")
    improper = all(x > 0 for x in u) and u[-1] >= 1 and all(u[i] >= u[i + 1] for i in range(m - 1))
    ratios = [u[i] / u[i + 1] for i in range(m - 1) if u[i + 1] != 0] + [u[-1]]
    upper = max(ratios)
    ctx = mpmath.MPContext()
    ctx.prec = prec
    coeffs = [ctx.mpf(1)] + [ctx.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else ctx.mpf(x)
                             for x in reversed(u)]
    roots = ctx.polyroots(coeffs, maxsteps=200, extraprec=prec) if m > 1 else [-coeffs[1]]
    roots = [ctx.mpc(z) for z in roots]
    within = None
    if improper:
        hi = ctx.mpf(upper.numerator) / upper.denominator if isinstance(upper, Fraction) else ctx.mpf(upper)
        within = all(1 - tol <= abs(z) <= hi * (1 + tol) for z in roots)
    return ImproperReport(improper, 1.0, upper, roots, within)


# reasonableness

@dataclass
class ReasonablenessVerdict:
    """``verdict`` is ``reasonable``, ``unreasonable`` or ``unknown``."""

    verdict: str
    basis: str
    criteria: list = dc_field(default_factory=list)
    witness: list | None = None  # coefficients of the witness, highest degree first
    rho: tuple | None = None
    residual: object = None

    @property
    def witness_text(self) -> str | None:
        if self.witness is None:
            return None
        return format_s_poly(self.witness)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "basis": self.basis,
            "criteria": list(self.criteria),
            "witness": self.witness_text,
            "rho": list(self.rho) if self.rho is not None else None,
            "residual": None if self.residual is None else mpmath.nstr(self.residual, 10),
        }


def format_s_poly(coeffs) -> str:
    """Integer polynomial in ``s`` (highest degree first) as text."""
    deg = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        e = deg - i
        if c == 0:
            continue
        mono = "" if e == 0 else ("s" if e == 1 else f"s^{e}")
        if mono and c == 1:
            body = mono
        elif mono:
            body = f"{c}*{mono}"
        else:
            body = str(c)
        parts.append(body)
    return " + ".join(parts) if parts else "0"


def unreasonable_polynomial(rho) -> list:
    """Coefficients (highest first) of ``s^L + rho_L s^{L-1} + rho_{L-1} rho_L s^{L-2} + ...``."""
    rho = tuple(rho)
    out = [1]
    acc = 1
    for r in reversed(rho):
        acc *= r
        out.append(acc)
    return out


def rho_sequences(factors, L: int):
    """All sequences of length ``1..L`` made of 1's and an ordered subsequence of ``factors``."""
    factors = tuple(factors)
    seen = set()
    for length in range(1, L + 1):
        for t in range(0, min(len(factors), length) + 1):
            for sub in itertools.combinations(range(len(factors)), t):
                for pos in itertools.combinations(range(length), t):
                    seq = [1] * length
                    for p, f in zip(pos, sub):
                        seq[p] = factors[f]
                    key = tuple(seq)
                    if key not in seen:
                        seen.add(key)
                        yield key


def reasonableness(q, n: int, factors, L: int = 16, q_root=None, transcendental: bool = False,
                   rel_tol: float = 1e-20, prec: int = 256) -> ReasonablenessVerdict:
    """Decide whether ``q**(1/n)`` avoids every unreasonable polynomial.

    ``q_root`` fixes the determination of ``q**(1/n)`` (principal otherwise).
    The sufficient criteria are tried first; otherwise polynomials with
    ``rho``-sequences of length at most ``L`` are searched, and ``unknown``
    means none vanished within the searched range.
    """
    fld = ComplexField(prec)
    ctx = fld.ctx
    qc = fld.convert(q)
    s = fld.convert(q_root) if q_root is not None else ctx.exp(ctx.log(qc) / n)
    maxr = max(factors, default=1)
    criteria = []
    if abs(qc) < 1:
        criteria.append("|q|<1")
    if abs(s) > maxr:
        criteria.append("|q|^(1/n)>max(r)")
    if abs(qc.imag) == 0 and qc.real > 0 and abs(s.imag) <= rel_tol * abs(s) and s.real > 0:
        criteria.append("positive-real-root")
    if transcendental:
        criteria.append("transcendental")
    if criteria:
        return ReasonablenessVerdict("reasonable", criteria[0], criteria)
    for rho in rho_sequences(factors, L):
        coeffs = unreasonable_polynomial(rho)
        value = ctx.mpc(0)
        scale = ctx.mpf(0)
        for c in coeffs:
            value = value * s + c
        for i, c in enumerate(coeffs):
            scale = max(scale, abs(c) * abs(s) ** (len(coeffs) - 1 - i))
        if abs(value) <= rel_tol * scale:
            return ReasonablenessVerdict("unreasonable", "search", [], coeffs, rho, abs(value))
    return ReasonablenessVerdict("unknown", f"search up to length {L}", [])


# bound report

@dataclass
class Check:
    name: str
    lhs: object
    relation: str
    rhs: object
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": _j(self.lhs), "relation": self.relation,
                "rhs": _j(self.rhs), "passed": self.passed}


def _j(v):
    if isinstance(v, Fraction):
        return str(v)
    return v


def _compare(name, lhs, relation, rhs) -> Check:
    ok = {">=": lhs >= rhs, ">": lhs > rhs, "<=": lhs <= rhs, "<": lhs < rhs, "==": lhs == rhs}[relation]
    return Check(name, lhs, relation, rhs, bool(ok))


@dataclass
class BoundReport:
    H: int
    H_s: int
    nu0: object
    order: Fraction
    chardata: object
    dicritical_indices: tuple
    terminal_indices: tuple
    dicritical_steps: tuple
    theorem_a_rhs: int
    theorem_a_terminal_rhs: int
    corollary_a_rhs: int
    theorem_b_rhs: int
    reasonable: ReasonablenessVerdict
    checks: list
    strictness: dict | None = None

    @property
    def genus(self) -> int:
        return self.chardata.genus

    @property
    def factors(self) -> tuple:
        return self.chardata.factors

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "H": self.H,
            "H_s": self.H_s,
            "nu0": _j(self.nu0),
            "order": str(self.order),
            "characteristic": self.chardata.to_json(),
            "dicritical_characteristic_indices": list(self.dicritical_indices),
            "terminally_dicritical_indices": list(self.terminal_indices),
            "dicritical_steps": list(self.dicritical_steps),
            "theorem_a_rhs": self.theorem_a_rhs,
            "theorem_a_terminal_rhs": self.theorem_a_terminal_rhs,
            "corollary_a_rhs": self.corollary_a_rhs,
            "theorem_b_rhs": self.theorem_b_rhs,
            "reasonable": self.reasonable.to_json(),
            "checks": [c.to_json() for c in self.checks],
            "strictness": self.strictness,
            "passed": self.passed,
        }


def _equation_reasonableness(P: CoveredEquation, n: int, factors, L: int) -> ReasonablenessVerdict:
    if P.op.is_differential:
        return ReasonablenessVerdict("reasonable", "differential", ["differential"])
    root = P.op.delta(Fraction(1, n), ComplexField())
    return reasonableness(P.op.q, n, factors, L, q_root=root)


def strictness_conditions(tr: Trace, m: int) -> dict:
    """Conditions under which ``Top(E_{P,m/n}) = r_1...r_{g-1}`` is allowed."""
    cd = tr.chardata
    recs = {r.k: r for r in tr.records}
    if cd.genus == 0:
        return {"applicable": False}
    eg = cd.exponents[-1]
    dic_above = [r.k for r in tr.records if r.dicritical and r.k >= m]
    unique = dic_above == [eg]
    E = recs[eg]
    unit = E.bot == 1 and E.top == 1
    chain = all(
        recs[j].bot * recs[j].rho == recs[j].top and recs[j].bot == recs[j + 1].top
        for j in range(m, eg)
    )
    return {"applicable": True, "unique_dicritical": unique, "unit_element": unit,
            "rigid_chain": chain, "equality_allowed": unique and unit and chain}


def bound_report(P: CoveredEquation, s: PuiseuxPoly, tr: Trace | None = None,
                 strictness: bool = False, L: int = 16) -> BoundReport:
    """Evaluate every height and multiplicity bound for ``P`` along the solution ``s``."""
    s = s.reduce()
    if tr is None:
        tr = run_trace(P, s)
    cd = tr.chardata
    n = tr.n
    K = len(tr.records)
    if cd.genus and cd.exponents[-1] > K:
        raise ValueError("trace too short: it stops before the last characteristic exponent")
    cloud = P.cloud_keys()
    H = height(cloud)
    Hs = relative_height(cloud, s)
    v0 = nu0(P)
    order = Fraction(s.order())
    dic_steps = tuple(r.k for r in tr.records if r.dicritical)
    dic_idx = tuple(cd.index_of(k) for k in dic_steps if cd.index_of(k) is not None)
    terminal = tuple(i for i in dic_idx if i == cd.genus or (i + 1) not in dic_idx)
    r = cd.factors
    rhs_a = theorem_main_rhs(r, dic_idx)
    rhs_at = theorem_main_rhs(r, terminal)
    rhs_c = corollary_a_rhs(r)
    rhs_b = theorem_reasonable_rhs(r)
    verdict = _equation_reasonableness(P, n, r, L)
    checks = [
        _compare("H(P) >= H(P,s)", H, ">=", Hs),
        _compare("theorem A", Hs, ">=", rhs_a),
        _compare("theorem A, terminal indices", Hs, ">=", rhs_at),
        _compare("corollary A", Hs, ">", rhs_c),
        _compare("genus bound", Fraction(2) ** (cd.genus - 1), "<=", Hs),
    ]
    if verdict.verdict == "reasonable":
        checks.append(_compare("theorem B", Hs, ">=", rhs_b))
    if order >= 1:
        checks += [
            _compare("nu0+1 >= H(P,s)", v0 + 1, ">=", Hs),
            _compare("theorem A, nu0", v0 + 1, ">=", rhs_a),
            _compare("corollary A, nu0", v0, ">=", rhs_c),
            _compare("genus bound, nu0", Fraction(2) ** (cd.genus - 1), "<=", v0 + 1),
        ]
        if verdict.verdict == "reasonable":
            checks.append(_compare("theorem B, nu0", v0 + 1, ">=", rhs_b))
    # consecutive dicritical characteristic exponents
    recs = {rec.k: rec for rec in tr.records}
    for a, b in zip(dic_idx, dic_idx[1:]):
        if b == a + 1:
            ea, eb = cd.exponents[a - 1], cd.exponents[b - 1]
            checks.append(_compare(f"consecutive dicritical {a},{b}", recs[eb].top, "<=", recs[ea].bot - 1))
    strict = None
    if strictness and verdict.verdict == "reasonable" and cd.genus:
        m0 = int(order * n)
        for m in range(1, m0 + 1):
            top = element(cloud, Fraction(m, n)).top
            checks.append(_compare(f"top at {m}/{n}", top, ">=", rhs_b))
        strict = strictness_conditions(tr, m0)
        ok = Hs > rhs_b or strict["equality_allowed"]
        checks.append(Check("strictness", Hs, ">" if not strict["equality_allowed"] else ">=", rhs_b, ok))
    return BoundReport(H, Hs, v0, order, cd, dic_idx, terminal, dic_steps, rhs_a, rhs_at,
                       rhs_c, rhs_b, verdict, checks, strict)


def genus_bound_check(report: BoundReport) -> bool:
    """``g <= 1 + log2 H(P,s)``, and with ``nu0 + 1`` when ``ord(s) >= 1``."""
    g = report.genus
    if g == 0:
        return True
    ok = 2 ** (g - 1) <= report.H_s
    if report.order >= 1:
        ok = ok and 2 ** (g - 1) <= report.nu0 + 1
    return ok


# foliations

@dataclass
class FoliationReport:
    nu0: int
    factors: tuple
    bound: int
    passed: bool
    matrix: tuple
    condition: str
    attempts: int
    invariant: bool
    coprime: bool

    def to_json(self) -> dict:
        return {
            "nu0": self.nu0,
            "factors": list(self.factors),
            "bound": self.bound,
            "passed": self.passed,
            "matrix": [list(r) for r in self.matrix],
            "condition": self.condition,
            "attempts": self.attempts,
            "invariant": self.invariant,
            "coprime": self.coprime,
        }


class GenericityNotReached(RuntimeError):
    pass


_X, _Y = sympy.symbols("x y")


def _sym(c):
    if isinstance(c, QuadraticNumber):
        return _sym(c.a) + _sym(c.b) * sympy.sqrt(c.d)
    if isinstance(c, (Fraction,)) or type(c).__name__ == "mpq":
        return sympy.Rational(int(c.numerator), int(c.denominator))
    if isinstance(c, int):
        return sympy.Integer(c)
    raise TypeError(f"foliation coefficients must be exact, got {c!r}")


def _to_sympy(f) -> sympy.Expr:
    return sympy.Add(*[_sym(c) * _X ** a * _Y ** b for (a, b), c in f.items()])


def intrinsic_factors(s: PuiseuxPoly) -> tuple:
    """Characteristic factors of the branch in coordinates transverse to it.

    When ``ord(s) < 1`` the branch is tangent to ``x = 0`` and its
    characteristic ``(n; b_1, b_2, ...)`` is inverted to
    ``(b_1; n, b_2 + n - b_1, ...)``.
    """
    s = s.reduce()
    cd = characteristic_data(s)
    if s.order() >= 1 or cd.genus == 0:
        return cd.factors
    n, b = cd.n, cd.exponents
    inv = [n] + [e + n - b[0] for e in b[1:]]
    t = PuiseuxPoly(b[0], {e: 1 for e in inv})
    return characteristic_data(t).factors


def foliation_bound_check(A, B, s: PuiseuxPoly, seed: int = 0, retries: int = 32) -> FoliationReport:
    """Check ``nu0 >= r_1...r_{g-1}`` for the foliation ``A dx + B dy`` with invariant branch ``y = s(x)``.

    ``A`` and ``B`` are ``{(a, b): c}`` with exact coefficients. The identity
    and then up to ``retries`` random integer matrices are tried until the
    lowest homogeneous parts satisfy one of the two genericity conditions
    and the branch is not tangent to the new ``X = 0``.
    """
    a_expr, b_expr = _to_sympy(A), _to_sympy(B)
    pa, pb = sympy.Poly(a_expr, _X, _Y), sympy.Poly(b_expr, _X, _Y)
    coprime = sympy.gcd(pa, pb).total_degree() == 0
    if not coprime:
        raise ValueError("A and B have a common factor")
    P = CoveredEquation.from_raw(OperatorSpec.differential(), 1, dict(A), dict(B),
                                 s.field if s.field.exact else None)
    invariant = evaluate(P, s).is_zero()
    orders = [sum(m) for m in pa.monoms()] + [sum(m) for m in pb.monoms()]
    v = min(orders)
    if v == 0:
        raise ValueError("the foliation is regular at the origin; the bound concerns singular points")
    a_low = sum((c * _X ** i * _Y ** j for (i, j), c in pa.terms() if i + j == v), sympy.Integer(0))
    b_low = sum((c * _X ** i * _Y ** j for (i, j), c in pb.terms() if i + j == v), sympy.Integer(0))
    o = s.order()
    if o >= 1:
        c1 = s.coefficient(Fraction(1)) if hasattr(s, "coefficient") else 0
        direction = (sympy.Integer(1), _sym(c1) if c1 else sympy.Integer(0))
    else:
        direction = (sympy.Integer(0), sympy.Integer(1))
    factors = intrinsic_factors(s)
    bound = theorem_reasonable_rhs(factors)
    rng = random.Random(seed)
    matrices = [((1, 0), (0, 1))]
    while len(matrices) < retries + 1:
        t = tuple(tuple(rng.randint(-9, 9) for _ in range(2)) for _ in range(2))
        if t[0][0] * t[1][1] - t[0][1] * t[1][0] != 0:
            matrices.append(t)
    X, Y = sympy.symbols("X Y")
    for attempt, t in enumerate(matrices):
        (t11, t12), (t21, t22) = t
        sub = {_X: t11 * X + t12 * Y, _Y: t21 * X + t22 * Y}
        ca = a_low.xreplace(sub)
        cb = b_low.xreplace(sub)
        new_a = sympy.expand(ca * t11 + cb * t21)
        new_b = sympy.expand(ca * t12 + cb * t22)
        # the branch direction in the new coordinates must leave X = 0
        if sympy.simplify(t22 * direction[0] - t12 * direction[1]) == 0:
            continue
        if sympy.expand(X * new_a + Y * new_b) == 0:
            cond = "dicritical"
        elif sympy.expand(new_b.subs(X, 0)) != 0:
            cond = "x=0 not invariant"
        else:
            continue
        return FoliationReport(v, factors, bound, v >= bound, t, cond, attempt + 1, invariant, coprime)
    raise GenericityNotReached(f"no generic coordinates after {retries} random changes")


def radial_foliation(m: int, n: int):
    """``n x dy - m y dx`` as ``(A, B)``."""
    return {(0, 1): mpq(-m)}, {(1, 0): mpq(n)}
