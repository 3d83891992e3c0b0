"""Newton-Puiseux expansion of solutions and verification of claimed solutions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import upoly
from .analysis import (
    NotASolution,
    dicritical_margin,
    element_of,
    initial_form,
    initial_polynomial,
    step,
    trace,
)
from .equation import CoveredEquation, evaluate, promote
from .polygon import build_polygon, grid_denominator
from .scalars import ComplexField, QuadraticNumber, RATIONAL_TYPES
from .series import PuiseuxPoly

CERTIFIED = "certified-extends"
JET_ONLY = "jet-only"
DICRITICAL = "dicritical-free-parameter"


class RamificationExceeded(ValueError):
    pass


class UnsolvedFactor(ValueError):
    """Exact root finding left an irreducible factor and numeric fallback is off."""


@dataclass
class BranchJet:
    """A solution jet found by :func:`expand`.

    ``parameter`` is set for dicritical jets: the position ``mu`` of the free
    coefficient and the special values where the generic continuation may fail.
    """

    series: PuiseuxPoly
    certified_order: Fraction
    status: str
    trace: list
    exact_solution: bool = False
    parameter: dict | None = None

    def to_json(self) -> dict:
        f = self.series.field
        out = {
            "series": str(self.series),
            "terms": [[str(e), f.to_json(c)] for e, c in self.series.terms()],
            "ramification": self.series.reduce().n,
            "certified_order": str(self.certified_order),
            "status": self.status,
            "exact_solution": self.exact_solution,
            "trace": [r.to_json() for r in self.trace],
        }
        if self.parameter is not None:
            pf = self.parameter["field"]
            out["parameter"] = {
                "mu": str(self.parameter["mu"]),
                "excluded": [pf.to_json(c) for c in self.parameter["excluded"]],
            }
        return out


def _log_q(op, fld):
    """A logarithm ``L`` of ``q`` with ``delta(mu) = exp(mu*L)`` for the fixed determination."""
    ctx = ComplexField(fld.prec if not fld.exact else 256)
    if op.q_root is not None:
        return ctx, op.root_index * ctx.ctx.log(ctx.convert(op.q_root))
    return ctx, ctx.ctx.log(ctx.convert(op.q))


def resonant_exponent(op, A, B, fld, max_ram: int):
    """Positive rational ``mu`` with ``A + delta(mu) * B = 0``, or None.

    Derivative: ``mu = -A/B`` when it is a positive rational. Dilation: the
    equation ``exp(mu*L) = w`` with ``w = -A/B`` has at most one real solution
    ``mu`` (``|q| != 1``); it is accepted when it is a rational of denominator
    at most ``max_ram`` and ``delta(mu) = w`` checks out in ``fld``.
    """
    if fld.is_zero(B):
        return None
    w = -A / B
    if op.is_differential:
        if isinstance(w, RATIONAL_TYPES):
            mu = Fraction(int(w.numerator), int(w.denominator))
            return mu if mu > 0 else None
        if isinstance(w, QuadraticNumber):
            return None
        z = fld.convert(w)
        if abs(z.imag) > fld.eps * max(1, abs(z)):
            return None
        mu = Fraction(float(z.real)).limit_denominator(max_ram)
        if mu > 0 and abs(fld.convert(mu.numerator) / mu.denominator - z) <= fld.eps * max(1, abs(z)):
            return mu
        return None
    cf, L = _log_q(op, fld)
    ctx = cf.ctx
    lw = ctx.log(cf.convert(w))
    # mu*L = lw + 2*pi*i*m with mu real fixes m
    a = L.real
    m = -ctx.im(lw * ctx.conj(L)) / (2 * ctx.pi * a)
    mi = int(ctx.nint(m))
    if abs(m - mi) > 1e-20:
        return None
    mu_val = ctx.re((lw + 2j * ctx.pi * mi) * ctx.conj(L)) / abs(L) ** 2
    if mu_val <= 0:
        return None
    mu = Fraction(float(mu_val)).limit_denominator(max_ram)
    if mu <= 0 or abs(mu_val - ctx.mpf(mu.numerator) / mu.denominator) > 1e-20:
        return None
    d = op.delta(mu, fld)
    if fld.exact:
        return mu if d * B + A == 0 else None
    scale = max(abs(fld.convert(A)), abs(fld.convert(d * B)))
    return mu if abs(fld.convert(A + d * B)) <= fld.eps * scale else None


def candidate_exponents(P: CoveredEquation, max_ram: int = 24):
    """Side co-slopes of the polygon plus resonant vertex exponents, sorted."""
    poly = build_polygon(P.cloud_keys())
    out = set(poly.co_slopes)
    verts = poly.vertices
    for idx, (iota, j) in enumerate(verts):
        if j < 1:
            continue
        mu = resonant_exponent(P.op, P.a(iota, j), P.b(iota, j), P.field, max_ram)
        if mu is None:
            continue
        lo = verts[idx - 1] if idx > 0 else None
        hi = verts[idx + 1] if idx + 1 < len(verts) else None
        # the vertex must be (part of) the element at mu
        if lo is not None and mu < Fraction(iota - lo[0]) / (lo[1] - j):
            continue
        if hi is not None and mu > Fraction(hi[0] - iota) / (j - hi[1]):
            continue
        out.add(mu)
    return sorted(out)


def _nonzero_roots(phi, P, allow_numeric):
    fld = P.field
    res = upoly.find_roots(phi, fld)
    if res.unsolved:
        if not allow_numeric:
            raise UnsolvedFactor(
                "initial polynomial has factors without roots in "
                f"{fld.name}: {[upoly.format_poly(u, fld) for u in res.unsolved]}"
            )
        return None
    return [r.value for r in res.roots if not _is_zero(r.value, fld)]


def _is_zero(v, fld):
    if isinstance(v, QuadraticNumber):
        return False
    try:
        return fld.is_zero(v)
    except TypeError:
        return v == 0


@dataclass
class _Options:
    K: Fraction
    max_ram: int
    samples: int
    values: dict
    allow_numeric: bool
    max_jets: int


def _sample_values(n):
    """``1, -1, 2, -2, ...`` truncated to ``n`` values."""
    out = []
    for v in range(1, n + 1):
        out += [v, -v]
    return out[:n]


def expand(
    P: CoveredEquation,
    max_order,
    max_ramification: int = 24,
    dicritical: str = "param",
    values: dict | None = None,
    allow_numeric: bool = True,
    max_jets: int = 1000,
):
    """Solution jets of ``P`` with exponents up to ``max_order``.

    Depth first over candidate exponents and the nonzero roots of each initial
    polynomial, in sorted order. At a dicritical element a jet with a free
    parameter is reported; the walk continues along the special values (roots
    of the height one coefficient ``B^k_{iota_1,1}(C)``), along ``values[mu]``
    and, with ``dicritical="sample:N"``, along ``N`` small integers.

    A jet is reported when the element of co-slope ``max_order`` of the
    substituted equation has bottom at least 1. It is ``certified-extends``
    when that bottom is exactly 1 and no later exponent of the grid can be
    resonant at the height one point; otherwise ``jet-only``.
    """
    samples = 0
    if dicritical.startswith("sample:"):
        samples = int(dicritical.split(":", 1)[1])
    elif dicritical != "param":
        raise ValueError(f"unknown dicritical policy {dicritical!r}")
    opts = _Options(Fraction(max_order), max_ramification, samples,
                    {Fraction(k): v for k, v in (values or {}).items()}, allow_numeric, max_jets)
    jets: list[BranchJet] = []
    _walk(P, [], Fraction(0), [], 1, opts, jets)
    return jets


def _walk(P, terms, last_mu, records, n, opts, jets):
    if len(jets) >= opts.max_jets:
        return
    K = opts.K
    E_K = element_of(P, K)
    if E_K.bot >= 1:
        jets.append(_make_jet(P, terms, records, n, opts))
    for mu in candidate_exponents(P, opts.max_ram):
        if mu <= last_mu or mu > K:
            continue
        n2 = math.lcm(n, mu.denominator)
        if n2 > opts.max_ram:
            raise RamificationExceeded(
                f"exponent {mu} needs ramification {n2} > {opts.max_ram}"
            )
        k = int(mu * n2)
        E = element_of(P, mu)
        dicr, _ = dicritical_margin(P, mu)
        if dicr:
            form = initial_form(P, k, n2)
            b1 = form[1].B if len(form) > 1 else []
            special = []
            if b1 and not upoly.is_zero_poly(b1, P.field):
                res = upoly.find_roots(b1, P.field)
                special = [r.value for r in res.roots if not _is_zero(r.value, P.field)]
            param_series = PuiseuxPoly.from_terms(terms, P.field) if terms else PuiseuxPoly(1, {}, P.field)
            jets.append(BranchJet(
                param_series, last_mu, DICRITICAL, list(records),
                parameter={"mu": mu, "excluded": special, "field": P.field},
            ))
            conts = list(special)
            for v in opts.values.get(mu, []):
                if not any(_same(v, s, P.field) for s in conts):
                    conts.append(v)
            for v in _sample_values(opts.samples):
                if not any(_same(v, s, P.field) for s in conts):
                    conts.append(v)
            for c in conts:
                _child(P, terms, mu, records, n2, k, c, opts, jets)
        else:
            phi = initial_polynomial(P, mu)
            roots = _nonzero_roots(phi, P, opts.allow_numeric)
            if roots is None:
                Pn = P.with_field(ComplexField())
                roots = _nonzero_roots(initial_polynomial(Pn, mu), Pn, True)
                for c in roots:
                    _child(Pn, terms, mu, records, n2, k, c, opts, jets)
            else:
                for c in roots:
                    _child(P, terms, mu, records, n2, k, c, opts, jets)
        if E.bot == 0:
            # beyond this co-slope the point at height 0 can no longer be removed
            break


def _same(a, b, fld):
    try:
        return fld.is_zero(fld.convert(a) - fld.convert(b))
    except Exception:
        return False


def _child(P, terms, mu, records, n, k, c, opts, jets):
    P2 = promote(P, c)
    rec, Pk = step(P2, k, n, c, 1, declared=False)
    _walk(Pk, terms + [(mu, Pk.field.convert(c))], mu, records + [rec], n, opts, jets)


def _make_jet(P, terms, records, n, opts):
    fld = P.field
    series = PuiseuxPoly.from_terms(terms, fld) if terms else PuiseuxPoly(1, {}, fld)
    has_ground = any(j == 0 for (_, j) in P.A)
    if not has_ground:
        return BranchJet(series, opts.K, CERTIFIED, list(records), exact_solution=True)
    E = element_of(P, opts.K)
    if E.bot == 1 and _no_late_resonance(P, E.bottom_point, n, opts):
        return BranchJet(series, opts.K, CERTIFIED, list(records))
    return BranchJet(series, opts.K, JET_ONLY, list(records))


def _no_late_resonance(P, point, n, opts):
    """No ``mu > K`` in the continuation grid makes the height one pivot vanish."""
    iota, j = point
    grid = math.lcm(n, grid_denominator(P.cloud_keys()))
    mu = resonant_exponent(P.op, P.a(iota, j), P.b(iota, j), P.field, max(opts.max_ram, grid))
    if mu is None or mu <= opts.K:
        return True
    return (mu * grid).denominator != 1


@dataclass
class VerificationReport:
    passed: bool
    exact_zero: bool
    residual_order: object
    threshold: object
    failing_k: int | None
    message: str
    n: int
    K: int

    def to_json(self) -> dict:
        def q(v):
            return "inf" if v == math.inf else (None if v is None else str(v))

        return {
            "passed": self.passed,
            "exact_zero": self.exact_zero,
            "residual_order": q(self.residual_order),
            "threshold": q(self.threshold),
            "failing_k": self.failing_k,
            "message": self.message,
            "n": self.n,
            "K": self.K,
        }


def verify_solution(P: CoveredEquation, s: PuiseuxPoly, K: int | None = None) -> VerificationReport:
    """Check that ``s`` solves ``P`` exactly or up to the index ``K`` (units of ``1/n``).

    The residual ``A(x, s) + B(x, s) sigma(s)`` is computed first; zero is an
    exact pass. Otherwise the jet ``s_K`` is substituted and the check is that
    the substituted equation keeps its points of height 0 strictly right of
    the supporting line of co-slope ``K/n`` (its element there has bottom at
    least 1), equivalently ``ord A_K(x, 0) > min_{j >= 1} (iota + j K/n)``.
    On failure the first step whose initial polynomial rejects the
    coefficient is reported.
    """
    s = s.reduce()
    if s.is_zero() or s.order() <= 0:
        raise ValueError("verify_solution needs a series of positive order")
    n = math.lcm(s.n, P.m)
    if K is None:
        K = max(s.reramify(n // s.n).coeffs)
    R = evaluate(P, s)
    if R.is_zero():
        return VerificationReport(True, True, math.inf, None, None, "exact solution", n, K)
    try:
        tr = trace(P, s, K, declared=True)
    except NotASolution as exc:
        return VerificationReport(False, False, R.order(), None, exc.k, str(exc), n, K)
    PK = tr.equations[-1]
    mu = Fraction(K, n)
    ground = [Fraction(i, PK.m) for (i, j) in PK.A if j == 0]
    upper = [Fraction(i, PK.m) + j * mu for (i, j) in list(PK.A) + list(PK.B) if j >= 1]
    ground_order = min(ground) if ground else math.inf
    threshold = min(upper) if upper else -math.inf
    if ground_order > threshold:
        return VerificationReport(
            True, False, R.order(), threshold, None,
            f"residual of the jet has order {ground_order} > {threshold}", n, K,
        )
    return VerificationReport(
        False, False, R.order(), threshold, K,
        f"residual of the jet has order {ground_order} <= {threshold}", n, K,
    )
