"""Per-step quantities of the Newton-Puiseux process.

For a step ``k`` with co-slope ``mu = k/n`` the previous equation ``P_{k-1}``
gives the element ``E_{k-1,k/n}`` and its initial polynomial ``Phi``; the
coefficient ``a_k`` is substituted to give ``P_k`` and the element ``E_k`` at
the same co-slope. :func:`step` bundles everything into a :class:`StepRecord`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import upoly
from .equation import CoveredEquation, promote, substitute, substitute_parametric
from .polygon import SupportElement
from .scalars import ComplexField, ExactField, NotRepresentable, field_with_root
from .series import PuiseuxPoly, characteristic_data

INF = math.inf


class NotASolution(ValueError):
    """A declared coefficient is not a root of its initial polynomial."""

    def __init__(self, k: int, message: str):
        self.k = k
        super().__init__(message)


def delta(op, mu, field):
    """``mu`` for the derivative, ``q**mu`` (through the fixed root) for the dilation."""
    return op.delta(Fraction(mu), field)


def element_of(P: CoveredEquation, mu) -> SupportElement:
    """Element of ``P`` at co-slope ``mu``, scanned in integer arithmetic."""
    mu = Fraction(mu)
    if mu <= 0:
        raise ValueError("co-slope must be positive")
    p, q, m = mu.numerator, mu.denominator, P.m
    # m*p*(j + (i/m)/mu) = m*p*j + q*i
    best, on = None, []
    for key in set(P.A) | set(P.B):
        v = m * p * key[1] + q * key[0]
        if best is None or v < best:
            best, on = v, [key]
        elif v == best:
            on.append(key)
    if best is None:
        raise ValueError("element of an empty cloud")
    pts = tuple((Fraction(i, m), j) for i, j in sorted(on, key=lambda k: -k[1]))
    return SupportElement(mu, Fraction(best, m * p), pts)


def initial_polynomial(P: CoveredEquation, mu, E=None):
    """``sum (A + delta*B) C**j`` over the element of co-slope ``mu``."""
    E = E or element_of(P, mu)
    d = delta(P.op, mu, P.field)
    phi = [P.field.zero] * (E.top + 1)
    for iota, j in E.points:
        phi[j] = P.a(iota, j) + d * P.b(iota, j)
    return upoly.trim(phi, P.field)


def dicritical_margin(P: CoveredEquation, mu, E=None):
    """``(is_dicritical, margin)``.

    Exact fields decide ``Phi == 0`` exactly and report margin 0. Numeric fields
    compare each coefficient of ``Phi`` with ``eps`` times the largest
    coefficient magnitude of ``P`` on the element; the margin is the largest
    ratio ``|Phi_j| / scale`` (dicritical iff it is below ``eps``).
    """
    E = E or element_of(P, mu)
    fld = P.field
    d = delta(P.op, mu, fld)
    vals = [P.a(i, j) + d * P.b(i, j) for i, j in E.points]
    if fld.exact:
        return all(v == 0 for v in vals), 0
    scale = max(
        [abs(fld.convert(P.a(i, j))) for i, j in E.points]
        + [abs(fld.convert(d * P.b(i, j))) for i, j in E.points]
    )
    if scale == 0:
        return True, 0
    margin = max(abs(fld.convert(v)) for v in vals) / scale
    return margin < fld.eps, margin


def is_dicritical(P: CoveredEquation, mu) -> bool:
    return dicritical_margin(P, mu)[0]


def alpha_beta(P_prev: CoveredEquation, k: int, n: int, E=None):
    """``alpha_k`` from the A-coefficients and ``beta_k`` from the B-coefficients on the line."""
    mu = Fraction(k, n)
    E = E or element_of(P_prev, mu)
    fld = P_prev.field
    alpha = [fld.zero] * (E.top + 1)
    beta = [fld.zero] * max(E.top, 1)
    for iota, j in E.points:
        alpha[j] = P_prev.a(iota, j)
        if j >= 1:
            beta[j - 1] = P_prev.b(iota, j)
    return upoly.trim(alpha, fld), upoly.trim(beta, fld)


@dataclass(frozen=True)
class InitialFormEntry:
    j: int
    iota: Fraction
    A: list
    B: list


def initial_form(P_prev: CoveredEquation, k: int, n: int):
    """Coefficients ``A^k_j(C)``, ``B^k_j(C)`` on the line ``L_{k/n}(P_{k-1})``, ``j = 0..t``.

    Only points of the line contribute to the line after the substitution, so
    the computation runs on the restriction of ``P_{k-1}`` to the line.
    """
    mu = Fraction(k, n)
    E = element_of(P_prev, mu)
    line = P_prev.restrict_to_line(mu, E.alpha)
    par = substitute_parametric(line, k, n)
    out = []
    for j in range(E.top + 1):
        iota = E.iota_at(j)
        out.append(InitialFormEntry(j, iota, list(par.a(iota, j)), list(par.b(iota, j))))
    return out


def residue_at(P: CoveredEquation, point):
    """``A/B`` at a cloud point, ``INF`` when ``B`` vanishes."""
    iota, j = point
    a, b = P.a(iota, j), P.b(iota, j)
    if P.field.is_zero(b):
        return INF
    return a / b


def residues(P_k: CoveredEquation, mu, E=None):
    """Top and bottom residues of the element of ``P_k`` at co-slope ``mu``."""
    E = E or element_of(P_k, mu)
    return residue_at(P_k, E.top_point), residue_at(P_k, E.bottom_point)


@dataclass
class StepRecord:
    """Audit of one step ``k`` (co-slope ``k/n``) along a series."""

    k: int
    n: int
    mu: Fraction
    element_before: SupportElement
    phi: list
    dicritical: bool
    dicritical_margin: object
    a_k: object
    multiplicity: int | None
    alpha: list
    beta: list
    element_after: SupportElement
    rho: int
    tres: object
    bres: object
    is_characteristic: bool
    grid_before: int
    grid_after: int
    delta: object
    field: object = dc_field(repr=False, default=None)

    @property
    def top(self) -> int:
        return self.element_after.top

    @property
    def bot(self) -> int:
        return self.element_after.bot

    def to_json(self) -> dict:
        f = self.field

        def scal(v):
            if v is INF:
                return "inf"
            return f.to_json(v)

        return {
            "k": self.k,
            "n": self.n,
            "mu": str(self.mu),
            "element_before": self.element_before.to_json(),
            "phi": upoly.to_json(self.phi, f),
            "dicritical": self.dicritical,
            "dicritical_margin": str(self.dicritical_margin) if not f.exact else "0",
            "a_k": scal(self.a_k),
            "multiplicity": self.multiplicity,
            "alpha": upoly.to_json(self.alpha, f),
            "beta": upoly.to_json(self.beta, f),
            "element_after": self.element_after.to_json(),
            "rho": self.rho,
            "tres": scal(self.tres),
            "bres": scal(self.bres),
            "is_characteristic": self.is_characteristic,
            "grid_before": self.grid_before,
            "grid_after": self.grid_after,
            "delta": scal(self.delta),
            "backend": f.name,
        }


def step(P_prev: CoveredEquation, k: int, n: int, a_k, rho: int = 1, declared: bool = True):
    """Run step ``k``; returns ``(record, P_k)``.

    When ``declared`` (``a_k`` comes from a claimed solution) a non-root raises
    :class:`NotASolution`.
    """
    mu = Fraction(k, n)
    P_prev = promote(P_prev, a_k)
    fld = P_prev.field
    a_k = fld.convert(a_k)
    E_before = element_of(P_prev, mu)
    phi = initial_polynomial(P_prev, mu, E_before)
    dicr, margin = dicritical_margin(P_prev, mu, E_before)
    if dicr:
        phi = []
        mult = None
    else:
        mult = upoly.root_multiplicity(phi, a_k, fld)
        if declared and mult == 0:
            raise NotASolution(
                k,
                f"step {k}: coefficient {fld.format(a_k)} is not a root of the initial "
                f"polynomial {upoly.format_poly(phi, fld)}",
            )
    alpha, beta = alpha_beta(P_prev, k, n, E_before)
    P_k = substitute(P_prev, a_k, k, n) if not fld.is_zero(a_k) else P_prev
    E_after = element_of(P_k, mu)
    tres, bres = residues(P_k, mu, E_after)
    record = StepRecord(
        k=k, n=n, mu=mu,
        element_before=E_before,
        phi=phi,
        dicritical=dicr,
        dicritical_margin=margin,
        a_k=a_k,
        multiplicity=mult,
        alpha=alpha,
        beta=beta,
        element_after=E_after,
        rho=rho,
        tres=tres,
        bres=bres,
        is_characteristic=rho > 1,
        grid_before=P_prev.grid(),
        grid_after=P_k.grid(),
        delta=delta(P_prev.op, mu, fld),
        field=fld,
    )
    return record, P_k


@dataclass
class Trace:
    """Sequence of steps of an equation along a series, with the equations ``P_0..P_K``."""

    equation: CoveredEquation
    series: PuiseuxPoly
    n: int
    chardata: object
    records: list
    equations: list

    def to_json_lines(self):
        import json

        return [json.dumps(r.to_json(), sort_keys=True) for r in self.records]


def _working_field(P: CoveredEquation, s: PuiseuxPoly, n: int):
    """A field for ``P`` holding ``delta_{1/n}`` and the coefficients of ``s``."""
    fld = P.field
    if not fld.exact:
        return fld
    if not s.field.exact:
        return s.field
    if fld.d is not None and s.field.d is not None and fld.d != s.field.d:
        return ComplexField()
    fld = ExactField(fld.d if fld.d is not None else s.field.d)
    if not P.op.is_differential:
        try:
            P.op.delta(Fraction(1, n), fld)
        except NotRepresentable:
            fld = field_with_root(fld, P.op.q, n)
    return fld


def trace(P: CoveredEquation, s: PuiseuxPoly, K: int | None = None, declared: bool = True) -> Trace:
    """Steps ``k = 1..K`` of ``P`` along ``s``; indices are in units of ``1/n``.

    ``n`` is the least common ramification of ``s`` and ``P``; characteristic
    factors are measured relative to the grid of ``P`` (plain definition for
    1-covered equations). ``K`` defaults to the last index of ``s``.
    """
    s = s.reduce()
    if s.is_zero():
        n = P.m
    else:
        if s.order() <= 0:
            raise ValueError("the series must have positive order")
        n = math.lcm(s.n, P.m)
    fld = _working_field(P, s, n)
    if fld != P.field:
        P = P.with_field(fld)
    s_n = s.reramify(n // s.n) if not s.is_zero() else PuiseuxPoly(n, {}, s.field)
    chardata = characteristic_data(s, base=P.m) if not s.is_zero() else None
    if K is None:
        K = max(s_n.coeffs) if s_n.coeffs else 0
    records, eqs = [], [P]
    cur = P
    for k in range(1, K + 1):
        a_k = s_n.coeffs.get(k, 0)
        rho = chardata.factor_at(k) if chardata is not None else 1
        rec, cur = step(cur, k, n, a_k, rho, declared)
        records.append(rec)
        eqs.append(cur)
    return Trace(P, s, n, chardata, records, eqs)


@dataclass(frozen=True)
class Violation:
    k: int
    name: str
    detail: str

    def to_json(self) -> dict:
        return {"k": self.k, "name": self.name, "detail": self.detail}


def _poly_power(p, e, fld):
    out = [fld.one]
    for _ in range(e):
        out = upoly.mul(out, p)
    return out


def audit(tr: Trace, rel_tol=None) -> list:
    """Check the structural invariants of every step of a trace; returns the violations.

    Covered: the alpha/beta descent identities of the initial form, polygon
    stability above the top of each element, ``Phi(a_k) = 0`` with
    multiplicity at least ``Bot(E_k)``, the descent inequalities and their
    sharp factorisation, ``Bot(E_k) >= 1``, the dicritical conditions, the
    residue recurrence, and (for 1-covered equations) that characteristic
    exponents open sides.
    """
    from .polygon import build_polygon

    out = []
    recs = tr.records
    eqs = tr.equations
    polys = [build_polygon(P.cloud_keys()) for P in eqs]
    cd = tr.chardata
    n = tr.n

    def bad(k, name, detail=""):
        out.append(Violation(k, name, detail))

    for rec in recs:
        k = rec.k
        P_prev, P_k = eqs[k - 1], eqs[k]
        fld = P_k.field
        d = rec.delta
        t = rec.element_before.top

        def same(p, q):
            return upoly.polys_equal(p, q, fld, rel_tol)

        # alpha/beta decomposition and descent identities
        phi = rec.phi
        if not same(phi, upoly.add(rec.alpha, upoly.scale(upoly.shift(rec.beta, 1), d))):
            bad(k, "phi = alpha + delta*C*beta")
        form = initial_form(P_prev, k, n)
        for entry in form:
            j = entry.j
            if j == 0:
                if not same(entry.A, phi):
                    bad(k, "A_0 = Phi")
                continue
            tphi = upoly.taylor_coefficient(phi, j)
            tbeta = upoly.taylor_coefficient(rec.beta, j - 1)
            if not same(entry.B, tbeta):
                bad(k, "B_j = beta^(j-1)/(j-1)!", f"j={j}")
            if not same(entry.A, upoly.sub(tphi, upoly.scale(tbeta, d))):
                bad(k, "A_j = Phi^(j)/j! - delta beta^(j-1)/(j-1)!", f"j={j}")
            if not same(upoly.add(entry.A, upoly.scale(entry.B, d)), tphi):
                bad(k, "A_j + delta B_j = Phi^(j)/j!", f"j={j}")
        # polygon stability above the top of E_{k-1,k/n}
        if polys[k - 1].vertices_at_or_above(t) != polys[k].vertices_at_or_above(t):
            bad(k, "polygon stability", f"above height {t}")
        top_pt = rec.element_before.top_point
        i_top = int(top_pt[0] * P_prev.m)
        scale_k = P_k.m // P_prev.m
        for name, before, after in (("A", P_prev.A, P_k.A), ("B", P_prev.B, P_k.B)):
            b0 = before.get((i_top, top_pt[1]), fld.zero)
            a0 = after.get((i_top * scale_k, top_pt[1]), fld.zero)
            if not same([b0], [a0]):
                bad(k, "top coefficient unchanged", name)
        if rec.top != t:
            bad(k, "Top(E_k) = Top(E_{k-1,k/n})", f"{rec.top} != {t}")
        # roots and multiplicities
        bot, top, rho = rec.bot, rec.top, rec.rho
        if bot < 1:
            bad(k, "Bot(E_k) >= 1", f"Bot={bot}")
        if not rec.dicritical:
            if rec.multiplicity is None or rec.multiplicity < 1:
                bad(k, "Phi(a_k) = 0")
            elif rec.multiplicity < bot:
                bad(k, "multiplicity >= Bot(E_k)", f"{rec.multiplicity} < {bot}")
        if bot >= 2 and rec.beta and not upoly.is_zero_poly(rec.beta, fld):
            if upoly.root_multiplicity(rec.beta, rec.a_k, fld) < bot - 1:
                bad(k, "multiplicity in beta >= Bot(E_k) - 1")
        if rec.dicritical:
            b1 = form[1].B if len(form) > 1 else []
            if upoly.is_zero_poly(b1, fld):
                bad(k, "dicritical: B_1 not identically zero")
            elif bot > 1 and upoly.root_multiplicity(b1, rec.a_k, fld) < 1:
                bad(k, "dicritical: a_k root of B_1")
        # descent inequalities
        if not rec.dicritical or rho == 1:
            if bot * rho > top:
                bad(k, "Bot*rho <= Top", f"{bot}*{rho} > {top}")
        else:
            if top < rho * bot - (rho - 1):
                bad(k, "Top >= rho*Bot - (rho-1)", f"{top} < {rho}*{bot}-{rho - 1}")
        if not rec.dicritical and bot * rho == top:
            target = _poly_power(upoly.sub(upoly.monomial(fld.one, rho), [rec.a_k ** rho]), bot, fld)
            lead = upoly.trim(phi, fld)[-1]
            if not same(phi, upoly.scale(target, lead)):
                bad(k, "sharp case: Phi = u (C^rho - a^rho)^Bot")
        # residue recurrence
        if rec.dicritical or bot * rho == top:
            tres, bres = rec.tres, rec.bres
            if tres is INF or bres is INF:
                if not (tres is INF and bres is INF):
                    bad(k, "residue recurrence", "infinite residue on one side only")
            elif not same([bres], [rho * tres + (rho - 1) * d]):
                bad(k, "residue recurrence")
        # 1-covered: characteristic exponents other than the last open sides
        if cd is not None and eqs[0].m == 1:
            idx = cd.index_of(k)
            if idx is not None and idx < cd.genus:
                if not top > bot:
                    bad(k, "characteristic exponent opens a side")
                if top > 1 and not rec.grid_after > rec.grid_before:
                    bad(k, "grid refines at a characteristic exponent")
    # no consecutive dicriticals
    dic = [r for r in recs if r.dicritical]
    for r in dic:
        Q = r.element_after.bottom_point
        for later in dic:
            if later.k > r.k and Q in later.element_before.points:
                bad(later.k, "bottom of a dicritical element on a later dicritical element", f"from k={r.k}")
    return out
