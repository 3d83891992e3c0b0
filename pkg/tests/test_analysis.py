from __future__ import annotations

import dataclasses
import math
from fractions import Fraction

import pytest
from gmpy2 import mpq

from newtonpuiseux import OperatorSpec, audit, parse_equation, step, trace
from newtonpuiseux import analysis
from newtonpuiseux.analysis import NotASolution
from newtonpuiseux.scalars import ComplexField, ExactField, QuadraticNumber

from conftest import DIFF, Q11, WORKED_EQ

F = Fraction
QQ = ExactField()
R11 = QuadraticNumber(0, 1, 11)


@pytest.fixture
def P2():
    return parse_equation(WORKED_EQ, DIFF, Q11).substitute(-1, 1, 1)


def test_delta():
    assert analysis.delta(DIFF, F(3, 2), QQ) == mpq(3, 2)
    assert analysis.delta(OperatorSpec.q_difference(4), F(1), QQ) == 4
    assert analysis.delta(OperatorSpec.q_difference(4), F(1, 2), QQ) == 2


def test_initial_polynomials_of_worked_example(P2):
    P0 = parse_equation(WORKED_EQ, DIFF, Q11)
    assert analysis.initial_polynomial(P0, F(1)) == []
    assert analysis.initial_polynomial(P2, F(3, 2)) == [0, mpq(11, 2), 0, mpq(-1, 2)]
    P3 = P2.substitute(-R11, 3, 2)
    assert analysis.initial_polynomial(P3, F(2)) == [mpq(-121, 2), -15]


def test_is_dicritical(P2, fig):
    assert analysis.is_dicritical(parse_equation(WORKED_EQ, DIFF), F(1))
    assert not analysis.is_dicritical(P2, F(3, 2))
    assert analysis.is_dicritical(fig, F(1))


def test_alpha_beta(P2):
    alpha, beta = analysis.alpha_beta(P2, 3, 2)
    assert alpha == [0, 1, 0, 1]
    assert beta == [3, 0, -1]


def test_alpha_beta_algebraic_equation():
    P = parse_equation("y^2 - x", DIFF)
    alpha, beta = analysis.alpha_beta(P, 1, 2)
    assert beta == [] and alpha == analysis.initial_polynomial(P, F(1, 2))


def test_initial_form_constant_term_is_phi(P2):
    form = analysis.initial_form(P2, 3, 2)
    assert form[0].A == analysis.initial_polynomial(P2, F(3, 2))
    # the top coefficients do not depend on C
    top = form[-1]
    assert all(c == 0 for c in top.A[1:]) and all(c == 0 for c in top.B[1:])


def test_initial_form_dicritical_identity():
    P0 = parse_equation(WORKED_EQ, DIFF)
    for entry in analysis.initial_form(P0, 1, 1)[1:]:
        s = [a + b for a, b in zip(entry.A + [0] * 8, entry.B + [0] * 8)]
        assert all(c == 0 for c in s)


def test_residues():
    P = parse_equation("3*y - 2*x*y1", DIFF)
    assert analysis.residues(P, F(3, 2)) == (mpq(-3, 2), mpq(-3, 2))
    A = parse_equation("y^2 - x", DIFF)
    assert analysis.residues(A, F(1, 2)) == (math.inf, math.inf)


def test_worked_trace(worked):
    P0, s = worked
    tr = trace(P0, s)
    assert tr.n == 2
    r1, r2, r3, r4 = tr.records
    assert r2.dicritical and r2.tres == -1 and r2.bres == -1
    assert not r3.dicritical and r3.a_k == -R11 and r3.multiplicity == 1
    assert (r3.element_before.top, r3.bot, r3.rho) == (3, 1, 2)
    assert r3.is_characteristic and (r3.grid_before, r3.grid_after) == (1, 2)
    assert r4.phi == [mpq(-121, 2), -15] and r4.a_k == mpq(-121, 30)
    assert audit(tr) == []


def test_step_rejects_non_root(P2):
    with pytest.raises(NotASolution):
        step(P2, 3, 2, 7)


def test_step_zero_coefficient_not_a_root():
    P = parse_equation("y - x - 1", DIFF)
    with pytest.raises(NotASolution):
        step(P, 1, 1, 0)


def test_trace_json_lines(worked):
    import json

    P0, s = worked
    lines = trace(P0, s).to_json_lines()
    assert len(lines) == 4
    rec = json.loads(lines[2])
    assert rec["phi"] == ["0", "11/2", "0", "-1/2"] and rec["rho"] == 2


def test_grid_denominator_of_worked_clouds(worked):
    P0, s = worked
    eqs = trace(P0, s).equations
    assert eqs[2].grid() == 1 and eqs[3].grid() == 2


def test_numeric_backend_trace_audits_clean(worked):
    P0, s = worked
    fld = ComplexField()
    tr = trace(P0.with_field(fld), s.with_field(fld))
    assert [r.dicritical for r in tr.records] == [False, True, False, False]
    assert audit(tr, rel_tol=1e-20) == []


# the audit must notice tampering

def test_audit_detects_tampered_phi(worked):
    P0, s = worked
    tr = trace(P0, s)
    rec = tr.records[2]
    tr.records[2] = dataclasses.replace(rec, phi=[0, mpq(11, 2), 0, mpq(-1, 3)])
    names = {v.name for v in audit(tr)}
    assert "phi = alpha + delta*C*beta" in names


def test_audit_detects_tampered_equation(worked):
    P0, s = worked
    tr = trace(P0, s)
    P3 = tr.equations[3]
    A = dict(P3.A)
    A[(2, 3)] = A[(2, 3)] * 2  # top point (1,3) of E_{2,3/2}, indices in units of 1/2
    tr.equations[3] = type(P3)(P3.op, P3.m, A, P3.B, P3.field)
    assert any(v.name == "top coefficient unchanged" for v in audit(tr))


def test_audit_detects_false_rho(worked):
    P0, s = worked
    tr = trace(P0, s)
    tr.records[2] = dataclasses.replace(tr.records[2], rho=5)
    assert any(v.name == "Bot*rho <= Top" for v in audit(tr))
