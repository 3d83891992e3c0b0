from __future__ import annotations

import dataclasses
import random
from fractions import Fraction

import pytest
from gmpy2 import mpq

from newtonpuiseux import (
    OperatorSpec,
    bound_report,
    corollary_a_rhs,
    foliation_bound_check,
    genus_bound_check,
    improper_check,
    parse_equation,
    parse_series,
    reasonableness,
    theorem_main_rhs,
    theorem_reasonable_rhs,
    trace,
)
from newtonpuiseux import bounds, corpus

from conftest import DIFF

F = Fraction


def test_theorem_main_rhs():
    assert theorem_main_rhs(()) == 1
    assert theorem_main_rhs((3, 2)) == 6
    assert theorem_main_rhs((3, 2), (1,)) == 4


def test_corollary_and_reasonable_rhs():
    assert (corollary_a_rhs((3, 2)), theorem_reasonable_rhs((3, 2))) == (2, 3)
    assert (corollary_a_rhs(()), theorem_reasonable_rhs(())) == (0, 1)
    assert (corollary_a_rhs((2, 2, 2)), theorem_reasonable_rhs((2, 2, 2))) == (2, 4)


def test_worked_report(worked):
    P0, s = worked
    rep = bound_report(P0, s)
    assert (rep.H, rep.H_s, rep.nu0) == (4, 4, 4)
    assert rep.factors == (2,) and rep.dicritical_indices == ()
    assert rep.dicritical_steps == (2,)
    assert (rep.theorem_a_rhs, rep.theorem_b_rhs) == (2, 1)
    assert rep.passed and genus_bound_check(rep)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_sharpness_algebraic(n):
    P = parse_equation(f"y^{n} - x", DIFF)
    rep = bound_report(P, parse_series(f"x^(1/{n})"))
    assert rep.H == rep.H_s == n == rep.theorem_a_rhs


def test_sharpness_resonant():
    P = parse_equation("3*y - 2*x*y1", DIFF)
    rep = bound_report(P, parse_series("5*x^(3/2)"))
    assert rep.H_s == 1 and rep.dicritical_indices == (1,)
    assert rep.theorem_a_rhs == 1 and rep.passed


def test_trace_too_short(worked):
    P0, s = worked
    with pytest.raises(ValueError):
        bound_report(P0, s, trace(P0, s, 2))


def _with_genus(rep, g):
    exps = tuple(range(3, 3 + 2 * g, 2))
    cd = dataclasses.replace(rep.chardata, exponents=exps, pairs=tuple((e, 2) for e in exps))
    return dataclasses.replace(rep, chardata=cd)


def test_genus_checker_boundary_and_violation(worked):
    P0, s = worked
    rep = bound_report(P0, s)
    assert rep.H_s == 4
    # 2^(g-1) <= H: g = 3 sits exactly on the bound, g = 4 breaks it
    assert genus_bound_check(_with_genus(rep, 3))
    assert not genus_bound_check(_with_genus(rep, 4))


def test_strictness_on_worked_example(worked):
    P0, s = worked
    rep = bound_report(P0, s, strictness=True)
    assert rep.strictness is not None and rep.passed


def test_improper_examples():
    r = improper_check([1, 1])
    assert r.is_improper and r.upper == 1 and r.within
    r = improper_check([2])
    assert r.is_improper and r.upper == 2 and r.within
    assert abs(complex(r.roots[0]) + 2) < 1e-20
    assert not improper_check([2, 3]).is_improper


def test_reasonableness_examples():
    v = reasonableness(F(1, 2), 1, (2,))
    assert v.verdict == "reasonable" and v.basis == "|q|<1"
    v = reasonableness(9, 1, (2,))
    assert v.verdict == "reasonable" and v.basis == "|q|^(1/n)>max(r)"
    v = reasonableness(4, 2, (2,), q_root=-2)
    assert v.verdict == "unreasonable" and v.witness_text == "s + 2"


def test_reasonableness_unknown_when_search_exhausted():
    v = reasonableness(complex(0.3, 1.7), 1, (2,), L=4)
    assert v.verdict == "unknown"


def test_differential_is_always_reasonable():
    rng = random.Random(0)
    for _ in range(10):
        s = corpus.gen_random_branch(rng, genus=2)
        P = corpus.gen_differential_from_branch(s)
        assert bound_report(P, s).reasonable.verdict == "reasonable"


def _hamiltonian(text):
    s = parse_series(text)
    f = corpus.branch_minimal_polynomial(s)
    return corpus.partial_x(f), corpus.partial_y(f), s


def test_foliation_cusp():
    A, B, s = _hamiltonian("x^(3/2)")
    r = foliation_bound_check(A, B, s)
    assert (r.nu0, r.bound, r.passed, r.invariant) == (1, 1, True, True)


def test_foliation_two_pairs():
    A, B, s = _hamiltonian("x^(3/2) + x^(7/4)")
    r = foliation_bound_check(A, B, s)
    assert (r.nu0, r.bound, r.passed) == (3, 2, True)


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (3, 2), (5, 7)])
def test_foliation_radial(m, n):
    A, B = bounds.radial_foliation(m, n)
    s = parse_series(f"2*x^({m}/{n})")
    r = foliation_bound_check(A, B, s)
    assert (r.nu0, r.bound, r.passed, r.invariant) == (1, 1, True, True)


def test_foliation_rejects_common_factor_and_regular_points():
    with pytest.raises(ValueError):
        foliation_bound_check({(1, 1): mpq(1)}, {(1, 0): mpq(1)}, parse_series("x"))
    with pytest.raises(ValueError):
        foliation_bound_check({(0, 0): mpq(-1)}, {(0, 0): mpq(1)}, parse_series("x"))


def test_intrinsic_factors_invert_tangent_branches():
    assert bounds.intrinsic_factors(parse_series("x^(2/3)")) == (2,)
    assert bounds.intrinsic_factors(parse_series("x^(3/2)")) == (2,)


def test_reasonableness_of_q_equation():
    op = OperatorSpec.q_difference(mpq(1, 2))
    P = parse_equation("y^2 - x + x*y1", op)
    rep = bound_report(P, parse_series("x^(1/2)"))
    assert rep.reasonable.verdict == "reasonable"
