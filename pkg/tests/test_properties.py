from __future__ import annotations

import math
import random

from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from newtonpuiseux import (
    OperatorSpec,
    PuiseuxPoly,
    bound_report,
    characteristic_data,
    gen_random_branch,
    parse_equation,
    verify_solution,
)
from newtonpuiseux import bounds, corpus, upoly
from newtonpuiseux.equation import substitute_parametric
from newtonpuiseux.scalars import ExactField
from newtonpuiseux.series import sigma_apply

from conftest import DIFF, FIG_EQ

QQ = ExactField()
SETTINGS = settings(max_examples=60, deadline=None)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)


@st.composite
def puiseux(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    idx = draw(st.lists(st.integers(0, 3 * n), min_size=0, max_size=5, unique=True))
    return PuiseuxPoly(n, {i: mpq(draw(rationals)) for i in idx}, QQ)


@SETTINGS
@given(puiseux(), puiseux(), puiseux())
def test_series_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a


@SETTINGS
@given(puiseux(), st.integers(1, 4))
def test_reduce_and_reramify(a, m):
    r = a.reduce()
    assert r.reduce() == r
    assert a.reramify(m).reduce() == r
    if not r.is_zero():
        assert a.reramify(m).order() == a.order()


@SETTINGS
@given(puiseux(), puiseux())
def test_sigma_is_additive(a, b):
    # 2^60 has exact n-th roots for every ramification n <= 6 drawn here
    for op in (DIFF, OperatorSpec.q_difference(2 ** 60)):
        assert sigma_apply(a + b, op) == sigma_apply(a, op) + sigma_apply(b, op)


@SETTINGS
@given(st.integers(0, 12), st.sampled_from([1, 2, 4]), rationals)
def test_sigma_q_on_monomials(i, n, c):
    # q = 16 has the exact roots 16^(1/n) for n | 4
    op = OperatorSpec.q_difference(16)
    mono = PuiseuxPoly(n, {i: mpq(c)}, QQ)
    root = {1: 16, 2: 4, 4: 2}[n]
    assert sigma_apply(mono, op) == PuiseuxPoly(n, {i: mpq(c) * root ** i}, QQ)


@SETTINGS
@given(st.integers(0, 10_000), st.integers(0, 3))
def test_random_branch_characteristic_round_trip(seed, genus):
    rng = random.Random(seed)
    factors = corpus.random_factors(rng, genus, 24)
    s = gen_random_branch(rng, genus=genus, factors=factors, max_ramification=24)
    cd = characteristic_data(s)
    assert cd.factors == factors
    assert math.prod(cd.factors) == s.n
    assert (cd.genus == 0) == (s.n == 1)


@SETTINGS
@given(st.integers(0, 10_000), st.integers(0, 2))
def test_minimal_polynomial_vanishes_on_branch(seed, genus):
    s = gen_random_branch(random.Random(seed), genus=genus, max_ramification=8)
    f = corpus.branch_minimal_polynomial(s)
    assert corpus.bivariate_eval(f, s).is_zero()
    assert max(j for _, j in f) == s.n


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["diff", "1/2", "2"]))
def test_planted_solutions_verify(seed, which):
    rng = random.Random(seed)
    if which == "diff":
        s = gen_random_branch(rng, genus=rng.randint(0, 2), max_ramification=8)
        P = corpus.gen_differential_from_branch(s)
        assert P.m == 1
    else:
        P, s = corpus.gen_q_planted(rng, corpus.parse_q(which), genus=rng.randint(0, 2))
    assert verify_solution(P, s).passed


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(min_value=1, max_value=20, max_denominator=8), min_size=1, max_size=6))
def test_improper_roots_in_annulus(values):
    u = sorted(values, reverse=True)  # u0 >= u1 >= ... >= u_{m-1} >= 1
    rep = bounds.improper_check([mpq(v.numerator, v.denominator) for v in u])
    assert rep.is_improper and rep.within
    assert len(rep.roots) == len(u)


@SETTINGS
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5))
def test_find_roots_counts_degree(roots):
    p = [1]
    for r in roots:
        p = upoly.mul(p, [-r, 1])
    res = upoly.find_roots([mpq(c) for c in p], QQ)
    assert res.count() == len(roots)
    assert sorted(v for r in res.roots for v in [r.value] * r.multiplicity) == sorted(roots)


@SETTINGS
@given(rationals, rationals, st.integers(1, 4), st.integers(1, 3))
def test_substitution_is_additive(c1, c2, k, n):
    P = parse_equation(FIG_EQ, DIFF)
    a = P.substitute(mpq(c1), k, n).substitute(mpq(c2), k, n)
    assert a.equals(P.substitute(mpq(c1) + mpq(c2), k, n))


@SETTINGS
@given(rationals, st.integers(1, 4), st.integers(1, 3))
def test_parametric_substitution_matches(c, k, n):
    P = parse_equation(FIG_EQ, OperatorSpec.q_difference(mpq(1, 64)))
    assert substitute_parametric(P, k, n).evaluate(mpq(c)).equals(P.substitute(mpq(c), k, n))


def test_reasonableness_never_unreasonable_for_differential():
    rng = random.Random(1)
    for _ in range(20):
        s = gen_random_branch(rng, genus=rng.randint(0, 2))
        rep = bound_report(corpus.gen_differential_from_branch(s), s)
        assert rep.reasonable.verdict == "reasonable"
