import math
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from dirforms import forms
from dirforms.forms import FormParams


def sympy_partial_fractions(params):
    """A_{l,j} as (a-j)-th Taylor coefficients of (t-dl)^a P(t), computed by sympy."""
    d, a, b, n = params.d, params.a, params.b, params.n
    t = sp.symbols("t")
    num = sp.factorial(2 * n) ** (a - 2 * b) * sp.Integer(d) ** (2 * n * a)
    for l in range(d * n + 1, (d + 2 * b) * n + 1):
        num *= t**2 - l**2
    out = {}
    for l in range(-n, n + 1):
        den = sp.Integer(1)
        for k in range(-n, n + 1):
            if k != l:
                den *= (t - d * k) ** a
        g = num / den
        for j in range(1, a + 1):
            k = a - j
            val = sp.diff(g, t, k).subs(t, d * l) / sp.factorial(k)
            out[(l, j)] = Fraction(int(sp.numer(val)), int(sp.denom(val)))
    return out


def test_worked_example():
    table, coeffs = forms.construct(FormParams(1, 2, 1, 1))
    assert table[(0, 2)] == 36 and table[(1, 2)] == table[(-1, 2)] == 6
    assert table[(1, 1)] == Fraction(-47, 2) and table[(-1, 1)] == Fraction(47, 2) and table[(0, 1)] == 0
    assert coeffs.A == {2: 48}
    assert coeffs.B == {1: Fraction(315, 4)}
    assert coeffs.D == 2 and coeffs.scaled_B == {1: 315}


@pytest.mark.parametrize("params", [FormParams(1, 2, 1, 1), FormParams(1, 3, 1, 2), FormParams(2, 4, 1, 1),
                                    FormParams(3, 4, 2, 1), FormParams(2, 5, 1, 2)])
def test_matches_sympy_oracle(params):
    table = forms.partial_fractions(forms.build_P(params))
    assert table.entries == sympy_partial_fractions(params)


def test_P_value():
    rep = forms.build_P(FormParams(1, 2, 1, 1))
    assert forms.eval_P_exact(rep, 4) == Fraction(7, 300)
    with pytest.raises(forms.PoleError):
        forms.eval_P_exact(rep, 1)


def test_degree_gap():
    rep = forms.build_P(FormParams(2, 7, 2, 3))
    assert rep.degree_gap == 2 * (7 - 4) * 3 + 7
    assert rep.denominator_degree - rep.numerator_degree == rep.degree_gap


@pytest.mark.parametrize("kwargs", [dict(d=0, a=2, b=1, n=1), dict(d=1, a=1, b=1, n=1), dict(d=1, a=3, b=2, n=1),
                                    dict(d=1, a=2, b=1, n=0), dict(d=1, a=2.0, b=1, n=1)])
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        FormParams(**kwargs)


@pytest.mark.parametrize("N, expected", [(1, 1), (2, 2), (6, 60), (10, 2520), (20, 232792560)])
def test_lcm(N, expected):
    assert forms.lcm_upto(N) == expected


def test_lcm_against_math():
    assert forms.lcm_upto(97) == math.lcm(*range(1, 98))
    with pytest.raises(ValueError):
        forms.lcm_upto(0)


params_strategy = st.builds(
    lambda d, b, extra, n: FormParams(d, 2 * b + extra, b, n),
    st.integers(1, 3), st.integers(1, 2), st.integers(0, 3), st.integers(1, 3))
points = st.fractions(max_denominator=30).filter(lambda q: q.denominator > 1)


@settings(max_examples=40, deadline=None)
@given(params_strategy, st.lists(points, min_size=3, max_size=3))
def test_reconstruction_property(params, pts):
    rep = forms.build_P(params)
    table = forms.partial_fractions(rep)
    assert forms.reconstruction_check(rep, table, pts)


@settings(max_examples=30, deadline=None)
@given(params_strategy)
def test_integrality_and_identities_property(params):
    table, coeffs = forms.construct(params)
    assert forms.integrality_check(table, coeffs)
    assert forms.identity_check(table)


def test_checks_report_counterexamples():
    table, coeffs = forms.construct(FormParams(1, 2, 1, 1))
    broken = dict(table.entries)
    broken[(1, 1)] += Fraction(1, 3)
    bad = forms.PartialFractionTable(table.params, broken)
    report = forms.identity_check(bad)
    assert not report and "l=" in report.counterexample or "sum_l" in report.counterexample
    bad_coeffs = forms.LinearFormCoeffs(coeffs.params, {2: Fraction(1, 7)}, coeffs.B, coeffs.D)
    assert not forms.integrality_check(table, bad_coeffs)


def test_growth_within_bound():
    coeffs = [forms.construct(FormParams(1, 5, 1, n))[1] for n in (2, 4, 6, 8)]
    report = forms.growth_report(coeffs)
    assert report.passed
    # measured growth approaches the bound from below
    assert all(ratio <= report.bound + 1.0 for _, ratio in report.rows)
    with pytest.raises(ValueError):
        forms.growth_report(coeffs[::-1])
