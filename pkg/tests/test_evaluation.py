from fractions import Fraction

import mpmath as mp
import pytest

from dirforms import evaluation as ev
from dirforms.forms import FormParams, construct, build_P, eval_P_exact
from dirforms.series import PeriodicSeries, preset

P30 = ev.PrecisionSpec(30)


def close(x, y, digits=30):
    with mp.workdps(digits + 10):
        return abs(x - y) <= mp.mpf(10) ** -digits * max(1, abs(y))


@pytest.mark.parametrize("j, x", [(2, Fraction(1)), (3, Fraction(1)), (2, Fraction(1, 2)), (5, Fraction(1, 3)),
                                  (7, Fraction(3, 4)), (40, Fraction(2, 5))])
def test_hurwitz_against_mpmath(j, x):
    with mp.workdps(60):
        expected = mp.zeta(j, mp.mpf(x.numerator) / x.denominator)
    assert close(ev.hurwitz_zeta(j, x, P30), expected)


def test_hurwitz_domain():
    with pytest.raises(ev.DomainError):
        ev.hurwitz_zeta(1, 1)
    with pytest.raises(ev.DomainError):
        ev.hurwitz_zeta(2, 0)


def test_zeta_m():
    with mp.workdps(50):
        assert close(ev.zeta_m(2, 1, 2, P30), mp.pi**2 / 8)
        assert close(ev.zeta_m(2, 1, 2, P30) + ev.zeta_m(2, 2, 2, P30), mp.zeta(2))
    with pytest.raises(ev.DomainError):
        ev.zeta_m(2, 3, 2)


def test_L_values_closed_forms():
    with mp.workdps(50):
        assert close(ev.L_value(preset("chi4"), 1, P30), mp.pi / 4)
        assert close(ev.L_value(preset("chi4"), 3, P30), mp.pi**3 / 32)
        assert close(ev.L_value(preset("chi3"), 1, P30), mp.pi / (3 * mp.sqrt(3)))
        assert close(ev.L_value(preset("zeta"), 3, P30), mp.zeta(3))


def test_L_one_diverges_for_zeta():
    with pytest.raises(ev.DomainError):
        ev.L_value(preset("zeta"), 1)


def test_complex_series_is_linear():
    s = PeriodicSeries(4, (1, 0, -1, 0), (0, 1, 0, 0))
    value = ev.L_value(s, 2, P30)
    re = ev.L_value(preset("chi4"), 2, P30)
    im = ev.zeta_m(2, 2, 4, P30)
    assert close(value.real, re) and close(value.imag, im)


def test_precision_spec_bounds():
    with pytest.raises(ValueError):
        ev.PrecisionSpec(9)
    with pytest.raises(ValueError):
        ev.PrecisionSpec(30, 5)
    assert ev.PrecisionSpec(30, 20).working == 50


def test_worked_value():
    params = FormParams(1, 2, 1, 1)
    tail = ev.I_tail(preset("zeta"), params, P30)
    with mp.workdps(50):
        assert close(tail.value, 48 * mp.zeta(2) - mp.mpf(315) / 4)
    assert mp.nstr(tail.value, 8) == "0.20683521"


def test_tail_against_nsum():
    params = FormParams(1, 3, 1, 2)
    rep = build_P(params)
    with mp.workdps(40):
        def term(k):
            k = int(k)
            p = eval_P_exact(rep, k)
            return mp.mpf(p.numerator) / p.denominator
        expected = mp.nsum(term, [7, mp.inf])
    assert close(ev.I_tail(preset("zeta"), params, P30).value, expected, 25)


@pytest.mark.parametrize("name", ["zeta", "chi3", "chi4", "chi5"])
@pytest.mark.parametrize("a, b, n", [(4, 1, 2), (5, 2, 3)])
def test_cross_check(name, a, b, n):
    series = preset(name)
    report = ev.cross_check(series, FormParams(series.d, a, b, n), P30)
    assert report.passed, report.to_dict()
    assert set(report.to_dict()) == {"series", "d", "a", "b", "n", "I_tail", "I_coeff", "agreement_digits",
                                     "truncation_bound"}


def test_extra_terms_change_nothing():
    params = FormParams(3, 5, 1, 3)
    base = ev.I_tail(preset("chi3"), params, P30)
    more = ev.I_tail(preset("chi3"), params, P30, extra_terms=8)
    assert abs(base.value - more.value) <= base.bound + more.bound


def test_period_mismatch():
    with pytest.raises(ValueError):
        ev.I_tail(preset("chi4"), FormParams(1, 2, 1, 1))
    _, coeffs = construct(FormParams(1, 2, 1, 1))
    with pytest.raises(ValueError):
        ev.I_from_coeffs(preset("chi3"), coeffs)


def test_rate_empirical_decreases_in_error():
    rows = ev.rate_empirical(preset("zeta"), FormParams(1, 9, 1, 1), [5, 10, 20], P30)
    values = [v for _, v in rows]
    assert all(v < 0 for v in values)
    assert values[0] < values[1] < values[2]
    with pytest.raises(ValueError):
        ev.rate_empirical(preset("zeta"), FormParams(1, 9, 1, 1), [5, 5])


def test_agreement_digits():
    assert ev.agreement_digits(mp.mpf(1), mp.mpf(1), 40) == 40
    assert ev.agreement_digits(mp.mpf("1.0001"), mp.mpf(1), 40) == 4
