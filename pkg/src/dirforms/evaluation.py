"""Arbitrary-precision evaluation: Hurwitz and partial zeta values, L(j), and
the two independent routes to the linear form I(n).

``I_tail`` sums P(k) over the integers directly; ``I_from_coeffs`` combines
the exact coefficients A_j, B_m with the values L(j).  Agreement between the
two is the end-to-end check on the construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import mpmath as mp

from .forms import FormParams, LinearFormCoeffs, build_P, growth_bound
from .series import PeriodicSeries


class DomainError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    """Recomputation at higher precision disagreed with the first result."""


@dataclass(frozen=True)
class PrecisionSpec:
    digits: int = 30
    guard: int = 20

    def __post_init__(self):
        if self.digits < 10:
            raise ValueError(f"digits must be >= 10, got {self.digits}")
        if self.guard < 10:
            raise ValueError(f"guard must be >= 10, got {self.guard}")

    @property
    def working(self) -> int:
        return self.digits + self.guard


def _mpq(x: Fraction):
    return mp.mpf(x.numerator) / x.denominator


@lru_cache(maxsize=None)
def _bernoulli(k: int) -> Fraction:
    p, q = mp.bernfrac(k)
    return Fraction(int(p), int(q))


# -- Hurwitz zeta by Euler-Maclaurin -------------------------------------------

def _hurwitz_em(s: int, x, dps: int):
    """zeta(s, x) for integer s >= 2 and real x > 0 at ``dps`` digits.

    Returns (value, remainder_bound).  The integrand (x+t)^-s is completely
    monotone, so the Euler-Maclaurin remainder is bounded by the first
    omitted correction term.
    """
    with mp.workdps(dps + 10):
        # convert here: a Fraction rounded at the caller's precision would be wrong
        x = _mpq(x) if isinstance(x, Fraction) else mp.mpf(x)
        eps = mp.mpf(10) ** (-dps - 2)
        N = max(0, math.ceil(0.4 * dps + 0.2 * s + 2 - float(x)))
        while True:
            head = mp.fsum((x + k) ** (-s) for k in range(N))
            y = x + N
            total = head + y ** (1 - s) / (s - 1) + y ** (-s) / 2
            # rising factorial s(s+1)...(s+2i-2), built incrementally
            rising = mp.mpf(s)
            ypow = y ** (-s - 1)
            y2 = y * y
            fact = mp.mpf(2)
            prev = None
            bound = None
            for i in range(1, 4 * dps + s):
                term = _mpq(_bernoulli(2 * i)) / fact * rising * ypow
                if abs(term) <= eps * abs(total):
                    bound = abs(term)
                    break
                if prev is not None and abs(term) > abs(prev):
                    break
                total += term
                prev = term
                rising *= (s + 2 * i - 1) * (s + 2 * i)
                ypow /= y2
                fact *= (2 * i + 1) * (2 * i + 2)
            if bound is not None:
                return +total, bound
            N = 2 * N + 10


def hurwitz_zeta(j: int, x, prec: PrecisionSpec = PrecisionSpec(), validate: bool = True):
    """sum_{k>=0} (k + x)^-j for integer j >= 2 and rational 0 < x <= 1."""
    if j < 2:
        raise DomainError(f"hurwitz_zeta needs j >= 2, got {j}")
    x = Fraction(x)
    if x <= 0:
        raise DomainError(f"hurwitz_zeta needs x > 0, got {x}")
    value, _ = _hurwitz_em(j, x, prec.working)
    if validate:
        check, _ = _hurwitz_em(j, x, 2 * prec.working)
        with mp.workdps(2 * prec.working):
            if abs(value - check) > mp.mpf(10) ** (-prec.digits) * abs(check):
                raise PrecisionError(f"hurwitz_zeta({j}, {x}) unstable across precisions")
    with mp.workdps(prec.working):
        return +value


def zeta_m(j: int, m: int, d: int, prec: PrecisionSpec = PrecisionSpec(), validate: bool = True):
    """Partial zeta sum_{k = m mod d} k^-j = d^-j zeta(j, m/d)."""
    if j < 2:
        raise DomainError(f"zeta_m needs j >= 2, got {j}")
    if not 1 <= m <= d:
        raise DomainError(f"need 1 <= m <= d, got m={m}, d={d}")
    h = hurwitz_zeta(j, Fraction(m, d), prec, validate)
    with mp.workdps(prec.working):
        return h / mp.mpf(d) ** j


def _digamma_em(x, dps: int):
    """psi(x) for real x > 0: shift up, then the Bernoulli asymptotic series."""
    with mp.workdps(dps + 10):
        x = mp.mpf(x)
        eps = mp.mpf(10) ** (-dps - 2)
        N = max(0, math.ceil(0.4 * dps + 2 - float(x)))
        head = mp.fsum(1 / (x + k) for k in range(N))
        y = x + N
        total = mp.log(y) - 1 / (2 * y)
        y2 = y * y
        ypow = y2
        for i in range(1, 4 * dps):
            term = _mpq(_bernoulli(2 * i)) / (2 * i * ypow)
            if abs(term) <= eps:
                break
            total -= term
            ypow *= y2
        return total - head


def _coeff_values(series: PeriodicSeries):
    """a_1..a_d as mpf (real series) or mpc."""
    if series.is_real:
        return [_mpq(c) for c in series.coeffs_re]
    return [mp.mpc(_mpq(cr), _mpq(ci)) for cr, ci in zip(series.coeffs_re, series.coeffs_im)]


def L_value(series: PeriodicSeries, j: int, prec: PrecisionSpec = PrecisionSpec(), validate: bool = True):
    """L(j) = sum_m a_m zeta_m(j).

    j = 1 is accepted only when the coefficients sum to zero over a period;
    the period-grouped series then equals -(1/d) sum_m a_m psi(m/d).
    """
    d = series.d
    if j == 1:
        s_re, s_im = series.period_sum()
        if s_re or s_im:
            raise DomainError("L(1) diverges: coefficients do not sum to zero over a period")
        with mp.workdps(prec.working):
            coeffs = _coeff_values(series)
            psis = [_digamma_em(mp.mpf(m) / d, prec.working) for m in range(1, d + 1)]
            value = -mp.fsum(c * p for c, p in zip(coeffs, psis)) / d
            if validate:
                again = -mp.fsum(c * _digamma_em(mp.mpf(m) / d, 2 * prec.working) for m, c in enumerate(coeffs, 1)) / d
                if abs(value - again) > mp.mpf(10) ** (-prec.digits) * max(1, abs(value)):
                    raise PrecisionError("L(1) unstable across precisions")
            return +value
    if j < 2:
        raise DomainError(f"L(j) needs j >= 1, got {j}")
    with mp.workdps(prec.working):
        coeffs = _coeff_values(series)
        total = 0
        for m, c in enumerate(coeffs, 1):
            if c:
                total += c * zeta_m(j, m, d, prec, validate)
        return +total


# -- the tail sum I = sum_{k > (d+2b)n} a_k P(k) --------------------------------

@dataclass
class TailSum:
    value: object
    bound: object
    first_k: int
    direct_terms: int
    expansion_order: int
    dps: int


def _P_at_integer(zeros, poles, a: int, scalar: int, k: int):
    num = scalar
    for z in zeros:
        num *= k - z
    den = 1
    for p in poles:
        den *= k - p
    return mp.mpf(num) / mp.mpf(den**a)


def _infinity_expansion(params: FormParams, order: int, majorant: bool = False):
    """Taylor coefficients in v of G(v) where P(t) = t^-gap G(1/t^2).

    G(v) = scalar * prod_l (1 - l^2 v) / prod_{l=1..n} (1 - d^2 l^2 v)^a.
    With ``majorant`` the numerator signs are flipped to +, giving a
    series with nonnegative coefficients that dominates G termwise.
    """
    d, a, b, n = params.d, params.a, params.b, params.n
    sign = 1 if majorant else -1
    coeffs = [mp.mpf(0)] * (order + 1)
    coeffs[0] = mp.mpf(1)
    for l in range(d * n + 1, (d + 2 * b) * n + 1):
        c = sign * l * l
        for i in range(order, 0, -1):
            coeffs[i] += c * coeffs[i - 1]
    for l in range(1, n + 1):
        c = d * d * l * l
        for _ in range(a):
            for i in range(1, order + 1):
                coeffs[i] += c * coeffs[i - 1]
    scalar = mp.mpf(build_P(params).scalar)
    return [scalar * c for c in coeffs]


def _majorant_at(params: FormParams, v):
    d, a, b, n = params.d, params.a, params.b, params.n
    num = mp.mpf(build_P(params).scalar)
    for l in range(d * n + 1, (d + 2 * b) * n + 1):
        num *= 1 + l * l * v
    den = mp.mpf(1)
    for l in range(1, n + 1):
        den *= (1 - d * d * l * l * v) ** a
    return num / den


def _tail_once(series, params, digits: int, dps: int, relative: bool, extra_terms: int):
    d, a, b, n = params.d, params.a, params.b, params.n
    rep = build_P(params)
    gap = rep.degree_gap
    coeffs = _coeff_values(series)
    start = (d + 2 * b) * n + 1
    K = 4 * (d + 2 * b) * n
    with mp.workdps(dps):
        direct = 0
        abs_direct = mp.mpf(0)
        for k in range(start, K):
            c = coeffs[(k - 1) % d]
            if not c:
                continue
            term = c * _P_at_integer(rep.numerator_zeros, rep.pole_locations, a, rep.scalar, k)
            direct += term
            abs_direct += abs(term)

        # classes k = m (mod d), k >= K: first member K_m
        first = {m: K + ((m - K) % d) for m in range(1, d + 1)}
        rho_v = mp.mpf(1) / (2 * d * d * n * n)
        q = (mp.mpf(1) / (K * K)) / rho_v
        g_hat = _majorant_at(params, rho_v)
        k_sum = mp.mpf(K) ** (-gap) + mp.mpf(K) ** (1 - gap) / (gap - 1)
        amax = max(abs(c) for c in coeffs)

        def remainder(M):
            return amax * g_hat * q ** (M + 1) / (1 - q) * k_sum

        def tail_part(order):
            e = _infinity_expansion(params, order)
            out = 0
            out_abs = mp.mpf(0)
            for m, c in enumerate(coeffs, 1):
                if not c:
                    continue
                x = mp.mpf(first[m]) / d
                acc = mp.mpf(0)
                for i, ei in enumerate(e):
                    s = gap + 2 * i
                    z, _ = _hurwitz_em(s, x, dps)
                    acc += ei * z / mp.mpf(d) ** s
                out += c * acc
                out_abs += abs(c) * abs(acc)
            return out, out_abs

        lead, lead_abs = tail_part(0)
        estimate = abs(direct + lead)
        tol = mp.mpf(10) ** (-digits)
        scale = estimate if relative and estimate else max(mp.mpf(1), estimate)
        M = 0
        while remainder(M) > tol * scale:
            M += 1
        M += extra_terms
        tail, tail_abs = tail_part(M)
        value = direct + tail
        bound = remainder(M)
        if relative and value and bound > tol * abs(value):
            M2 = M
            while remainder(M2) > tol * abs(value):
                M2 += 1
            tail, tail_abs = tail_part(M2)
            value, bound, M = direct + tail, remainder(M2), M2
        magnitude = abs_direct + tail_abs
        first_k = next(k for k in range(start, start + d) if coeffs[(k - 1) % d])
        return TailSum(+value, +bound, first_k, K - start, M, dps), magnitude


def I_tail(series: PeriodicSeries, params: FormParams, prec: PrecisionSpec = PrecisionSpec(),
           relative: bool = True, extra_terms: int = 0) -> TailSum:
    """I(n) summed over the integers k > (d+2b)n (the zeros of P below are skipped).

    Terms up to K = 4(d+2b)n are exact products rounded once; beyond K, P is
    replaced by its expansion in 1/k^2, each power summed by Hurwitz zeta.
    The truncation bound comes from a nonnegative majorant of that expansion
    and is met at 10^-(digits+guard) relative to |I| (absolute when
    ``relative`` is False, scaled by max(1, |I|)).
    """
    if series.d != params.d:
        raise ValueError(f"series period {series.d} != params.d {params.d}")
    digits = prec.working
    dps = digits + 10
    for _ in range(4):
        result, magnitude = _tail_once(series, params, digits, dps, relative, extra_terms)
        with mp.workdps(dps):
            if result.value == 0:
                return result
            lost = float(mp.log10(magnitude / abs(result.value))) if magnitude else 0.0
        if lost < 5:
            return result
        needed = digits + 10 + math.ceil(lost)
        if needed <= dps:
            return result
        dps = needed
    return result


def I_from_coeffs(series: PeriodicSeries, coeffs: LinearFormCoeffs, prec: PrecisionSpec = PrecisionSpec()):
    """sum_j A_j L(j) - sum_m B_m a_m, with extra digits budgeted against cancellation."""
    p = coeffs.params
    if series.d != p.d:
        raise ValueError(f"series period {series.d} != params.d {p.d}")
    extra = math.ceil(p.n * (2 * p.a * p.d + growth_bound(p.d, p.a, p.b)) / math.log(10))
    inner = PrecisionSpec(prec.digits + extra, prec.guard)
    with mp.workdps(inner.working):
        avals = _coeff_values(series)
        total = 0
        for j in sorted(coeffs.A):
            if coeffs.A[j]:
                total += _mpq(coeffs.A[j]) * L_value(series, j, inner, validate=False)
        for m, c in enumerate(avals, 1):
            if c and coeffs.B[m]:
                total -= _mpq(coeffs.B[m]) * c
        with mp.workdps(prec.working):
            return +total


# -- reports ----------------------------------------------------------------------

def _decimal(x, digits: int) -> str:
    if isinstance(x, mp.mpc):
        return f"{mp.nstr(x.real, digits)}{'+' if x.imag >= 0 else '-'}{mp.nstr(abs(x.imag), digits)}j"
    return mp.nstr(x, digits)


@dataclass
class EvalReport:
    params: FormParams
    label: str
    I_tail: object
    I_coeff: object
    agreement_digits: int
    truncation_bound: object
    digits: int
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.agreement_digits >= self.digits

    @property
    def n(self) -> int:
        return self.params.n

    def to_dict(self) -> dict:
        digits = self.digits + 5
        return {
            "series": self.label,
            "d": self.params.d,
            "a": self.params.a,
            "b": self.params.b,
            "n": self.params.n,
            "I_tail": _decimal(self.I_tail, digits),
            "I_coeff": _decimal(self.I_coeff, digits),
            "agreement_digits": self.agreement_digits,
            "truncation_bound": mp.nstr(self.truncation_bound, 5),
        }


def agreement_digits(x, y, cap: int) -> int:
    diff = abs(x - y)
    if diff == 0:
        return cap
    scale = max(mp.mpf(1), abs(x), abs(y))
    return min(cap, int(mp.floor(-mp.log10(diff / scale))))


def cross_check(series: PeriodicSeries, params: FormParams, prec: PrecisionSpec = PrecisionSpec(),
                coeffs: Optional[LinearFormCoeffs] = None) -> EvalReport:
    from .forms import construct

    if coeffs is None:
        _, coeffs = construct(params)
    tail = I_tail(series, params, prec)
    from_coeffs = I_from_coeffs(series, coeffs, prec)
    with mp.workdps(prec.working):
        agree = agreement_digits(tail.value, from_coeffs, prec.working)
    return EvalReport(params, series.label, tail.value, from_coeffs, agree, tail.bound, prec.digits)


def rate_empirical(series: PeriodicSeries, params: FormParams, n_list: Sequence[int],
                   prec: PrecisionSpec = PrecisionSpec()) -> list:
    """[(n, log|I(n)|/n)], with None standing in for an exactly vanishing I(n)."""
    out = []
    last = 0
    for n in n_list:
        if n <= last:
            raise ValueError("n_list must be increasing")
        last = n
        tail = I_tail(series, params.with_n(n), prec)
        with mp.workdps(prec.working):
            out.append((n, None if tail.value == 0 else mp.log(abs(tail.value)) / n))
    return out
