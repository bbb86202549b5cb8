"""Saddle-point data for the contour integrals J_lambda.

All functions take a :class:`SaddleContext` fixing (d, a, b) and a working
precision.  Branch contract for the logarithms, with r = (d+2b)/d:

* log(t+r), log(t-1), log(t+1) are principal (Re t > 1 keeps them off
  their cuts);
* log(r-t) has argument 0 on (1, r), lies in [-pi, 0] for Im t >= 0 and
  equals log|r-t| - pi*i on the real half-line t > r; for Im t < 0 it is
  the mirror image, so f(conj t) = conj f(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import mpmath as mp

from .evaluation import DomainError
from .series import PeriodicSeries

TINY_RHO = 1e-8


class SolverError(ArithmeticError):
    pass


def _rho_log_estimate(r: float, R: float) -> Optional[float]:
    """log(rho) from the fixed point rho = (2r+rho) ((r-1+rho)/(r+1+rho))^R, in floats."""
    L = math.log(2.5 * r) - R / r
    for _ in range(200):
        rho = math.exp(L)
        new = math.log(2 * r + rho) - R * (math.log(r + 1 + rho) - math.log(r - 1 + rho))
        if not math.isfinite(new):
            return None
        if abs(new - L) < 1e-12:
            return new
        L = new
    return None


@dataclass(frozen=True)
class SaddleContext:
    d: int
    a: int
    b: int
    digits: int = 30
    dps: int = field(init=False)

    def __post_init__(self):
        if self.d < 1 or self.b < 1 or self.a < 2 * self.b:
            raise ValueError(f"invalid parameters d={self.d}, a={self.a}, b={self.b}")
        r = (self.d + 2 * self.b) / self.d
        R = (self.a + self.d) / self.d
        log_rho = _rho_log_estimate(r, R)
        extra = 0 if log_rho is None else max(0, math.ceil(-log_rho / math.log(10)))
        object.__setattr__(self, "dps", self.digits + 15 + extra + math.ceil(math.log10(r)))

    @property
    def r_exact(self) -> Fraction:
        return Fraction(self.d + 2 * self.b, self.d)

    @property
    def R_exact(self) -> Fraction:
        return Fraction(self.a + self.d, self.d)

    @property
    def r(self):
        return mp.mpf(self.d + 2 * self.b) / self.d

    @property
    def R(self):
        return mp.mpf(self.a + self.d) / self.d

    def analytic_rho_bound(self):
        with mp.workdps(self.dps):
            return 5 * self.r / (2 * mp.exp(self.R / self.r))


# -- branch-aware elementary functions ------------------------------------------

def _logs(ctx: SaddleContext, t):
    t = mp.mpc(t)
    r = ctx.r
    if t.real <= 1:
        raise DomainError(f"t = {t} outside Re t > 1")
    w = r - t
    if w == 0:
        raise DomainError("t = r is a branch point")
    if w.imag == 0 and w.real < 0:
        log_w = mp.mpc(mp.log(-w.real), -mp.pi)
    else:
        log_w = mp.log(w)
    return t, mp.log(t + r), log_w, mp.log(t - 1), mp.log(t + 1)


def f_eval(ctx: SaddleContext, t):
    with mp.workdps(ctx.dps):
        t, l1, l2, l3, l4 = _logs(ctx, t)
        r = ctx.r
        return ctx.d * ((t + r) * l1 + (r - t) * l2) + (ctx.a + ctx.d) * ((t - 1) * l3 - (t + 1) * l4)


def fprime_eval(ctx: SaddleContext, t):
    with mp.workdps(ctx.dps):
        t, l1, l2, l3, l4 = _logs(ctx, t)
        return ctx.d * (l1 - l2) + (ctx.a + ctx.d) * (l3 - l4)


def fsecond_eval(ctx: SaddleContext, t):
    with mp.workdps(ctx.dps):
        t, *_ = _logs(ctx, t)
        r = ctx.r
        return ctx.d * (1 / (t + r) + 1 / (r - t)) + (ctx.a + ctx.d) * (1 / (t - 1) - 1 / (t + 1))


def g_eval(ctx: SaddleContext, t):
    with mp.workdps(ctx.dps):
        t, l1, l2, l3, l4 = _logs(ctx, t)
        return mp.exp((l1 + l2) / 2 - mp.mpf(ctx.a - 1) / 2 * (l3 + l4))


def log_g_eval(ctx: SaddleContext, t):
    """The half-integer log combination whose exponential is g (branch-consistent arg g)."""
    with mp.workdps(ctx.dps):
        t, l1, l2, l3, l4 = _logs(ctx, t)
        return (l1 + l2) / 2 - mp.mpf(ctx.a - 1) / 2 * (l3 + l4)


def h_eval(ctx: SaddleContext, t):
    with mp.workdps(ctx.dps):
        t, l1, l2, l3, l4 = _logs(ctx, t)
        return ctx.d * ctx.r * (l1 + l2) - (ctx.a + ctx.d) * (l3 + l4)


def phi_log_abs(ctx: SaddleContext, n: int):
    """log|phi(n)|, the prefactor relating P(dnt)/sin(dnt pi) to e^{n f} g."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d, a, b = ctx.d, ctx.a, ctx.b
    with mp.workdps(ctx.dps):
        n_ = mp.mpf(n)
        return (mp.log(n_ / 2) + (2 * (a - 2 * b) * n + 1 + a - 2 * b) * mp.log(2)
                + mp.mpf(a - 2 * b) / 2 * mp.log(mp.pi) + (4 * b * n + 2 - a) * mp.log(d)
                + mp.mpf(4 - a - 2 * b) / 2 * mp.log(n_))


# -- root finding -------------------------------------------------------------

def _bisect(fun, lo, hi, tol, geometric=False, maxiter=2000):
    """Root of fun on [lo, hi] given fun(lo) and fun(hi) of opposite sign."""
    f_lo = fun(lo)
    f_hi = fun(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise SolverError(f"no sign change on [{mp.nstr(lo, 8)}, {mp.nstr(hi, 8)}]")
    for _ in range(maxiter):
        if hi - lo <= tol:
            break
        mid = mp.sqrt(lo * hi) if geometric and lo > 0 and hi > 4 * lo else (lo + hi) / 2
        f_mid = fun(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return (lo + hi) / 2


def _newton(ctx: SaddleContext, t, target, maxiter=60):
    """Polish a root of f'(t) = target."""
    with mp.workdps(ctx.dps):
        t = mp.mpc(t)
        tiny = mp.mpf(10) ** (-(ctx.dps - 4))
        for _ in range(maxiter):
            step = (fprime_eval(ctx, t) - target) / fsecond_eval(ctx, t)
            t_new = t - step
            if t_new.real <= 1:
                break
            t = t_new
            if abs(step) <= tiny * abs(t):
                break
        return t


def find_x0(ctx: SaddleContext, tol=1e-12):
    """The real root of f' in (1, r); Re f' runs from -inf at 1 to +inf at r."""
    with mp.workdps(ctx.dps):
        r = ctx.r

        def F(u):  # u = r - x
            return fprime_eval(ctx, r - u).real

        u_lo = mp.mpf(ctx.analytic_rho_bound()) * mp.mpf(10) ** -3
        while F(u_lo) <= 0:
            u_lo /= 1000
        u_hi = (r - 1) / 2
        while F(u_hi) >= 0:
            u_hi = (u_hi + r - 1) / 2
        u = _bisect(F, u_lo, u_hi, mp.mpf(tol) * u_lo * mp.mpf(10) ** -3, geometric=True)
        x = _newton(ctx, r - u, 0).real
        return x


def _rho_fixed_point(ctx: SaddleContext, tol):
    with mp.workdps(ctx.dps):
        r, R = ctx.r, ctx.R
        eps = ctx.analytic_rho_bound()
        tiny = max(mp.mpf(tol), mp.mpf(10) ** (-(ctx.dps - 5)))
        for _ in range(10000):
            new = mp.exp(mp.log(2 * r + eps) - R * mp.log((r + 1 + eps) / (r - 1 + eps)))
            if abs(new - eps) <= tiny * new:
                return new
            eps = new
        raise SolverError("rho fixed point did not converge")


def _rho_bisection(ctx: SaddleContext, tol):
    with mp.workdps(ctx.dps):
        r = ctx.r

        def F(u):
            return fprime_eval(ctx, r + u).real

        hi = (r - 1) / 2
        while F(hi) >= 0:
            hi *= 2
        lo = hi / 2
        while F(lo) <= 0:
            lo /= 2
        return _bisect(F, lo, hi, mp.mpf(tol) * lo, geometric=True)


@dataclass
class GeometryReport:
    x0: object
    x1: object
    rho: object
    analytic_rho_bound: object
    method: str
    curve: list = field(default_factory=list)  # (x, y_x) samples

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "x0": mp.nstr(self.x0, digits),
            "x1": mp.nstr(self.x1, digits),
            "rho": mp.nstr(self.rho, digits),
            "analytic_rho_bound": mp.nstr(self.analytic_rho_bound, digits),
            "method": self.method,
            "curve": [[mp.nstr(x, digits), mp.nstr(y, digits)] for x, y in self.curve],
        }


@lru_cache(maxsize=256)
def _geometry(ctx: SaddleContext, tol: float, method: Optional[str]) -> GeometryReport:
    if ctx.R_exact <= ctx.r_exact:
        # a = 2b: Re f'(x) ~ 2(r - R)/x never turns negative on (r, inf)
        raise SolverError("x1 does not exist for a = 2b (R = r)")
    bound = ctx.analytic_rho_bound()
    if method is None:
        method = "bisection" if bound >= TINY_RHO else "fixed_point"
    with mp.workdps(ctx.dps):
        if method == "bisection":
            rho = _rho_bisection(ctx, tol)
        elif method == "fixed_point":
            rho = _rho_fixed_point(ctx, tol)
        else:
            raise ValueError(f"unknown method {method!r}")
        # polish on Re f'(r + u) = 0 with u kept separate from r
        r = ctx.r
        for _ in range(60):
            val = fprime_eval(ctx, r + rho).real
            der = fsecond_eval(ctx, r + rho).real
            step = val / der
            rho -= step
            if abs(step) <= mp.mpf(10) ** (-(ctx.dps - 4)) * rho:
                break
        x0 = find_x0(ctx, tol)
        return GeometryReport(x0, r + rho, rho, bound, method)


def find_x1_rho(ctx: SaddleContext, tol=1e-12, method: Optional[str] = None, curve_samples: int = 0) -> GeometryReport:
    """x1 > r with f'(x1) = d pi i, and rho = x1 - r.

    Bisection on (r, r + (r-1)/2] when the analytic bound 5r/(2 e^{R/r}) is
    at least 1e-8, otherwise the log-space fixed point for rho.
    """
    report = _geometry(ctx, float(tol), method)
    if curve_samples:
        report = GeometryReport(report.x0, report.x1, report.rho, report.analytic_rho_bound, report.method)
        with mp.workdps(ctx.dps):
            for i in range(curve_samples + 1):
                x = report.x0 + (report.x1 - report.x0) * i / curve_samples
                report.curve.append((x, _y_of_x(ctx, x, report.rho)))
    return report


def _y_of_x(ctx: SaddleContext, x, rho, rel=None):
    """The y >= 0 where Re f'(x + iy) changes sign from + to -, to relative accuracy ``rel``."""
    rel = mp.mpf(10) ** -(ctx.dps - 10) if rel is None else mp.mpf(rel)
    with mp.workdps(ctx.dps):
        def F(y):
            return fprime_eval(ctx, mp.mpc(x, y)).real

        if F(mp.mpf(0)) <= 0 if x != ctx.r else False:
            return mp.mpf(0)
        hi = max(rho, mp.mpf(10) ** (-(ctx.dps // 2)))
        while F(hi) >= 0:
            hi *= 2
        lo = hi
        while lo > 0 and F(lo) < 0:
            lo /= 2
            if lo < mp.mpf(10) ** (-(ctx.dps - 5)):
                lo = mp.mpf(0)
                break
        if lo == 0:
            return _bisect(F, mp.mpf(0) if x != ctx.r else hi * mp.mpf(10) ** -(ctx.dps // 2), hi, hi * rel)
        return _bisect(F, lo, hi, hi * rel)


@dataclass
class SaddlePoint:
    lam: int
    t: object
    eps: object
    h: object
    fpp: object
    log_g: object
    residual: object
    method: str
    multiple_root_suspected: bool = False

    @property
    def g(self):
        return mp.exp(self.log_g)

    def arg_fpp(self):
        """arg f'' normalised so that (pi - arg f'')/2 lies in [-pi/4, 3pi/4]."""
        theta = mp.arg(self.fpp)
        if theta < -mp.pi / 2:
            theta += 2 * mp.pi
        return theta

    def psi(self, n: int):
        """Phase of the leading saddle contribution to J_lambda at index n."""
        return (mp.pi - self.arg_fpp()) / 2 + self.log_g.imag + n * self.h.imag

    def to_dict(self, digits: int = 20) -> dict:
        def c(z):
            z = mp.mpc(z)
            return [mp.nstr(z.real, digits), mp.nstr(z.imag, digits)]

        return {
            "lambda": self.lam,
            "t": c(self.t),
            "eps": c(self.eps),
            "h": c(self.h),
            "fpp": c(self.fpp),
            "g": c(self.g),
            "residual": mp.nstr(self.residual, 5),
            "method": self.method,
            "multiple_root_suspected": self.multiple_root_suspected,
        }


def _make_point(ctx, lam, t, method, suspect=False) -> SaddlePoint:
    with mp.workdps(ctx.dps):
        t = mp.mpc(t)
        residual = abs(fprime_eval(ctx, t) - lam * mp.pi * 1j)
        return SaddlePoint(lam, t, ctx.r - t, h_eval(ctx, t), fsecond_eval(ctx, t), log_g_eval(ctx, t),
                           residual, method, suspect)


def _eps_fixed_point(ctx: SaddleContext, lam: int):
    """eps = r - t from log eps = log(2r - eps) + R log((r-1-eps)/(r+1-eps)) - lam pi i/d."""
    with mp.workdps(ctx.dps):
        r, R = ctx.r, ctx.R
        shift = mp.mpc(0, -lam * mp.pi / ctx.d)
        eps = 2 * r * ((r - 1) / (r + 1)) ** R * mp.exp(shift)
        tiny = mp.mpf(10) ** (-(ctx.dps - 5))
        for _ in range(10000):
            new = mp.exp(mp.log(2 * r - eps) + R * (mp.log(r - 1 - eps) - mp.log(r + 1 - eps)) + shift)
            if abs(new - eps) <= tiny * abs(new):
                return new
            eps = new
        raise SolverError("saddle fixed point did not converge")


def find_t_lambda(ctx: SaddleContext, lam: int, tol=1e-12) -> SaddlePoint:
    """A solution of f'(t) = lam pi i with Re t > 1, Im t >= 0.

    lam = 0 and lam = d give x0 and x1.  In between, follow the curve
    y_x (where Re f' vanishes) from x0 to x1 and bisect on Im f' along it;
    for rho < 1e-8 use the log-space fixed point for eps = r - t instead.
    Newton polishes either result.
    """
    if not 0 <= lam <= ctx.d:
        raise ValueError(f"lambda must lie in [0, {ctx.d}], got {lam}")
    geo = find_x1_rho(ctx, tol)
    if lam == 0:
        return _make_point(ctx, 0, geo.x0, "bisection")
    if lam == ctx.d:
        return _make_point(ctx, lam, geo.x1, geo.method)
    with mp.workdps(ctx.dps):
        target = lam * mp.pi
        if geo.rho < TINY_RHO:
            eps = _eps_fixed_point(ctx, lam)
            t = _newton(ctx, ctx.r - eps, target * 1j)
            return _make_point(ctx, lam, t, "fixed_point")

        def G(x):
            y = _y_of_x(ctx, x, geo.rho, 1e-12)
            return fprime_eval(ctx, mp.mpc(x, y)).imag - target

        # coarse scan for the bracket; more than one crossing is flagged
        grid = [geo.x0 + (geo.x1 - geo.x0) * i / 32 for i in range(33)]
        values = [-target] + [G(x) for x in grid[1:-1]] + [(ctx.d - lam) * mp.pi]
        crossings = [i for i in range(32) if (values[i] < 0) != (values[i + 1] < 0)]
        suspect = len(crossings) != 1
        i = crossings[0]
        x = _bisect(G, grid[i], grid[i + 1], geo.rho * mp.mpf(10) ** -10)
        t = _newton(ctx, mp.mpc(x, _y_of_x(ctx, x, geo.rho, 1e-12)), target * 1j)
        return _make_point(ctx, lam, t, "curve_bisection", suspect)


# -- spectral data ------------------------------------------------------------

@lru_cache(maxsize=None)
def _cyclotomic(N: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the N-th cyclotomic polynomial."""
    poly = [-1] + [0] * (N - 1) + [1]
    for k in range(1, N):
        if N % k == 0:
            poly = _polydiv_exact(poly, list(_cyclotomic(k)))
    return tuple(poly)


def _polydiv_exact(num: list, den: list) -> list:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        coef = num[i + len(den) - 1] // den[-1]
        out[i] = coef
        for j, c in enumerate(den):
            num[i + j] -= coef * c
    assert not any(num), "inexact cyclotomic division"
    return out


def _vanishes_on_root_of_unity(coeffs: list, N: int) -> bool:
    """Whether sum_k coeffs[k] zeta_N^k == 0 for a primitive N-th root of unity."""
    rem = [Fraction(c) for c in coeffs]
    phi = _cyclotomic(N)
    deg = len(phi) - 1
    for i in range(len(rem) - 1, deg - 1, -1):
        c = rem[i]
        if c:
            for j, p in enumerate(phi):
                rem[i - deg + j] -= c * p
    return not any(rem[:deg])


@dataclass
class SpectralData:
    b: dict  # lambda -> mpc
    exact_zero: dict  # lambda -> bool
    lambda0: int

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "lambda0": self.lambda0,
            "b": {str(k): [mp.nstr(v.real, digits), mp.nstr(v.imag, digits)] for k, v in sorted(self.b.items())},
            "zero": {str(k): v for k, v in sorted(self.exact_zero.items())},
        }


def b_lambdas(series: PeriodicSeries, digits: int = 30) -> SpectralData:
    """b_lambda = sum_m (-1)^m a_m e^{i m lambda pi/d}, halved at lambda = +-d.

    Zeros are decided exactly: each b_lambda is a rational combination of
    2d-th roots of unity, reduced modulo the cyclotomic polynomial.
    """
    if not series.is_real:
        raise ValueError("b_lambdas needs a real-coefficient series; apply realify first")
    d = series.d
    tol = mp.mpf(10) ** (-(digits - 5))
    b, zero = {}, {}
    with mp.workdps(digits + 10):
        for lam in range(-d, d + 1, 2):
            poly = [Fraction(0)] * (2 * d)
            value = mp.mpc(0)
            for m, c in enumerate(series.coeffs_re, 1):
                poly[(m * (lam + d)) % (2 * d)] += c
                value += (-1) ** m * mp.mpf(c.numerator) / c.denominator * mp.expjpi(mp.mpf(m * lam) / d)
            if abs(lam) == d:
                value /= 2
            is_zero = _vanishes_on_root_of_unity(poly, 2 * d)
            if is_zero != (abs(value) < tol):
                raise ArithmeticError(f"b_{lam}: exact and numeric zero tests disagree")
            b[lam] = mp.mpc(0) if is_zero else value
            zero[lam] = is_zero
    nonzero = [lam for lam in b if lam >= 0 and not zero[lam]]
    if not nonzero:
        raise ArithmeticError("all b_lambda vanish, impossible for a nonzero series")
    return SpectralData(b, zero, max(nonzero))


# -- rates and asymptotics ----------------------------------------------------------

@dataclass
class RatePrediction:
    value: object
    error_bound: object
    method: str
    saddle: SaddlePoint


def rate_prediction(ctx: SaddleContext, lambda0: int) -> RatePrediction:
    """Predicted lim log|I(n)|/n = 2(a-2b) log 2 + 4b log d + Re h(t_lambda0)."""
    sp = find_t_lambda(ctx, lambda0)
    d, a, b = ctx.d, ctx.a, ctx.b
    geo = find_x1_rho(ctx)
    with mp.workdps(ctx.dps):
        base = 2 * (a - 2 * b) * mp.log(2) + 4 * b * mp.log(d)
        if geo.rho < TINY_RHO:
            r, R = ctx.r, ctx.R
            main = 2 * d * r * mp.log(2 * r) + d * R * ((r - 1) * mp.log(r - 1) - (r + 1) * mp.log(r + 1))
            return RatePrediction(base + main - d * sp.eps.real, 4 * d * R / r * abs(sp.eps) ** 2, "expansion", sp)
        return RatePrediction(base + sp.h.real, mp.mpf(0), "direct", sp)


def rate_predicted(ctx: SaddleContext, lambda0: int):
    return rate_prediction(ctx, lambda0).value


def J_asymptotic(ctx: SaddleContext, lam: int, n: int):
    """(log|J_lambda(n)|, phase) from the leading saddle-point term."""
    sp = find_t_lambda(ctx, lam)
    with mp.workdps(ctx.dps):
        if abs(sp.fpp) < mp.mpf(10) ** (-(ctx.dps - 10)):
            raise SolverError("degenerate saddle: f'' vanishes")
        log_mag = n * sp.h.real + sp.log_g.real + mp.log(2 * mp.pi / (n * abs(sp.fpp))) / 2
        return log_mag, sp.psi(n)


def J_quadrature(ctx: SaddleContext, lam: int, n: int, digits: int = 20, x=None, degree: int = 24):
    """J_lambda(n) = i * int e^{n(f(t) - i lam pi t)} g(t) dy along t = x + iy.

    Fixed-degree Gauss-Legendre panels of width ~1/n near the real axis,
    widening geometrically but never beyond half a local oscillation or
    half the distance to the branch points 1 and r.  Each direction stops
    once the integrand falls below 10^-(digits+10) of its peak.
    """
    log_scale = J_asymptotic(ctx, abs(lam), n)[0] if 0 <= abs(lam) <= ctx.d else 0
    with mp.workdps(ctx.dps):
        x = (find_x0(ctx) + ctx.r) / 2 if x is None else mp.mpf(x)
        if not 1 < x < ctx.r:
            raise DomainError("the integration line needs 1 < x < r")

        def logF(y):
            t = mp.mpc(x, y)
            return n * (f_eval(ctx, t) - 1j * lam * mp.pi * t) + log_g_eval(ctx, t)

        peak = max(logF(mp.mpf(y) / 4).real for y in range(-40, 81))
        loss = max(0, int(mp.ceil((peak - log_scale) / mp.log(10))))
    dps = ctx.dps + loss + digits
    with mp.workdps(dps):
        cutoff = peak - (digits + 10) * mp.log(10)
        base = mp.mpf(1) / n
        nodes = _gauss_legendre(degree, dps)

        def F(y):
            return mp.exp(logF(y))

        total = mp.mpc(0)
        for direction in (1, -1):
            y = mp.mpf(0)
            while True:
                t = mp.mpc(x, y)
                rate = n * abs(fprime_eval(ctx, t) - 1j * lam * mp.pi) + 1
                width = min(max(base, abs(y) / 8), mp.pi / rate, abs(t - ctx.r) / 2, abs(t - 1) / 2)
                a_, b_ = (y, y + width) if direction > 0 else (y - width, y)
                half, mid = (b_ - a_) / 2, (a_ + b_) / 2
                total += half * mp.fsum(w * F(mid + half * u) for u, w in nodes)
                y = b_ if direction > 0 else a_
                if logF(y).real < cutoff and (direction < 0 or y > 1):
                    break
        return 1j * total


@lru_cache(maxsize=16)
def _gauss_legendre(degree: int, dps: int):
    """Nodes and weights on [-1, 1] by Newton on the Legendre recurrence."""
    with mp.workdps(dps + 10):
        out = []
        for k in range(1, degree + 1):
            u = mp.cos(mp.pi * (k - mp.mpf(1) / 4) / (degree + mp.mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mp.mpf(1), u
                for m in range(2, degree + 1):
                    p0, p1 = p1, ((2 * m - 1) * u * p1 - (m - 1) * p0) / m
                dp = degree * (u * p1 - p0) / (u * u - 1)
                step = p1 / dp
                u -= step
                if abs(step) < mp.mpf(10) ** (-(dps + 5)):
                    break
            out.append((u, 2 / ((1 - u * u) * dp * dp)))
        return tuple(out)


@dataclass
class SubsequenceReport:
    lambda0: int
    ns: list
    w: Optional[int]
    gap_bound: Optional[int]

    @property
    def max_gap(self) -> int:
        if len(self.ns) < 2:
            return 0
        return max(b - a for a, b in zip(self.ns, self.ns[1:]))


def subsequence_select(series: PeriodicSeries, ctx: SaddleContext, n_max: int, digits: int = 30) -> SubsequenceReport:
    """Indices n where arg b_lambda0 + psi(n) lies in [pi/6, 5pi/6] mod pi.

    Only needed for 1 <= lambda0 <= d-1; otherwise every n qualifies.
    """
    spec = b_lambdas(series, digits)
    lam = spec.lambda0
    if not 1 <= lam <= ctx.d - 1:
        return SubsequenceReport(lam, list(range(1, n_max + 1)), None, None)
    sp = find_t_lambda(ctx, lam)
    with mp.workdps(ctx.dps):
        pi = mp.pi
        arg_b = mp.arg(spec.b[lam])
        ns = []
        for n in range(1, n_max + 1):
            theta = mp.fmod(arg_b + sp.psi(n), pi)
            if theta < 0:
                theta += pi
            if pi / 6 <= theta <= 5 * pi / 6:
                ns.append(n)
        w = None
        for k in range(1, 100000):
            theta = mp.fmod(k * sp.h.imag, pi)
            if theta < 0:
                theta += pi
            if pi / 3 <= theta <= 2 * pi / 3:
                w = k
                break
    return SubsequenceReport(lam, ns, w, None if w is None else 1 + w)


@dataclass
class LemmaReport:
    points: list
    checks: dict = field(default_factory=dict)  # name -> (passed, detail)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks.values())


def lemma_suite(ctx: SaddleContext, tol=1e-12) -> LemmaReport:
    """Numerical checks of the saddle-point lemmas for one parameter set.

    * Re h(t_lambda) < Re h(t_{lambda+2});
    * Im h(t_lambda) stays away from pi*Z for 1 <= lambda <= d-1, inside
      (-r lambda pi, -r lambda pi + pi/d);
    * arg eps_lambda within pi/(2d) of -lambda pi/d;
    * |t_lambda - r| <= rho and the solver residuals;
    * Re f' < 0 at sample points outside the rho-disc.
    """
    d = ctx.d
    geo = find_x1_rho(ctx, tol)
    points = [find_t_lambda(ctx, lam, tol) for lam in range(d + 1)]
    report = LemmaReport(points)
    with mp.workdps(ctx.dps):
        pi, r, rho = mp.pi, ctx.r, geo.rho
        bad = [lam for lam in range(d - 1) if not points[lam].h.real < points[lam + 2].h.real]
        report.checks["re_h_increasing"] = (not bad, f"violations at lambda={bad}" if bad else "")

        # Im h sits about d|eps| from -r lam pi, so the margin scales with eps
        worst = None
        for sp in points[1:d]:
            im = sp.h.imag
            dist = abs(im - pi * mp.nint(im / pi))
            window = -r * sp.lam * pi < im < -r * sp.lam * pi + pi / d
            if dist <= 10 * tol * min(1, d * abs(sp.eps)) or not window:
                worst = sp.lam
        report.checks["im_h_off_pi_z"] = (worst is None, f"lambda={worst}" if worst is not None else "")

        bad = []
        for sp in points:
            arg_eps = (mp.log(sp.eps) if sp.lam < d else mp.mpc(mp.log(rho), -pi)).imag
            centre = -sp.lam * pi / d
            if abs(arg_eps - centre) > pi / (2 * d) * (1 + mp.mpf(10) ** -20):
                bad.append(sp.lam)
        report.checks["arg_eps_window"] = (not bad, f"lambda={bad}" if bad else "")

        slack = rho * mp.mpf(10) ** -(ctx.digits)
        bad = [sp.lam for sp in points if abs(sp.t - r) > rho + slack]
        report.checks["within_rho_disc"] = (not bad, f"lambda={bad}" if bad else "")

        bad = [sp.lam for sp in points if sp.residual >= tol]
        report.checks["residuals"] = (not bad, f"lambda={bad}" if bad else "")

        bad = []
        for scale in (mp.mpf("1.001"), mp.mpf(2), mp.mpf(10), mp.mpf(1000)):
            s = rho * scale
            for k in range(13):
                theta = pi * k / 12
                t = r + s * mp.expj(theta)
                if t.real <= 1 or t.imag < 0:
                    continue
                if k == 12 or k == 0:
                    t = mp.mpc(t.real, 0)
                if fprime_eval(ctx, t).real >= 0:
                    bad.append((float(scale), k))
        for t in (mp.mpc((1 + r - rho) / 2, 0), mp.mpc(r, 1), mp.mpc(2 * r, r), mp.mpc(r + 1, 0)):
            if t.real > 1 and abs(t - r) > rho and fprime_eval(ctx, t).real >= 0:
                bad.append(mp.nstr(t, 5))
        report.checks["re_fprime_negative_outside"] = (not bad, f"at {bad}" if bad else "")
    return report
