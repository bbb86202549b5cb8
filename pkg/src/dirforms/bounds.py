"""Lower bounds 1 + alpha/beta for the dimension of the span of L(2), ..., L(a).

beta bounds the growth of the coefficients, alpha the decay of the linear
form.  Two closed forms for alpha differ by exactly 1/3 (the slack); the
saddle-exact alpha sits between them whenever the hypothesis holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath as mp
import numpy as np

from . import saddle
from .series import PeriodicSeries

VARIANTS = ("with_slack", "no_slack", "exact")
MATCH_TOL = 5e-7

# (a, b, printed 1 + alpha/beta, printed delta) for d = 1..4
TABLES = {
    1: [(9, 1, "1.08700873", 2), (173, 11, "2.00305848", 3), (2187, 67, "3.00028164", 4),
        (21609, 379, "4.00001320", 5), (186491, 2119, "5.00000046", 6), (1476727, 11735, "6.00000012", 7)],
    2: [(88, 10, "1.00176867", 2), (89, 10, "1.00412440", 2), (4936, 187, "2.00003131", 3),
        (4937, 187, "2.00008696", 3), (159854, 2894, "3.00000007", 4), (159855, 2894, "3.00000194", 4)],
    3: [(549, 48, "1.00024059", 2), (550, 48, "1.00057135", 2), (78235, 2165, "2.00000009", 3),
        (78236, 2165, "2.00000285", 3)],
    4: [(2594, 186, "1.00003443", 2), (2595, 186, "1.00009445", 2), (990205, 21832, "2.00000005", 3),
        (990206, 21832, "2.00000023", 3)],
}


def _check(a: int, b: int, d: int) -> None:
    if d < 1 or b < 1 or a < 2 * b:
        raise ValueError(f"need d >= 1 and a >= 2b >= 2, got a={a}, b={b}, d={d}")


def beta(a: int, b: int, d: int, digits: int = 30):
    _check(a, b, d)
    with mp.workdps(digits + 10):
        return 2 * a * d + 2 * a * mp.log(2) + 4 * (b + d) * mp.log(b + d) - 4 * d * mp.log(d)


def _xlogx(x):
    return x * mp.log(x) if x else mp.mpf(0)


def alpha_closed(a: int, b: int, d: int, variant: str = "with_slack", digits: int = 30):
    """Closed-form alpha; ``with_slack`` subtracts the extra 1/3."""
    _check(a, b, d)
    if variant not in ("with_slack", "no_slack"):
        raise ValueError(f"closed variants are with_slack and no_slack, got {variant!r}")
    with mp.workdps(digits + 10):
        r = mp.mpf(d + 2 * b) / d
        R = mp.mpf(a + d) / d
        value = (d * R * (_xlogx(r + 1) - _xlogx(r - 1)) - 2 * a * (d + mp.log(2))
                 - 4 * b * (mp.log(d) - mp.log(2)) - 2 * d * r * mp.log(2 * r))
        if variant == "with_slack":
            value -= mp.mpf(1) / 3
        return value


def alpha_exact(a: int, b: int, d: int, lambda0: Optional[int] = None, digits: int = 30):
    """-(2ad + predicted rate) with the rate taken at t_lambda0 (default lambda0 = d)."""
    _check(a, b, d)
    ctx = saddle.SaddleContext(d, a, b, digits)
    lam = d if lambda0 is None else lambda0
    with mp.workdps(ctx.dps):
        return -(2 * a * d + saddle.rate_predicted(ctx, lam))


@dataclass
class HypothesisReport:
    a: int
    b: int
    d: int
    mode: str
    strict: bool
    r_ge_2: bool
    R_ge_3r: bool
    rho_used: object
    rho_source: str
    min_terms: list  # four caps, None where dropped
    passed: bool

    @property
    def cap(self):
        return min(t for t in self.min_terms if t is not None)

    def to_dict(self, digits: int = 12) -> dict:
        return {
            "mode": self.mode,
            "strict": self.strict,
            "r_ge_2": self.r_ge_2,
            "R_ge_3r": self.R_ge_3r,
            "rho_used": mp.nstr(self.rho_used, digits),
            "rho_source": self.rho_source,
            "min_terms": [None if t is None else mp.nstr(t, digits) for t in self.min_terms],
            "passed": self.passed,
        }


def hypothesis_check(a: int, b: int, d: int, mode: str = "numeric", strict: Optional[bool] = None,
                     digits: int = 30) -> HypothesisReport:
    """r >= 2, R >= 3r and rho below the four caps.

    ``analytic`` uses rho's upper bound 5r/(2e^{R/r}); ``numeric`` the solved rho.
    ``strict`` defaults to False for d = 1, where the two trigonometric caps
    support statements that are vacuous (and the last one is zero).
    """
    _check(a, b, d)
    if mode not in ("analytic", "numeric"):
        raise ValueError(f"mode must be analytic or numeric, got {mode!r}")
    if strict is None:
        strict = d != 1
    ctx = saddle.SaddleContext(d, a, b, digits)
    with mp.workdps(ctx.dps):
        r, R, pi = ctx.r, ctx.R, mp.pi
        if mode == "analytic":
            rho, source = ctx.analytic_rho_bound(), "analytic_bound"
        else:
            rho, source = saddle.find_x1_rho(ctx).rho, "numeric"
        terms = [r * pi / (10 * R * d), pi / (2 * d * d),
                 r / (4 * R) * mp.sin(pi / (2 * d)),
                 r / (38 * R) * (mp.cos(pi / (2 * d)) - mp.cos(3 * pi / (2 * d)))]
        if d == 1 and not strict:
            terms[2] = terms[3] = None
        r_ok = ctx.r_exact >= 2
        R_ok = ctx.R_exact >= 3 * ctx.r_exact
        cap = min(t for t in terms if t is not None)
        return HypothesisReport(a, b, d, mode, strict, r_ok, R_ok, rho, source, terms,
                                bool(r_ok and R_ok and rho < cap))


def nesterenko_ratio(tau1, tau2):
    den = 1 + tau1 - tau2
    if den <= 0:
        raise saddle.DomainError("need 1 + tau1 - tau2 > 0")
    return (tau1 + 1) / den


def limit_form(alpha, beta_):
    if beta_ <= 0:
        raise saddle.DomainError("beta must be positive")
    return 1 + alpha / beta_


@dataclass
class BoundReport:
    d: int
    a: int
    b: int
    variant: str
    beta: object
    alpha: dict
    value: dict
    delta_threshold: int
    lambda0: int
    hypothesis: HypothesisReport

    @property
    def rigorous(self) -> bool:
        return self.hypothesis.passed

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "d": self.d, "a": self.a, "b": self.b,
            "variant": self.variant,
            "lambda0": self.lambda0,
            "beta": mp.nstr(self.beta, digits),
            "alpha": {k: mp.nstr(v, digits) for k, v in self.alpha.items()},
            "value": {k: mp.nstr(v, digits) for k, v in self.value.items()},
            "delta_threshold": self.delta_threshold,
            "rigorous": self.rigorous,
            "hypothesis": self.hypothesis.to_dict(),
        }


def delta_bound(series: Optional[PeriodicSeries], a: int, b: int, d: int, variant: str = "with_slack",
                mode: str = "numeric", strict: Optional[bool] = None, digits: int = 30) -> BoundReport:
    """The bound 1 + alpha/beta with hypothesis verdict; delta_threshold = ceil(value).

    With a series and the exact variant, lambda0 comes from the b_lambda
    spectrum; otherwise lambda0 = d, the worst case.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if series is not None and series.d != d:
        raise ValueError(f"series has period {series.d}, expected d={d}")
    hyp = hypothesis_check(a, b, d, mode, strict, digits)
    lam = d
    if series is not None and variant == "exact":
        lam = saddle.b_lambdas(series, digits).lambda0
    with mp.workdps(digits + 10):
        be = beta(a, b, d, digits)
        alpha = {v: alpha_closed(a, b, d, v, digits) for v in ("with_slack", "no_slack")}
        if variant == "exact":
            alpha["exact"] = alpha_exact(a, b, d, lam, digits)
        value = {k: limit_form(v, be) for k, v in alpha.items()}
        threshold = int(mp.ceil(value[variant]))
    return BoundReport(d, a, b, variant, be, alpha, value, threshold, lam, hyp)


@dataclass
class TableRow:
    d: int
    a: int
    b: int
    printed_value: str
    printed_delta: int
    values: dict
    matched_variant: str
    delta: int
    hypothesis_numeric: bool
    hypothesis_analytic: bool

    @property
    def difference(self):
        return abs(self.values[self.matched_variant] - mp.mpf(self.printed_value))

    @property
    def matched(self) -> bool:
        return self.difference <= MATCH_TOL and self.delta == self.printed_delta

    def csv_row(self) -> list:
        return [str(self.a), str(self.b), _fixed(self.values[self.matched_variant], 8), str(self.delta),
                self.matched_variant, str(self.hypothesis_numeric).lower(), str(self.hypothesis_analytic).lower()]


CSV_COLUMNS = ["a", "b", "value", "delta", "matched_variant", "hypothesis_numeric", "hypothesis_analytic"]


def _fixed(x, places: int) -> str:
    """Truncate (not round) to ``places`` decimals, as the printed tables do."""
    with mp.workdps(40):
        q = int(x * mp.mpf(10) ** places)
        s = str(q)
        neg = s.startswith("-")
        s = s.lstrip("-").rjust(places + 1, "0")
        return ("-" if neg else "") + s[:-places] + "." + s[-places:]


def reproduce_table(d: int, digits: int = 30) -> list[TableRow]:
    if d not in TABLES:
        raise ValueError(f"tables exist for d in 1..4, got {d}")
    rows = []
    for a, b, printed, delta in TABLES[d]:
        with mp.workdps(digits + 10):
            be = beta(a, b, d, digits)
            values = {v: limit_form(alpha_closed(a, b, d, v, digits), be) for v in ("with_slack", "no_slack")}
            target = mp.mpf(printed)
            matched = min(values, key=lambda v: abs(values[v] - target))
            threshold = int(mp.ceil(values[matched]))
        rows.append(TableRow(d, a, b, printed, delta, values, matched, threshold,
                             hypothesis_check(a, b, d, "numeric", digits=digits).passed,
                             hypothesis_check(a, b, d, "analytic", digits=digits).passed))
    return rows


# -- parameter search -------------------------------------------------------------

def _value_grid(a: int, bs: np.ndarray, d: int, slack: float) -> np.ndarray:
    r = (d + 2 * bs) / d
    R = (a + d) / d
    log2 = math.log(2)
    alpha = (d * R * ((r + 1) * np.log(r + 1) - (r - 1) * np.log(r - 1)) - 2 * a * (d + log2)
             - 4 * bs * (math.log(d) - log2) - 2 * d * r * np.log(2 * r) - slack)
    be = 2 * a * d + 2 * a * log2 + 4 * (bs + d) * np.log(bs + d) - 4 * d * math.log(d)
    return 1 + alpha / be


def _log_rho_grid(r: np.ndarray, R: float) -> np.ndarray:
    """Float fixed point for log rho, vectorised over r."""
    L = np.log(2.5 * r) - R / r
    for _ in range(200):
        rho = np.exp(L)
        L = np.log(2 * r + rho) - R * (np.log(r + 1 + rho) - np.log(r - 1 + rho))
    return L


def _hypothesis_grid(a: int, bs: np.ndarray, d: int, strict: bool) -> np.ndarray:
    r = (d + 2 * bs) / d
    R = (a + d) / d
    ok = (r >= 2) & (R >= 3 * r)
    pi = math.pi
    caps = [r * pi / (10 * R * d), np.full_like(r, pi / (2 * d * d))]
    if strict or d != 1:
        caps.append(r / (4 * R) * math.sin(pi / (2 * d)))
        caps.append(r / (38 * R) * (math.cos(pi / (2 * d)) - math.cos(3 * pi / (2 * d))))
    cap = np.minimum.reduce(caps)
    with np.errstate(all="ignore"):
        return ok & (_log_rho_grid(r, R) < np.log(cap))


@dataclass
class SearchResult:
    found: bool
    a: Optional[int] = None
    b: Optional[int] = None
    report: Optional[BoundReport] = None
    best_by_a: list = field(default_factory=list)  # (a, best value) scan trace


def search_min_params(d: int, target_dim: int, a_limit: int, variant: str = "with_slack",
                      strict: Optional[bool] = None, digits: int = 30, a_start: int = 2,
                      odd_only: Optional[bool] = None) -> SearchResult:
    """Smallest a <= a_limit with some b giving value > target_dim and a numeric hypothesis pass.

    A float scan over b for each a proposes candidates; each is confirmed at
    full precision before it is accepted.  For d = 1 only odd a are scanned
    by default: with even a the forms only see zeta at even integers.
    """
    if target_dim < 2:
        raise ValueError("target_dim must be >= 2")
    if variant not in ("with_slack", "no_slack"):
        raise ValueError("search runs on the closed variants")
    if strict is None:
        strict = d != 1
    slack = 1 / 3 if variant == "with_slack" else 0.0
    if odd_only is None:
        odd_only = d == 1
    trace = []
    for a in range(max(a_start, 2), a_limit + 1):
        if odd_only and a % 2 == 0:
            continue
        bs = np.arange(1, a // 2 + 1, dtype=float)
        ok = _hypothesis_grid(a, bs, d, strict)
        if not ok.any():
            trace.append((a, None))
            continue
        values = np.where(ok, _value_grid(a, bs, d, slack), -np.inf)
        trace.append((a, float(values.max())))
        order = np.argsort(-values, kind="stable")
        for idx in order[:5]:
            if not np.isfinite(values[idx]) or values[idx] <= target_dim - 1e-9:
                break
            b = int(bs[idx])
            report = delta_bound(None, a, b, d, variant, "numeric", strict, digits)
            if report.rigorous and report.value[variant] > target_dim:
                return SearchResult(True, a, b, report, trace)
    return SearchResult(False, best_by_a=trace)


@dataclass
class DemoRow:
    t: int
    a: int
    b: int
    value: object
    log_t_scaled: object
    ratio: object
    log_a_over_C: object
    rigorous: bool


def asymptotic_demo(d: int, C, mu, t_list, variant: str = "with_slack", digits: int = 30) -> list[DemoRow]:
    """value against log(t)/(d+log 2) and log(a)/C for a = floor(t^mu), b = floor(t)."""
    with mp.workdps(digits + 10):
        C, mu = mp.mpf(C), mp.mpf(mu)
        if mu <= 1:
            raise ValueError("mu must exceed 1")
        if C <= d + mp.log(2):
            raise ValueError("C must exceed d + log 2")
        rows = []
        for t in t_list:
            a, b = int(mp.floor(mp.mpf(t) ** mu)), int(t)
            report = delta_bound(None, a, b, d, variant, "numeric", None, digits)
            value = report.value[variant]
            scaled = mp.log(t) / (d + mp.log(2))
            rows.append(DemoRow(t, a, b, value, scaled, value / scaled, mp.log(a) / C, report.rigorous))
        return rows
