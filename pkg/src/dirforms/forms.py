"""Exact construction of the rational function P_n, its partial fractions and
the linear-form coefficients A_j, B_m.

Everything here is exact rational arithmetic on :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class PoleError(ZeroDivisionError):
    """Evaluation requested at a pole of P."""


@dataclass(frozen=True)
class FormParams:
    d: int
    a: int
    b: int
    n: int

    def __post_init__(self):
        for name in ("d", "a", "b", "n"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.a < 2:
            raise ValueError(f"a must be >= 2, got {self.a}")
        if self.a < 2 * self.b:
            raise ValueError(f"need a >= 2b, got a={self.a}, b={self.b}")

    @property
    def r(self) -> Fraction:
        return Fraction(self.d + 2 * self.b, self.d)

    @property
    def R(self) -> Fraction:
        return Fraction(self.a + self.d, self.d)

    def with_n(self, n: int) -> "FormParams":
        return FormParams(self.d, self.a, self.b, n)


@dataclass(frozen=True)
class RationalFunctionRep:
    """P(t) = scalar * prod_z (t - z) / prod_l (t - d l)^a in factored form."""

    params: FormParams
    numerator_zeros: tuple[int, ...]
    pole_locations: tuple[int, ...]
    multiplicity: int
    scalar: int

    @property
    def numerator_degree(self) -> int:
        return len(self.numerator_zeros)

    @property
    def denominator_degree(self) -> int:
        return self.multiplicity * len(self.pole_locations)

    @property
    def degree_gap(self) -> int:
        return self.denominator_degree - self.numerator_degree


def lcm_upto(N: int) -> int:
    """lcm(1, ..., N) as the product of the largest prime powers p^k <= N."""
    if N < 1:
        raise ValueError(f"lcm_upto needs N >= 1, got {N}")
    sieve = bytearray([1]) * (N + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(N) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, N + 1, p)))
    out = 1
    for p in range(2, N + 1):
        if sieve[p]:
            q = p
            while q * p <= N:
                q *= p
            out *= q
    return out


def build_P(params: FormParams) -> RationalFunctionRep:
    d, a, b, n = params.d, params.a, params.b, params.n
    zeros = []
    for l in range(d * n + 1, (d + 2 * b) * n + 1):
        zeros.extend((l, -l))
    poles = tuple(d * l for l in range(-n, n + 1))
    scalar = math.factorial(2 * n) ** (a - 2 * b) * d ** (2 * n * a)
    rep = RationalFunctionRep(params, tuple(zeros), poles, a, scalar)
    assert rep.degree_gap == 2 * (a - 2 * b) * n + a >= 2
    return rep


def eval_P_exact(rep: RationalFunctionRep, t) -> Fraction:
    t = Fraction(t)
    den = Fraction(1)
    for p in rep.pole_locations:
        if t == p:
            raise PoleError(f"t = {t} is a pole of P")
        den *= t - p
    num = Fraction(rep.scalar)
    for z in rep.numerator_zeros:
        num *= t - z
    return num / den**rep.multiplicity


# -- truncated power series in eps, coefficient lists of length `order` -------

def _mul_trunc(p: Sequence[Fraction], q: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * order
    for i, pi in enumerate(p[:order]):
        if pi:
            for j in range(min(len(q), order - i)):
                out[i + j] += pi * q[j]
    return out


def _mul_linear(p: list[Fraction], c, order: int) -> list[Fraction]:
    """p(eps) * (c + eps), truncated."""
    out = [c * x for x in p]
    for i in range(1, order):
        out[i] += p[i - 1]
    return out


def _inv_trunc(p: Sequence[Fraction], order: int) -> list[Fraction]:
    inv = [Fraction(0)] * order
    inv[0] = 1 / p[0]
    for k in range(1, order):
        acc = sum((p[i] * inv[k - i] for i in range(1, min(k, len(p) - 1) + 1)), Fraction(0))
        inv[k] = -acc * inv[0]
    return inv


def _pow_trunc(p: list[Fraction], e: int, order: int) -> list[Fraction]:
    result = [Fraction(1)] + [Fraction(0)] * (order - 1)
    base = p
    while e:
        if e & 1:
            result = _mul_trunc(result, base, order)
        e >>= 1
        if e:
            base = _mul_trunc(base, base, order)
    return result


@dataclass(frozen=True)
class PartialFractionTable:
    """A_{l,j}: P(t) = sum_{l,j} A_{l,j} / (t - d l)^j."""

    params: FormParams
    entries: dict = field(repr=False)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.entries[key]

    def column_sum(self, j: int) -> Fraction:
        n = self.params.n
        return sum((self.entries[(l, j)] for l in range(-n, n + 1)), Fraction(0))

    def evaluate(self, t) -> Fraction:
        """Reconstruct P(t) from the table (exact)."""
        t = Fraction(t)
        d, a, n = self.params.d, self.params.a, self.params.n
        total = Fraction(0)
        for l in range(-n, n + 1):
            x = t - d * l
            if x == 0:
                raise PoleError(f"t = {t} is a pole of P")
            inv = 1 / x
            power = inv
            for j in range(1, a + 1):
                total += self.entries[(l, j)] * power
                power *= inv
        return total


def partial_fractions(rep: RationalFunctionRep) -> PartialFractionTable:
    """Exact partial fractions by expanding P(t)(t - dl)^a around each pole.

    With eps = t - dl the numerator is a product of linear factors
    (dl - z + eps) and the remaining poles contribute (d(l - k) + eps)^-a;
    the coefficient of eps^(a-j) in the truncated product is A_{l,j}.
    """
    params = rep.params
    d, a, n = params.d, params.a, params.n
    order = a
    entries = {}
    for l in range(-n, n + 1):
        c = d * l
        num = [Fraction(1)] + [Fraction(0)] * (order - 1)
        for z in rep.numerator_zeros:
            num = _mul_linear(num, c - z, order)
        den = [Fraction(1)] + [Fraction(0)] * (order - 1)
        for k in range(-n, n + 1):
            if k != l:
                den = _mul_linear(den, d * (l - k), order)
        series = _mul_trunc(num, _pow_trunc(_inv_trunc(den, order), a, order), order)
        for j in range(1, a + 1):
            entries[(l, j)] = rep.scalar * series[a - j]
    return PartialFractionTable(params, entries)


@dataclass(frozen=True)
class LinearFormCoeffs:
    """I = sum_j A_j L(j) - sum_m B_m a_m, plus the lcm power clearing denominators."""

    params: FormParams
    A: dict
    B: dict
    D: int

    @property
    def scale(self) -> int:
        return self.D**self.params.a

    @property
    def scaled_A(self) -> dict:
        return {j: v * self.scale for j, v in self.A.items()}

    @property
    def scaled_B(self) -> dict:
        return {m: v * self.scale for m, v in self.B.items()}

    def weights(self) -> list[int]:
        return sorted(self.A)


def _residue_sums(d: int, m: int, j: int, count: int) -> list[Fraction]:
    """prefix[K] = sum_{k=0}^{K-1} 1/(dk+m)^j for K = 0..count."""
    out = [Fraction(0)]
    for k in range(count):
        out.append(out[-1] + Fraction(1, (d * k + m) ** j))
    return out


def linear_form_coeffs(table: PartialFractionTable) -> LinearFormCoeffs:
    params = table.params
    d, a, n = params.d, params.a, params.n
    A = {j: table.column_sum(j) for j in range(2, a + 1) if (a - j) % 2 == 0}
    B = {}
    for m in range(1, d + 1):
        total = Fraction(0)
        for j in range(1, a + 1):
            prefix = _residue_sums(d, m, j, 2 * n)
            for l in range(-n, n):
                # inner sum runs over k = 0..n-l-1; empty at l = n
                total += table.entries[(l, j)] * prefix[n - l]
        B[m] = total
    return LinearFormCoeffs(params, A, B, lcm_upto(2 * d * n))


def construct(params: FormParams) -> tuple[PartialFractionTable, LinearFormCoeffs]:
    table = partial_fractions(build_P(params))
    return table, linear_form_coeffs(table)


# -- checks -----------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    passed: bool
    checked: int
    counterexample: Optional[str] = None

    def __bool__(self) -> bool:
        return self.passed


def integrality_check(table: PartialFractionTable, coeffs: LinearFormCoeffs) -> CheckReport:
    """D^(a-j) A_{l,j}, D^a A_j and D^a B_m must all be integers."""
    a, D = table.params.a, coeffs.D
    checked = 0
    for (l, j), value in sorted(table.entries.items()):
        checked += 1
        if (value * D ** (a - j)).denominator != 1:
            return CheckReport("integrality", False, checked, f"D^{a - j} * A[{l},{j}] = {value * D ** (a - j)}")
    for name, values in (("A", coeffs.scaled_A), ("B", coeffs.scaled_B)):
        for key, value in sorted(values.items()):
            checked += 1
            if value.denominator != 1:
                return CheckReport("integrality", False, checked, f"D^{a} * {name}[{key}] = {value}")
    return CheckReport("integrality", True, checked)


def identity_check(table: PartialFractionTable) -> CheckReport:
    """Vanishing column sums for j of the wrong parity and the reflection A_{-l,j} = (-1)^(a-j) A_{l,j}."""
    a, n = table.params.a, table.params.n
    checked = 0
    for j in range(1, a + 1):
        if (a - j) % 2:
            checked += 1
            if table.column_sum(j) != 0:
                return CheckReport("identities", False, checked, f"sum_l A[l,{j}] = {table.column_sum(j)}")
    for l in range(-n, n + 1):
        for j in range(1, a + 1):
            checked += 1
            if table[(-l, j)] != (-1) ** (a - j) * table[(l, j)]:
                return CheckReport("identities", False, checked, f"reflection fails at l={l}, j={j}")
    return CheckReport("identities", True, checked)


def reconstruction_check(rep: RationalFunctionRep, table: PartialFractionTable, points: Iterable) -> CheckReport:
    checked = 0
    for t in points:
        checked += 1
        lhs, rhs = table.evaluate(t), eval_P_exact(rep, t)
        if lhs != rhs:
            return CheckReport("reconstruction", False, checked, f"t={t}: table gives {lhs}, P gives {rhs}")
    return CheckReport("reconstruction", True, checked)


def growth_bound(d: int, a: int, b: int) -> float:
    """Limit of log|coefficient|/n bound: 2a log2 + 4(b+d) log(b+d) - 4d log d."""
    return 2 * a * math.log(2) + 4 * (b + d) * math.log(b + d) - 4 * d * math.log(d)


def _log_abs(x: Fraction) -> float:
    # Fractions can exceed float range; go through integer bit lengths.
    return math.log(abs(x.numerator)) - math.log(x.denominator)


@dataclass
class GrowthReport:
    d: int
    a: int
    b: int
    bound: float
    rows: list  # (n, measured log max / n)
    flagged: list

    @property
    def passed(self) -> bool:
        return not self.flagged


def growth_report(coeffs_by_n: Sequence[LinearFormCoeffs], slack: float = 1.0) -> GrowthReport:
    if not coeffs_by_n:
        raise ValueError("need at least one set of coefficients")
    p0 = coeffs_by_n[0].params
    bound = growth_bound(p0.d, p0.a, p0.b)
    rows, flagged = [], []
    last_n = 0
    for coeffs in coeffs_by_n:
        p = coeffs.params
        if (p.d, p.a, p.b) != (p0.d, p0.a, p0.b) or p.n <= last_n:
            raise ValueError("coefficients must share (d, a, b) with increasing n")
        last_n = p.n
        logs = [_log_abs(v) for v in list(coeffs.A.values()) + list(coeffs.B.values()) if v]
        ratio = max(logs) / p.n
        rows.append((p.n, ratio))
        if ratio > bound + slack:
            flagged.append(p.n)
    return GrowthReport(p0.d, p0.a, p0.b, bound, rows, flagged)
