"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary, or directly when this file is run as a script.
"""

import random
import time
from fractions import Fraction

import mpmath as mp

from dirforms import bounds, evaluation, forms, saddle
from dirforms.forms import FormParams
from dirforms.series import preset

RESULTS = {}
# rows per printed table for d = 1..4
PRINTED_ROWS = 6 + 6 + 4 + 4


def record(number, title, passed, detail, elapsed):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d} {title}: {detail} ({elapsed:.1f}s)"
    RESULTS[number] = line
    print(line)
    return passed


def grid(n_max_for=lambda d: 4):
    for d in range(1, 5):
        for b in range(1, 4):
            for a in range(max(2, 2 * b), 9):
                for n in range(1, n_max_for(d) + 1):
                    yield FormParams(d, a, b, n)


def random_points(params, count, rng):
    points = []
    while len(points) < count:
        t = Fraction(rng.randint(-400, 400), rng.randint(1, 60))
        if t.denominator != 1 or t % params.d or abs(t) > params.d * params.n:
            points.append(t)
    return points


def test_criterion_01_exact_reconstruction():
    start = time.perf_counter()
    rng = random.Random(20240101)
    failures, cases = [], 0
    for params in grid():
        rep = forms.build_P(params)
        table = forms.partial_fractions(rep)
        report = forms.reconstruction_check(rep, table, random_points(params, 10, rng))
        cases += 1
        if not report:
            failures.append((params, report.counterexample))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    assert record(1, "exact reconstruction", ok,
                  f"{cases} parameter sets x 10 points, {len(failures)} failures", elapsed), failures[:3]


def test_criterion_02_identities_and_worked_case():
    import sympy as sp

    start = time.perf_counter()
    failures, cases = [], 0
    for params in grid():
        table = forms.partial_fractions(forms.build_P(params))
        report = forms.identity_check(table)
        cases += 1
        if not report:
            failures.append((params, report.counterexample))
    params = FormParams(1, 2, 1, 1)
    table, coeffs = forms.construct(params)
    worked = (table[(0, 2)] == 36 and table[(1, 1)] == Fraction(-47, 2) and coeffs.A[2] == 48
              and coeffs.B[1] == Fraction(315, 4))
    # independent residue oracle for the worked case
    t = sp.symbols("t")
    P = (t**2 - 4) * (t**2 - 9) / ((t + 1) ** 2 * t**2 * (t - 1) ** 2)
    oracle = {(l, j): sp.residue(P * (t - l) ** (j - 1), t, l) for l in (-1, 0, 1) for j in (1, 2)}
    oracle_ok = all(Fraction(int(sp.numer(v)), int(sp.denom(v))) == table[k] for k, v in oracle.items())
    elapsed = time.perf_counter() - start
    ok = not failures and worked and oracle_ok
    assert record(2, "identity suite", ok,
                  f"{cases} parameter sets, {len(failures)} failures; worked case "
                  f"A_0,2={table[(0, 2)]}, A_1,1={table[(1, 1)]}, A_2={coeffs.A[2]}, B_1={coeffs.B[1]}, "
                  f"residue oracle {'agrees' if oracle_ok else 'DISAGREES'}", elapsed), failures[:3]


def test_criterion_03_integrality():
    start = time.perf_counter()
    failures, cases = [], 0
    for params in grid(lambda d: 6 if d <= 2 else 4):
        table, coeffs = forms.construct(params)
        report = forms.integrality_check(table, coeffs)
        cases += 1
        if not report:
            failures.append((params, report.counterexample))
    elapsed = time.perf_counter() - start
    assert record(3, "integrality", not failures, f"{cases} parameter sets, {len(failures)} failures",
                  elapsed), failures[:3]


def test_criterion_04_cross_evaluation():
    start = time.perf_counter()
    prec = evaluation.PrecisionSpec(30)
    worst, failures, cases = mp.mpf(0), [], 0
    for name in ("zeta", "chi3", "chi4"):
        series = preset(name)
        for a, b in ((4, 1), (5, 1), (5, 2), (6, 2)):
            for n in range(1, 7):
                params = FormParams(series.d, a, b, n)
                _, coeffs = forms.construct(params)
                tail = evaluation.I_tail(series, params, prec).value
                direct = evaluation.I_from_coeffs(series, coeffs, prec)
                with mp.workdps(60):
                    rel = abs(tail - direct) / max(1, abs(tail))
                    worst = max(worst, rel)
                    if rel >= mp.mpf(10) ** -30:
                        failures.append((name, a, b, n, mp.nstr(rel, 3)))
                cases += 1
    value = evaluation.I_tail(preset("zeta"), FormParams(1, 2, 1, 1), prec).value
    with mp.workdps(50):
        expected = 48 * mp.zeta(2) - mp.mpf(315) / 4
        worked = mp.nstr(value, 8) == mp.nstr(expected, 8) == "0.20683521"
    elapsed = time.perf_counter() - start
    ok = not failures and worked
    assert record(4, "cross-evaluation", ok,
                  f"{cases} cases, worst relative gap {mp.nstr(worst, 3)} (< 1e-30); "
                  f"I(1,2,1,1) = {mp.nstr(value, 8)} = 48 zeta(2) - 315/4", elapsed), failures[:3]


def test_criterion_05_rate_convergence():
    start = time.perf_counter()
    prec = evaluation.PrecisionSpec(30)
    ns = [5, 10, 20, 30]
    series = preset("zeta")
    rows = evaluation.rate_empirical(series, FormParams(1, 9, 1, 1), ns, prec)
    max_dps = max(evaluation.I_tail(series, FormParams(1, 9, 1, n), prec).dps for n in ns)
    predicted = saddle.rate_predicted(saddle.SaddleContext(1, 9, 1), 1)
    with mp.workdps(40):
        gaps = [abs(v - predicted) for _, v in rows]
        rel30 = gaps[-1] / abs(predicted)
    monotone = all(x > y for x, y in zip(gaps, gaps[1:]))
    elapsed = time.perf_counter() - start
    ok = rel30 < 0.05 and monotone and elapsed < 300 and max_dps <= 400
    seq = ", ".join(mp.nstr(v, 6) for _, v in rows)
    assert record(5, "rate convergence", ok,
                  f"log|I(n)|/n = {seq} vs predicted {mp.nstr(predicted, 8)}; n=30 off by "
                  f"{mp.nstr(100 * rel30, 3)}%, monotone={monotone}, max dps {max_dps}", elapsed)


def test_criterion_06_table_reproduction():
    start = time.perf_counter()
    rows = [row for d in (1, 2, 3, 4) for row in bounds.reproduce_table(d)]
    worst = max(row.difference for row in rows)
    bad = [(row.d, row.a, row.b) for row in rows if not row.matched]
    elapsed = time.perf_counter() - start
    variants = {v: sum(row.matched_variant == v for row in rows) for v in ("with_slack", "no_slack")}
    ok = len(rows) == PRINTED_ROWS and not bad and elapsed < 10
    assert record(6, "table reproduction", ok,
                  f"{len(rows)} rows, worst |computed - printed| {mp.nstr(worst, 3)} (<= 5e-7), "
                  f"variants {variants}, delta column reproduced on {len(rows) - len(bad)}/{len(rows)}", elapsed), bad


def test_criterion_07_hypothesis_checker():
    start = time.perf_counter()
    rows = [(d, a, b) for d, table in bounds.TABLES.items() for a, b, _, _ in table]
    numeric_fail = [row for row in rows if not bounds.hypothesis_check(row[1], row[2], row[0], "numeric").passed]
    ana = bounds.hypothesis_check(9, 1, 1, "analytic")
    num = bounds.hypothesis_check(9, 1, 1, "numeric")
    ana2 = bounds.hypothesis_check(88, 10, 2, "analytic")
    num2 = bounds.hypothesis_check(88, 10, 2, "numeric")
    with mp.workdps(30):
        values_ok = (abs(ana.rho_used - mp.mpf("0.2676")) < 1e-4 and abs(num.rho_used - mp.mpf("0.006")) < 1e-4
                     and abs(ana.cap - mp.mpf("0.0942")) < 1e-4)
    elapsed = time.perf_counter() - start
    ok = (len(rows) == PRINTED_ROWS and not numeric_fail and not ana.passed and num.passed and not ana2.passed and num2.passed and values_ok)
    assert record(7, "hypothesis checker", ok,
                  f"numeric passes {len(rows) - len(numeric_fail)}/{len(rows)} rows; (1,9,1) analytic "
                  f"{mp.nstr(ana.rho_used, 4)} vs numeric {mp.nstr(num.rho_used, 3)} against cap "
                  f"{mp.nstr(ana.cap, 3)}; (2,88,10) analytic {ana2.passed}, numeric {num2.passed}", elapsed)


def test_criterion_08_spectral_data():
    start = time.perf_counter()
    tol = mp.mpf(10) ** -20
    z = saddle.b_lambdas(preset("zeta"))
    c4 = saddle.b_lambdas(preset("chi4"))
    c3 = saddle.b_lambdas(preset("chi3"))
    with mp.workdps(40):
        checks = {
            "zeta b_1 = 1/2": abs(z.b[1] - mp.mpf(1) / 2) < tol and z.lambda0 == 1,
            "chi4 b_4 = 0": c4.exact_zero[4] and abs(c4.b[4]) < tol,
            "chi4 b_2 = -2i": abs(c4.b[2] + 2j) < tol and not c4.exact_zero[2],
            "chi4 lambda0 = 2": c4.lambda0 == 2,
            "chi3 b_3 = 0": c3.exact_zero[3] and abs(c3.b[3]) < tol,
            "chi3 b_1 = -sqrt3 i": abs(c3.b[1] + mp.sqrt(3) * 1j) < tol and not c3.exact_zero[1],
            "chi3 lambda0 = 1": c3.lambda0 == 1,
        }
    elapsed = time.perf_counter() - start
    failed = [k for k, v in checks.items() if not v]
    assert record(8, "spectral data", not failed,
                  f"{len(checks) - len(failed)}/{len(checks)} values within 1e-20, zeros decided by "
                  f"cyclotomic reduction", elapsed), failed


def test_criterion_09_saddle_suite():
    start = time.perf_counter()
    worst_residual = mp.mpf(0)
    problems = []
    for d, table in bounds.TABLES.items():
        for a, b, _, _ in table:
            ctx = saddle.SaddleContext(d, a, b)
            report = saddle.lemma_suite(ctx)
            for name in ("residuals", "re_h_increasing", "within_rho_disc"):
                if not report.checks[name][0]:
                    problems.append((d, a, b, name, report.checks[name][1]))
            worst_residual = max([worst_residual] + [p.residual for p in report.points])
    rng = random.Random(9)
    fd_worst = 0.0
    delta = mp.mpf("1e-6")
    contexts = [saddle.SaddleContext(1, 9, 1), saddle.SaddleContext(2, 88, 10), saddle.SaddleContext(4, 2594, 186)]
    for i in range(20):
        ctx = contexts[i % len(contexts)]
        with mp.workdps(ctx.dps):
            t = mp.mpc(1.1 + 4 * rng.random(), 0.01 + 3 * rng.random())
            for fn, der in ((saddle.f_eval, saddle.fprime_eval), (saddle.fprime_eval, saddle.fsecond_eval)):
                fd = (fn(ctx, t + delta) - fn(ctx, t - delta)) / (2 * delta)
                err = abs(fd - der(ctx, t)) / max(1, abs(fd))
                fd_worst = max(fd_worst, float(err))
    # central differences are O(delta^2) = 1e-12 up to third-derivative size
    fd_ok = fd_worst < 1e-8
    elapsed = time.perf_counter() - start
    ok = not problems and worst_residual < mp.mpf(10) ** -12 and fd_ok
    assert record(9, "saddle suite", ok,
                  f"20 table sets x all lambda: worst |f'(t)-lambda pi i| {mp.nstr(worst_residual, 3)}, "
                  f"{len(problems)} lemma failures; finite differences worst rel {fd_worst:.1e}", elapsed), problems


def test_criterion_10_J_oracle():
    start = time.perf_counter()
    ctx = saddle.SaddleContext(1, 5, 1)
    errs = {}
    for n in (10, 20):
        log_mag, _ = saddle.J_asymptotic(ctx, 1, n)
        J = saddle.J_quadrature(ctx, 1, n, 15)
        with mp.workdps(30):
            errs[n] = abs(mp.exp(log_mag) / abs(J) - 1)
    elapsed = time.perf_counter() - start
    ok = errs[20] < 0.1 and errs[20] < errs[10] and elapsed < 120
    assert record(10, "J oracle", ok,
                  f"relative magnitude error {mp.nstr(100 * errs[10], 3)}% at n=10, "
                  f"{mp.nstr(100 * errs[20], 3)}% at n=20 (< 10%)", elapsed)


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for test in tests:
        try:
            test()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
