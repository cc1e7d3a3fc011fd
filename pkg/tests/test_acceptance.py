"""Acceptance gate: one test per criterion, each printing a pass/fail line."""
import math
import time

import numpy as np
import pytest

from betajacobi.constants import JacobiParams
from betajacobi.densities import (
    Case1ExactLaw,
    Case1Regime1Law,
    Case1Regime2Law,
    Case2ExactLaw,
    Case2Regime1Law,
    Case2Regime2Law,
    ExactMaxLaw,
    ExactMinLaw,
    pdf_case1_regime2,
    pdf_case2_regime2,
    pdf_min_case1,
    pdf_min_case2,
    pdf_min_exact,
    regime_scale,
)
from betajacobi.experiments import ks_critical_value, ks_statistic, preset, run_experiment
from betajacobi.hyperg import LevelSums, MhgParams, mhg
from betajacobi.jack import jack_at_identity
from betajacobi.partitions import enumerate_partitions
from betajacobi.rmt_sampler import sample_batch

SWEEP_SEED = 20240601


def _mass_error(law):
    try:
        return abs(law.total_mass().value - 1.0), None
    except Exception as exc:  # a failed integral counts as a failed set
        return math.inf, type(exc).__name__


def test_criterion_1_normalization_sweep(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(SWEEP_SEED)
    exact_sets = [
        (rng.uniform(0.3, 6), rng.uniform(-0.9, 10), rng.uniform(-0.9, 10), int(rng.integers(1, 9)))
        for _ in range(50)
    ]
    exact_ok = 0
    failures = []
    for beta, a, b, m in exact_sets:
        p = JacobiParams(beta, a, b, m)
        errs = [_mass_error(cls(p)) for cls in (ExactMinLaw, ExactMaxLaw)]
        if all(e < 1e-6 for e, _ in errs):
            exact_ok += 1
        else:
            failures.append((round(beta, 2), round(a, 2), round(b, 2), m, [n or f"{e:.1e}" for e, n in errs]))

    rng = np.random.default_rng(SWEEP_SEED + 1)
    makers = {
        "case1_exact": lambda: Case1ExactLaw(rng.uniform(0.3, 1.95), rng.uniform(-0.9, 10), int(rng.integers(1, 9))),
        "case2_exact": lambda: Case2ExactLaw(rng.uniform(0.3, 6), int(rng.integers(1, 5)), rng.uniform(-0.9, 10),
                                             int(rng.integers(1, 9))),
        "case1_regime1": lambda: Case1Regime1Law(rng.uniform(0.3, 1.95), int(rng.integers(1, 9))),
        "case1_regime2": lambda: Case1Regime2Law(rng.uniform(0.3, 1.95)),
        "case2_regime1": lambda: Case2Regime1Law(rng.uniform(0.3, 6), int(rng.integers(1, 5)), int(rng.integers(1, 9))),
        "case2_regime2": lambda: Case2Regime2Law(rng.uniform(0.3, 6), int(rng.integers(1, 5))),
    }
    family_ok = {}
    for name, make in makers.items():
        ok = 0
        for _ in range(20):
            law = make()
            e, exc = _mass_error(law)
            ok += e < 1e-6
            if e >= 1e-6:
                failures.append((repr(law), exc or f"{e:.1e}"))
        family_ok[name] = ok
    runtime = time.perf_counter() - start
    passed = exact_ok == 50 and all(v == 20 for v in family_ok.values()) and runtime < 300
    families = ", ".join(f"{k} {v}/20" for k, v in family_ok.items())
    criterion(1, passed, f"exact min+max {exact_ok}/50; {families}; {runtime:.0f}s")
    assert passed, failures


def test_criterion_2_cross_formula(criterion):
    grid = np.linspace(0.05, 0.95, 19)
    b, m = 2.5, 4
    worst1 = worst2 = 0.0
    for beta in (0.5, 1.0, 1.5, 1.9):
        ref = pdf_min_exact(JacobiParams(beta, 2 / beta - 2, b, m), grid)
        worst1 = max(worst1, np.max(np.abs(pdf_min_case1(beta, b, m, grid) / ref - 1)))
    for k in (1, 2, 3):
        for beta in (1.0, 2.0, 4.0):
            ref = pdf_min_exact(JacobiParams(beta, 2 * k / beta - 1, b, m), grid)
            worst2 = max(worst2, np.max(np.abs(pdf_min_case2(beta, k, b, m, grid) / ref - 1)))
    passed = worst1 < 1e-8 and worst2 < 1e-8
    criterion(2, passed, f"case 1 vs exact {worst1:.1e}, case 2 vs exact {worst2:.1e} (tol 1e-8)")
    assert passed


def test_criterion_3_closed_forms(criterion):
    y = np.arange(1, 51) / 10
    e1 = pdf_case2_regime2(2.0, 1, y)
    exact_exp = bool(np.array_equal(e1, np.exp(-y)))
    s = np.sqrt(2 * y)
    ref = (1 + s) / s * np.exp(-y - s)
    err = float(np.max(np.abs(pdf_case1_regime2(1.0, y) / ref - 1)))
    passed = exact_exp and err < 1e-10
    criterion(3, passed, f"e^-y bit-exact: {exact_exp}; real-case closed form rel err {err:.1e}")
    assert passed


def test_criterion_4_figure_2(criterion):
    start = time.perf_counter()
    report = run_experiment(preset("fig_gen", seed=42))
    runtime = time.perf_counter() - start
    crit = ks_critical_value(10_000)
    passed = report.ks_statistic < crit and runtime < 120
    criterion(4, passed, f"KS {report.ks_statistic:.4f} < {crit:.4f}, {runtime:.1f}s")
    assert passed


def test_criterion_5_limit_figures(criterion):
    lines, passed = [], True
    for name in ("f_a1", "f_a2", "f_b1", "f_b2"):
        r = run_experiment(preset(name, seed=42))
        passed &= r.passed and r.threshold == pytest.approx(2 * ks_critical_value(r.spec.n_samples))
        lines.append(f"{name} {r.ks_statistic:.4f}/{r.threshold:.4f}")
    criterion(5, passed, "; ".join(lines) + " (KS / 2x critical)")
    assert passed


def _cdf_gap(kind, exact_law, limit_law, b, m, beta):
    c = regime_scale(kind, beta, b, m)
    y = np.linspace(0, 25, 1001)[1:]
    return float(np.max(np.abs(exact_law.cdf(y / c) - limit_law.cdf(y))))


def test_criterion_6_limit_convergence(criterion):
    bs = (1e2, 1e3, 1e4)
    g1 = [_cdf_gap("case1_regime1", Case1ExactLaw(1.0, b, 3), Case1Regime1Law(1.0, 3), b, 3, 1.0) for b in bs]
    g2 = [_cdf_gap("case2_regime1", Case2ExactLaw(2.0, 2, b, 3), Case2Regime1Law(2.0, 2, 3), b, 3, 2.0) for b in bs]
    mono = lambda g: all(x > y for x, y in zip(g, g[1:]))
    passed = mono(g1) and mono(g2)
    fmt = lambda g: " > ".join(f"{v:.1e}" for v in g)
    criterion(6, passed, f"sup|F_b - F| case 1: {fmt(g1)}; case 2: {fmt(g2)}")
    assert passed


def test_criterion_7_haar_corner(criterion):
    n, r, N = 40, 10, 5000
    batch = sample_batch(dict(n=n, r=r, field="complex"), "raw", N, 2024, model="haar")
    crit = ks_critical_value(N)
    law_cdf = lambda lam: 1 - (1 - lam) ** (r * (n - r))
    candidates = {"unscaled": batch.values, "x/beta": batch.values / 2.0}
    stats = {k: ks_statistic(v, law_cdf) for k, v in candidates.items()}
    passing = [k for k, d in stats.items() if d < crit]
    passed = len(passing) == 1
    detail = ", ".join(f"{k} KS {d:.4f}" for k, d in stats.items())
    criterion(7, passed, f"{detail} (critical {crit:.4f}); matching convention: {passing}")
    assert passed


def test_criterion_8_series_engine(criterion):
    import mpmath as mp

    rng = np.random.default_rng(SWEEP_SEED + 8)
    worst_gauss = 0.0
    for _ in range(200):
        a, b = rng.uniform(-3, 3, 2)
        c = rng.uniform(0.2, 5)
        x = rng.uniform(-0.8, 0.8)
        gamma = rng.uniform(0.3, 6)
        got = mhg(MhgParams((a, b), (c,), gamma), x, 1, max_degree=400, rel_tol=1e-15).value
        ref = float(mp.hyp2f1(a, b, c, x))
        worst_gauss = max(worst_gauss, abs(got - ref) / abs(ref))
    worst_jack = 0.0
    for beta in (0.5, 1.0, 1.75, 2.0, 4.0):
        for m in range(1, 7):
            for k in range(11):
                s = sum(jack_at_identity(p, beta, m) for p in enumerate_partitions(k, m))
                worst_jack = max(worst_jack, abs(s / m**k - 1))
    degree_ok = True
    for beta in (0.5, 1.0, 2.0, 4.0):
        for m in range(1, 7):
            for k in range(1, 5):
                lv = LevelSums(MhgParams((1 - m, -m - 1.5 + 1), (2 + (2 / beta) * (k - 1),), 4 / beta), k - 1)
                lv.extend((m - 1) * (k - 1) + 3)
                nz = np.flatnonzero(lv.coefficient_array())
                degree_ok &= lv.terminated and nz[-1] <= (m - 1) * (k - 1)
    passed = worst_gauss < 1e-11 and worst_jack < 1e-12 and degree_ok
    criterion(
        8, passed,
        f"m=1 vs Gauss {worst_gauss:.1e}; sum C_kappa(I) vs m^k {worst_jack:.1e}; degree bound held: {degree_ok}",
    )
    assert passed
