import json

import numpy as np
import pytest
from scipy import stats

from betajacobi.experiments import (
    PRESETS,
    ExperimentSpec,
    ks_critical_value,
    ks_statistic,
    preset,
    run_experiment,
)


def test_single_point_statistic():
    assert ks_statistic([0.5], lambda x: x) == pytest.approx(0.5)


def test_statistic_under_the_null_and_shift():
    rng = np.random.default_rng(31)
    x = rng.exponential(size=10**4)
    law = stats.expon
    crit = ks_critical_value(10**4)
    assert crit == pytest.approx(1.63 / 100, rel=0.01)
    assert ks_statistic(x, law.cdf) < crit
    assert ks_statistic(x + 0.1, law.cdf) > crit


def test_presets_encode_figure_parameters():
    g = PRESETS["fig_gen"]
    assert (g.beta, g.m, g.a, g.b, g.n_samples, g.law) == (1.75, 4, 2.3, 2.5, 10_000, "exact_min")
    assert PRESETS["f_a1"].b == 10 and PRESETS["f_a1"].law == "case1_regime1"
    a2 = PRESETS["f_a2"]
    assert (a2.m, a2.b, a2.n_samples, a2.scaling, a2.law) == (5, 5, 5000, "r2", "case1_regime2")
    b2 = PRESETS["f_b2"]
    assert (b2.m, b2.b, b2.n_samples, b2.k, b2.law) == (15, 50, 10_000, 1, "case2_regime2")
    assert PRESETS["f_b1"].b == 50 and PRESETS["f_b1"].law == "case2_regime1"
    for name, spec in PRESETS.items():
        assert spec.threshold_factor == (1.0 if name == "fig_gen" else 2.0)
    # Case-1 presets sit on a = 2/beta - 2
    for name in ("f_a1", "f_a2"):
        s = PRESETS[name]
        assert s.a == pytest.approx(2 / s.beta - 2)
    assert preset("f-b2") is PRESETS["f_b2"]
    with pytest.raises(KeyError):
        preset("f_c9")


def _small(**kw):
    base = dict(figure_id="custom", law="exact_min", beta=2.0, a=0.0, b=3.0, m=3, n_samples=3000, bins=30, seed=5)
    base.update(kw)
    return ExperimentSpec(**base)


def test_report_is_consistent_and_reproducible():
    spec = _small()
    r1 = run_experiment(spec)
    r2 = run_experiment(spec, threads=3)
    assert np.sum(r1.heights * np.diff(r1.bin_edges)) == pytest.approx(1.0, abs=1e-12)
    assert r1.ks_statistic == r2.ks_statistic
    assert np.array_equal(r1.heights, r2.heights)
    assert r1.passed
    d1, d2 = r1.to_dict(), r2.to_dict()
    d1.pop("runtime"), d2.pop("runtime")
    assert json.dumps(d1) == json.dumps(d2)
    assert d1["schema"] == "beta-jacobi/v1"


def test_wrong_law_fails():
    # samples at b = 3 scored against the law for b = 6
    spec = _small(b=3.0)
    r = run_experiment(spec)
    from betajacobi.densities import make_law

    other = make_law("exact_min", beta=2.0, a=0.0, b=6.0, m=3)
    from betajacobi.rmt_sampler import sample_batch

    batch = sample_batch(spec.params, "raw", spec.n_samples, spec.seed)
    assert ks_statistic(batch.values, other) > r.ks_critical_1pct


def test_singularity_is_recorded():
    r = run_experiment(preset("f_a2"))
    info = r.singularity
    assert info["singular_at_zero"] and info["left_exponent"] == pytest.approx(0.5)
    assert np.isfinite(r.theory).all()
    # the capped value is the mean density over the first grid cell
    assert info["curve_value_at_zero"] == pytest.approx(info["first_cell_mass"] / info["first_cell_width"])
    assert 0 < info["first_bin_mass_theory"] < 1
    smooth = run_experiment(preset("f_b2"))
    assert not smooth.singularity["singular_at_zero"]
    assert smooth.theory[0] == pytest.approx(1.0)


@pytest.mark.parametrize("name", ["fig_gen", "f_b1"])
def test_preset_runs_pass(name):
    r = run_experiment(preset(name, seed=42))
    assert r.passed, (r.ks_statistic, r.threshold)
