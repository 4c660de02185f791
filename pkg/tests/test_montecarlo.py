import math

import numpy as np
import pytest

from sqzcomb.cli import default_line_file
from sqzcomb.comb import CombConfig, squeeze_db_to_s
from sqzcomb.hitran import read_par
from sqzcomb.lineshape import GasConditions, ToothResponse, line_center, sample_teeth
from sqzcomb.montecarlo import (
    BLOCK_SIZE,
    draw_powers,
    moment_check,
    moment_suite,
    noise_budget,
    noisy_trace,
    random_moment_points,
)
from sqzcomb.response import classical_power, mean_power, variance

TOOTH = ToothResponse(n=2, sqrt_eta_plus=0.9, sqrt_eta_minus=0.8)
COMB = CombConfig(carrier_nu=6534.36, squeeze_s=1.0, eta_d=0.9)


def test_reproducible_and_worker_independent():
    count = 2 * BLOCK_SIZE + 123
    a = draw_powers(TOOTH, COMB, 0.3, seed=5, count=count)
    b = draw_powers(TOOTH, COMB, 0.3, seed=5, count=count, workers=3)
    c = draw_powers(TOOTH, COMB, 0.3, seed=6, count=count)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)
    assert a.count == count and a.values.size == count
    assert "PCG64" in a.algorithm


def test_budget_matches_analytic_split():
    budget = noise_budget(TOOTH, COMB)
    classical = classical_power(TOOTH, COMB.kappa(2), 0.0)
    mean = mean_power(TOOTH, COMB)
    # the noise part is small next to the classical power, so compare on the mean's scale
    assert abs(budget.total - (mean - classical)) <= 1e-12 * mean
    assert budget.variance == pytest.approx(variance(TOOTH, COMB), rel=1e-12)


def test_single_point_moments():
    batch = draw_powers(TOOTH, COMB, 0.7, seed=1, count=200_000)
    check = moment_check(batch, mean_power(TOOTH, COMB, 0.7), variance(TOOTH, COMB))
    assert check.passed(3.0)


def test_suite_passes_and_detects_injected_fault():
    good = moment_suite(seed=2024, points=20, count=100_000)
    assert all(p.check.passed(3.0) for p in good)
    bad = moment_suite(seed=2024, points=20, count=100_000, variance_fn=lambda t, c: 1.5 * variance(t, c))
    assert not any(p.check.passed(3.0) for p in bad)
    shifted = moment_suite(
        seed=2024, points=5, count=100_000, mean_fn=lambda t, c, d: mean_power(t, c, d) * 1.01
    )
    assert not all(p.check.passed(3.0) for p in shifted)


def test_random_points_cover_the_stated_ranges():
    pts = random_moment_points(7, 200)
    ns = {t.n for t, _, _ in pts}
    assert ns <= set(range(17)) and len(ns) > 10
    for tooth, comb, _ in pts:
        assert 0.1 <= tooth.eta_plus <= 1.0
        assert comb.depth in (2.0, 10.0)
        assert 0.5 <= comb.eta_d <= 1.0
        if tooth.n == 0:
            assert tooth.eta_plus == tooth.eta_minus


def test_acetylene_scenario_every_tooth():
    line = read_par(default_line_file())[0]
    gas = GasConditions()
    comb = CombConfig(carrier_nu=line_center(line, gas), squeeze_s=squeeze_db_to_s(10.0))
    for k, tooth in enumerate(sample_teeth(line, gas, comb)):
        batch = draw_powers(tooth, comb, 0.0, seed=300 + k, count=100_000)
        check = moment_check(batch, mean_power(tooth, comb), variance(tooth, comb))
        assert check.passed(3.0), (tooth.n, check.z_mean, check.z_var)


def test_noisy_trace_mean_and_spread():
    phases = np.linspace(0, math.pi, 32, endpoint=False)
    shots = 400
    traces = np.array([noisy_trace(TOOTH, COMB, phases, seed, shots).powers for seed in range(300)])
    expected = [mean_power(TOOTH, COMB, t) for t in phases]
    se = math.sqrt(variance(TOOTH, COMB) / shots)
    assert np.all(np.abs(traces.mean(axis=0) - expected) < 3 * se / math.sqrt(300))
    assert traces.std(axis=0).mean() == pytest.approx(se, rel=0.05)
    with pytest.raises(ValueError):
        noisy_trace(TOOTH, COMB, phases, 1, 0)
    with pytest.raises(ValueError):
        draw_powers(TOOTH, COMB, 0.0, 1, 0)
