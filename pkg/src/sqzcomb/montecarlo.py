"""Stochastic oracle for the spectral-power statistics.

Each shot is the classical power plus three independent noise groups
(squeezed probe, sample-loss vacuum, detector-loss vacuum), each a scaled
chi-square variable with one degree of freedom:

    S = |I|^2 + s_sq z1^2 + s_vac z2^2 + s_det z3^2

so the ensemble mean reproduces the analytic mean power and the ensemble
variance ``2 (s_sq^2 + s_vac^2 + s_det^2)`` reproduces the analytic
variance. Only the first two moments carry physical meaning.

Random numbers come from numpy's PCG64 generator. Shots are produced in
fixed-size blocks, each drawn from its own child of ``SeedSequence(seed)``,
so output depends on the seed alone and not on how blocks are distributed
over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .comb import CombConfig
from .lineshape import ToothResponse
from .inversion import PhaseSweepTrace
from .numerics import bessel_j
from .response import classical_power, classical_power_terms, mean_power, pair_sums, variance

__all__ = [
    "RNG_ALGORITHM",
    "BLOCK_SIZE",
    "NoiseBudget",
    "SampleBatch",
    "MomentCheck",
    "noise_budget",
    "draw_powers",
    "noisy_trace",
    "moment_check",
    "MomentPoint",
    "random_moment_points",
    "moment_suite",
]

RNG_ALGORITHM = "numpy.random.PCG64 via SeedSequence"
BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class NoiseBudget:
    sigma2_sq: float
    sigma2_vac: float
    sigma2_det: float

    @property
    def total(self) -> float:
        """Mean noise power, i.e. mean power minus the classical part."""
        return self.sigma2_sq + self.sigma2_vac + self.sigma2_det

    @property
    def variance(self) -> float:
        return 2.0 * (self.sigma2_sq**2 + self.sigma2_vac**2 + self.sigma2_det**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.sigma2_sq, self.sigma2_vac, self.sigma2_det])


@dataclass(frozen=True)
class SampleBatch:
    seed: int
    count: int
    values: np.ndarray
    algorithm: str = RNG_ALGORITHM

    def mean(self) -> float:
        return float(self.values.mean())

    def var(self) -> float:
        return float(self.values.var(ddof=1))


def noise_budget(tooth: ToothResponse, comb: CombConfig) -> NoiseBudget:
    jn = bessel_j(tooth.n, comb.depth)
    kept, lost = pair_sums(tooth)
    b2 = comb.beta_mag**2
    return NoiseBudget(
        sigma2_sq=b2 * jn * jn * comb.eta_d * kept * math.exp(-2.0 * comb.squeeze_s),
        sigma2_vac=b2 * comb.eta_d * lost,
        sigma2_det=1.0 - comb.eta_d,
    )


def _block_sizes(count: int) -> list[int]:
    full, rest = divmod(count, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _draw_block(child: np.random.SeedSequence, size: int, scales: np.ndarray) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(child))
    z = rng.standard_normal((size, 3))
    return (z * z) @ scales


def draw_powers(
    tooth: ToothResponse,
    comb: CombConfig,
    delta_phi_lo: float,
    seed: int,
    count: int,
    workers: int = 1,
) -> SampleBatch:
    """Draw ``count`` single-shot spectral powers for one tooth pair."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    signal = classical_power(tooth, comb.kappa(tooth.n), delta_phi_lo)
    scales = noise_budget(tooth, comb).as_array()
    sizes = _block_sizes(count)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_draw_block, children, sizes, [scales] * len(sizes)))
    else:
        blocks = [_draw_block(c, s, scales) for c, s in zip(children, sizes)]
    values = signal + np.concatenate(blocks)
    return SampleBatch(seed=seed, count=count, values=values)


def noisy_trace(
    tooth: ToothResponse,
    comb: CombConfig,
    phase_grid,
    seed: int,
    shots_per_phase: int,
    delta_phi: float | None = None,
) -> PhaseSweepTrace:
    """LO sweep where each point is the average of ``shots_per_phase`` shots.

    The average of N shots of ``s z^2`` is ``s chi2_N / N``, which is drawn
    directly instead of summing N normals. ``delta_phi`` overrides the
    tooth's dispersion difference when given.
    """
    if shots_per_phase < 1:
        raise ValueError("shots_per_phase must be >= 1")
    phases = np.asarray(phase_grid, dtype=float)
    if delta_phi is None:
        delta_phi = tooth.delta_phi
    kappa = comb.kappa(tooth.n)
    signal = classical_power_terms(
        tooth.sqrt_eta_plus, tooth.sqrt_eta_minus, tooth.n, kappa, phases, delta_phi
    )
    scales = noise_budget(tooth, comb).as_array()
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    chi2 = rng.chisquare(shots_per_phase, size=(phases.size, 3)) / shots_per_phase
    return PhaseSweepTrace(phases=phases, powers=signal + chi2 @ scales, n=tooth.n)


@dataclass(frozen=True)
class MomentCheck:
    expected_mean: float
    expected_var: float
    sample_mean: float
    sample_var: float
    se_mean: float
    se_var: float

    @property
    def z_mean(self) -> float:
        return (self.sample_mean - self.expected_mean) / self.se_mean if self.se_mean else 0.0

    @property
    def z_var(self) -> float:
        return (self.sample_var - self.expected_var) / self.se_var if self.se_var else 0.0

    def passed(self, nsigma: float = 3.0) -> bool:
        return abs(self.z_mean) <= nsigma and abs(self.z_var) <= nsigma


def moment_check(batch: SampleBatch, expected_mean: float, expected_var: float) -> MomentCheck:
    """Compare sample mean and variance with expectations.

    Standard errors are estimated from the sample: ``sqrt(var / N)`` for the
    mean and ``sqrt((m4 - var^2 (N-3)/(N-1)) / N)`` for the variance, with
    ``m4`` the fourth central moment.
    """
    x = batch.values
    count = x.size
    mean = float(x.mean())
    dev = x - mean
    var = float(dev @ dev) / (count - 1)
    m4 = float(np.mean(dev**4))
    se_mean = math.sqrt(var / count)
    se_var = math.sqrt(max(m4 - var * var * (count - 3) / (count - 1), 0.0) / count)
    return MomentCheck(expected_mean, expected_var, mean, var, se_mean, se_var)


@dataclass(frozen=True)
class MomentPoint:
    tooth: ToothResponse
    comb: CombConfig
    seed: int
    check: MomentCheck


def random_moment_points(seed: int, points: int = 20) -> list[tuple[ToothResponse, CombConfig, int]]:
    """Parameter draws covering the validated range of the noise model."""
    seq = np.random.SeedSequence(seed)
    rng = np.random.Generator(np.random.PCG64(seq))
    out = []
    for child in seq.spawn(points):
        n = int(rng.integers(0, 17))
        eta_p, eta_m = rng.uniform(0.1, 1.0, size=2)
        if n == 0:
            eta_m = eta_p
        tooth = ToothResponse(n=n, sqrt_eta_plus=math.sqrt(eta_p), sqrt_eta_minus=math.sqrt(eta_m))
        comb = CombConfig(
            carrier_nu=6534.36,
            depth=float(rng.choice([2.0, 10.0])),
            n_teeth=33,
            squeeze_s=float(rng.uniform(0.0, 1.7)),
            eta_d=float(rng.uniform(0.5, 1.0)),
        )
        out.append((tooth, comb, int(child.generate_state(1, np.uint64)[0])))
    return out


def moment_suite(
    seed: int = 2024,
    points: int = 20,
    count: int = 100_000,
    variance_fn=None,
    mean_fn=None,
) -> list[MomentPoint]:
    """Moment-matching check of the analytic mean and variance at random points.

    ``variance_fn`` / ``mean_fn`` replace the analytic formulas under test
    (used for negative controls).
    """
    variance_fn = variance_fn or variance
    mean_fn = mean_fn or mean_power
    results = []
    for tooth, comb, point_seed in random_moment_points(seed, points):
        batch = draw_powers(tooth, comb, 0.0, point_seed, count)
        check = moment_check(batch, mean_fn(tooth, comb, 0.0), variance_fn(tooth, comb))
        results.append(MomentPoint(tooth, comb, point_seed, check))
    return results
