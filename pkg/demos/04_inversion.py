"""Recovering sideband transmissions from LO phase sweeps.

Run with ``python demos/04_inversion.py``.
"""

import dataclasses

import numpy as np

from sqzcomb.comb import CombConfig, squeeze_db_to_s
from sqzcomb.inversion import PhaseSweepTrace, fit_quadratures, invert_trace, transmission_errors
from sqzcomb.lineshape import ToothResponse
from sqzcomb.montecarlo import noisy_trace
from sqzcomb.response import classical_power_terms

# a dim probe (|alpha| = 3) so the noise is visible
comb = CombConfig(carrier_nu=6534.36, squeeze_s=squeeze_db_to_s(10.0), alpha_mag=3.0)
phases = np.arange(64) * (2 * np.pi / 64)
tooth = ToothResponse(n=2, sqrt_eta_plus=0.93, sqrt_eta_minus=0.71)
kappa = comb.kappa(tooth.n)

# %% Without noise the two quadratures give the transmissions back exactly
clean = PhaseSweepTrace(phases, classical_power_terms(0.93, 0.71, 2, kappa, phases), 2)
print(invert_trace(clean, kappa))

# %% With noise: subtract the floor measured with the probe blocked
for shots in (1_000, 100_000):
    trace = noisy_trace(tooth, comb, phases, seed=1, shots_per_phase=shots)
    dark = noisy_trace(tooth, dataclasses.replace(comb, alpha_mag=0.0), phases, 2, shots)
    floor = dark.powers.mean()
    floor_se = dark.powers.std(ddof=1) / np.sqrt(dark.powers.size)
    fit = fit_quadratures(trace, floor)
    rec = invert_trace(trace, kappa, floor)
    se = transmission_errors(fit, 2, kappa, True, floor_se)
    print(
        f"{shots:>7d} shots: sqrt(eta+) = {rec.sqrt_eta_plus:.5f} +- {se[0]:.1e}, "
        f"sqrt(eta-) = {rec.sqrt_eta_minus:.5f} +- {se[1]:.1e}"
    )

# %% The dark quadrature only fixes a magnitude; the sideband hint picks the order
print(invert_trace(clean, kappa, upper_brighter=False))
