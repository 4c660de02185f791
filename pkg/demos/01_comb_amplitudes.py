"""Bessel comb produced by phase modulation.

Run with ``python demos/01_comb_amplitudes.py``.
"""

import numpy as np

from sqzcomb.comb import CombConfig, comb_energy, tooth_amplitudes

# %% Tooth amplitudes J_n(M) for two modulation depths
for depth in (2.0, 10.0):
    comb = CombConfig(carrier_nu=6534.36, depth=depth, n_teeth=33)
    amps = tooth_amplitudes(comb)
    print(f"M = {depth:g}: energy in 33 teeth = {comb_energy(amps):.12f}")
    for a in amps[:13]:
        bar = "#" * int(round(60 * a.amplitude**2))
        print(f"  n={a.n:2d}  J_n={a.amplitude:+.4f}  lower={a.lower_amplitude:+.4f}  {bar}")

# %% Where the power sits: the strong teeth span roughly -M..M
for depth in (1.0, 2.0, 5.0, 10.0):
    comb = CombConfig(carrier_nu=6534.36, depth=depth, n_teeth=65)
    power = np.array([a.amplitude**2 for a in tooth_amplitudes(comb)])
    print(f"M = {depth:4g}: strongest |n| = {int(np.argmax(power)):2d}")
