"""Acetylene P(9) line at 1 atm: transmission and phase seen by the comb.

Run with ``python demos/02_line_profile.py``.
"""

import numpy as np

from sqzcomb.cli import default_line_file
from sqzcomb.comb import CombConfig
from sqzcomb.hitran import read_par
from sqzcomb.lineshape import (
    GasConditions,
    doppler_width,
    line_center,
    lorentz_width,
    sample_teeth,
    transmission_profile,
)

line = read_par(default_line_file())[0]
gas = GasConditions(pressure_total=1.0, mole_fraction=1e-3, temperature=296.0, path_length=1.0)

# %% Widths decide the shape: pressure broadening dominates at 1 atm
print(f"nu0 = {line.nu0} cm^-1, S = {line.intensity:.3e}")
print(f"Doppler 1/e half width {doppler_width(line, gas):.5f} cm^-1")
print(f"Lorentz HWHM          {lorentz_width(line, gas):.5f} cm^-1")

# %% The dip and its dispersion partner across +-0.3 cm^-1
centre = line_center(line, gas)
nu = centre + np.linspace(-0.3, 0.3, 13)
eta, phi = transmission_profile(line, gas, nu)
for x, e, p in zip(nu - centre, eta, phi):
    print(f"  {x:+.3f}  eta={e:.6f}  phi={p:+.2e}")

# %% What each tooth pair sees with the carrier on the line
comb = CombConfig(carrier_nu=centre, omega_mod_hz=500e6, n_teeth=33)
teeth = sample_teeth(line, gas, comb)
print("largest |delta_phi| over the comb:", max(abs(t.delta_phi) for t in teeth))
for t in teeth[:6]:
    print(f"  n={t.n}  eta+={t.eta_plus:.6f}  eta-={t.eta_minus:.6f}")
