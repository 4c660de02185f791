"""Per-tooth SNR with and without squeezing.

Run with ``python demos/03_snr_table.py``.
"""

from sqzcomb.cli import default_line_file
from sqzcomb.comb import CombConfig, squeeze_db_to_s
from sqzcomb.hitran import read_par
from sqzcomb.lineshape import GasConditions, line_center, sample_teeth
from sqzcomb.response import snr_table

line = read_par(default_line_file())[0]
gas = GasConditions()
centre = line_center(line, gas)
teeth = sample_teeth(line, gas, CombConfig(carrier_nu=centre))

# %% Normalised SNR per tooth for a few squeezing levels
levels = (0.0, 5.0, 10.0, 15.0)
tables = {
    db: snr_table(teeth, CombConfig(carrier_nu=centre, squeeze_s=squeeze_db_to_s(db))) for db in levels
}
print(" n " + "".join(f"{db:>10g} dB" for db in levels))
for i in range(10):
    print(f"{i:2d} " + "".join(f"{tables[db][i].snr_normalized:13.3f}" for db in levels))

# %% The gain over the coherent probe approaches exp(2s) where the gas is nearly transparent
ratio = max(a.snr_normalized / b.snr_normalized for a, b in zip(tables[15.0], tables[0.0]))
print(f"peak 15 dB / 0 dB ratio {ratio:.2f} (ideal {10 ** 1.5:.2f})")
