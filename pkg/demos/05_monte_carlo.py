"""Checking the analytic mean and variance against random draws.

Run with ``python demos/05_monte_carlo.py``.
"""

from sqzcomb.montecarlo import moment_suite
from sqzcomb.response import variance

# %% Twenty random operating points, 1e5 shots each
for i, point in enumerate(moment_suite(seed=2024, points=20, count=100_000)):
    c = point.check
    print(
        f"{i:2d} n={point.tooth.n:2d} s={point.comb.squeeze_s:.2f} "
        f"z_mean={c.z_mean:+.2f} z_var={c.z_var:+.2f} {'ok' if c.passed() else 'FAIL'}"
    )

# %% A deliberately wrong variance is caught at every point
bad = moment_suite(seed=2024, points=20, count=100_000, variance_fn=lambda t, c: 1.5 * variance(t, c))
print("points flagged with a 50 % variance error:", sum(not p.check.passed() for p in bad))
