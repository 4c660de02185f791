"""Quantum-enhanced absorption spectroscopy with bright squeezed frequency combs.

Numerical model of a squeezed, phase-modulated probe read out by balanced
homodyne detection: comb synthesis, gas line response, analytic spectral
power and noise, transmission recovery and a Monte Carlo cross-check.
"""

__version__ = "0.1.0"

from .comb import CombConfig, ToothAmplitude, squeeze_db_to_s, tooth_amplitudes
from .errors import (
    DomainError,
    HitranError,
    HitranFieldError,
    HitranFormatError,
    InconsistentTraceError,
    NotModeledError,
    OutOfRegimeError,
    SqzCombError,
)
from .hitran import LineList, SpectralLine, parse_record, read_par, select_window
from .inversion import (
    PhaseSweepTrace,
    RecoveredTransmission,
    extract_quadratures,
    recover_transmission,
)
from .lineshape import (
    ComplexTransmission,
    GasConditions,
    ToothResponse,
    complex_transmission,
    sample_teeth,
    voigt_complex,
)
from .montecarlo import NoiseBudget, SampleBatch, draw_powers, noise_budget, noisy_trace
from .numerics import bessel_j, faddeeva
from .response import (
    SpectrumRow,
    classical_power,
    lo_extrema,
    mean_power,
    snr_table,
    variance,
    variance_tms,
)
