"""Complex Voigt response of a gas cell.

The gas acts on each comb tooth as a lossy, dispersive element with field
response ``sqrt(eta) * exp(i phi)``. Absorption comes from the real part of
the area-normalised complex Voigt profile and the phase from its imaginary
part, both built on the Faddeeva function.

Sign convention: ``z = (nu - nu_c + i gamma_L) / gamma_D`` so ``Im w`` and
hence ``phi`` are positive for ``nu`` above the (pressure-shifted) line
centre ``nu_c`` and negative below it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Union

import numpy as np

from .errors import DomainError
from .hitran import SpectralLine
from .numerics import faddeeva

if TYPE_CHECKING:
    from .comb import CombConfig

__all__ = [
    "C_CM_PER_S",
    "K_B",
    "ATM_PA",
    "AMU_KG",
    "T_REF",
    "MOLECULAR_MASS_AMU",
    "GasConditions",
    "ComplexTransmission",
    "ToothResponse",
    "molecular_mass",
    "number_density",
    "doppler_width",
    "lorentz_width",
    "line_center",
    "voigt_complex",
    "complex_transmission",
    "transmission_profile",
    "hz_to_wavenumber",
    "sample_teeth",
]

C_CM_PER_S = 2.99792458e10
K_B = 1.380649e-23  # J/K
ATM_PA = 101325.0
AMU_KG = 1.66053906660e-27
T_REF = 296.0
_SQRT_PI = math.sqrt(math.pi)

# (molecule_id, isotopologue_id) -> mass in amu, HITRAN numbering
MOLECULAR_MASS_AMU = {
    (1, 1): 18.010565,  # H2(16)O
    (2, 1): 43.989830,  # (12)C(16)O2
    (6, 1): 16.031300,  # (12)CH4
    (26, 1): 26.015650,  # (12)C2H2
    (26, 2): 27.019005,  # H(12)C(13)CH
    (26, 3): 27.021825,  # H(12)C(12)CD
}

Lines = Union[SpectralLine, Iterable[SpectralLine]]


@dataclass(frozen=True)
class GasConditions:
    """Thermodynamic state of the sample cell.

    Pressure in atm, temperature in K, path length in cm. ``mole_fraction``
    is the absorber fraction of the total pressure.
    """

    pressure_total: float = 1.0
    mole_fraction: float = 1e-3
    temperature: float = T_REF
    path_length: float = 1.0

    def __post_init__(self):
        for name in ("pressure_total", "temperature"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value}")
        if not (math.isfinite(self.path_length) and self.path_length >= 0):
            raise DomainError(f"path_length must be >= 0, got {self.path_length}")
        if not 0.0 <= self.mole_fraction <= 1.0:
            raise DomainError(f"mole_fraction must lie in [0, 1], got {self.mole_fraction}")


@dataclass(frozen=True)
class ComplexTransmission:
    sqrt_eta: float
    phi: float

    @property
    def eta(self) -> float:
        return self.sqrt_eta**2


@dataclass(frozen=True)
class ToothResponse:
    """Gas response at the symmetric tooth pair ``carrier +- n * Omega``."""

    n: int
    sqrt_eta_plus: float
    sqrt_eta_minus: float
    phi_plus: float = 0.0
    phi_minus: float = 0.0

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"tooth index must be >= 0, got {self.n}")
        for name in ("sqrt_eta_plus", "sqrt_eta_minus"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {value}")

    @property
    def eta_plus(self) -> float:
        return self.sqrt_eta_plus**2

    @property
    def eta_minus(self) -> float:
        return self.sqrt_eta_minus**2

    @property
    def delta_phi(self) -> float:
        return self.phi_plus - self.phi_minus


def molecular_mass(molecule_id: int, isotopologue_id: int) -> float:
    try:
        return MOLECULAR_MASS_AMU[(molecule_id, isotopologue_id)]
    except KeyError:
        raise DomainError(
            f"no molecular mass tabulated for molecule {molecule_id}, "
            f"isotopologue {isotopologue_id}"
        ) from None


def number_density(cond: GasConditions) -> float:
    """Absorber number density in molecules/cm^3."""
    n_m3 = cond.mole_fraction * cond.pressure_total * ATM_PA / (K_B * cond.temperature)
    return n_m3 * 1e-6


def doppler_width(line: SpectralLine, cond: GasConditions, mass_amu: float | None = None) -> float:
    """Doppler 1/e half width ``nu0 sqrt(2 k T / (m c^2))`` in cm^-1."""
    if mass_amu is None:
        mass_amu = molecular_mass(line.molecule_id, line.isotopologue_id)
    if not mass_amu > 0:
        raise DomainError(f"mass must be positive, got {mass_amu}")
    c_m = C_CM_PER_S * 1e-2
    return line.nu0 * math.sqrt(2.0 * K_B * cond.temperature / (mass_amu * AMU_KG * c_m**2))


def lorentz_width(line: SpectralLine, cond: GasConditions) -> float:
    """Pressure-broadened HWHM in cm^-1."""
    x = cond.mole_fraction
    gamma = cond.pressure_total * (line.gamma_air * (1.0 - x) + line.gamma_self * x)
    return gamma * (T_REF / cond.temperature) ** line.n_air


def line_center(line: SpectralLine, cond: GasConditions) -> float:
    """Pressure-shifted line centre in cm^-1."""
    return line.nu0 + line.delta_air * cond.pressure_total


def voigt_complex(
    line: SpectralLine, cond: GasConditions, nu: float, mass_amu: float | None = None
) -> complex:
    """Area-normalised complex Voigt profile at wavenumber ``nu`` (units of cm).

    The real part is the absorption profile and integrates to one over
    ``nu``. The imaginary part is the matching dispersion profile.
    """
    if not (math.isfinite(nu) and nu > 0):
        raise DomainError(f"wavenumber must be positive, got {nu}")
    gamma_d = doppler_width(line, cond, mass_amu)
    gamma_l = lorentz_width(line, cond)
    z = complex(nu - line_center(line, cond), gamma_l) / gamma_d
    return faddeeva(z) / (_SQRT_PI * gamma_d)


def _as_lines(lines: Lines) -> list[SpectralLine]:
    if isinstance(lines, SpectralLine):
        return [lines]
    return list(lines)


def complex_transmission(
    lines: Lines, cond: GasConditions, nu: float, mass_amu: float | None = None
) -> ComplexTransmission:
    """Field transmission at ``nu`` from Beer-Lambert with a complex Voigt profile.

    ``lines`` may be one line or several; absorbances and phases add.
    Line intensities are used as given at 296 K.
    """
    column = number_density(cond) * cond.path_length
    total = 0j
    for line in _as_lines(lines):
        if column == 0.0 or line.intensity == 0.0:
            continue
        total += line.intensity * voigt_complex(line, cond, nu, mass_amu)
    half = 0.5 * column * total
    return ComplexTransmission(sqrt_eta=math.exp(-half.real), phi=half.imag)


def transmission_profile(lines: Lines, cond: GasConditions, nu) -> tuple[np.ndarray, np.ndarray]:
    """Intensity transmission and phase on a wavenumber grid."""
    nu = np.asarray(nu, dtype=float)
    eta = np.empty_like(nu)
    phi = np.empty_like(nu)
    lines = _as_lines(lines)
    for i, value in enumerate(nu.flat):
        t = complex_transmission(lines, cond, value)
        eta.flat[i] = t.eta
        phi.flat[i] = t.phi
    return eta, phi


def hz_to_wavenumber(freq_hz: float) -> float:
    return freq_hz / C_CM_PER_S


def sample_teeth(lines: Lines, cond: GasConditions, comb: "CombConfig") -> list[ToothResponse]:
    """Gas response at every tooth pair of ``comb``, n = 0 .. n_max."""
    lines = _as_lines(lines)
    spacing = hz_to_wavenumber(comb.omega_mod_hz)
    teeth = []
    for n in range(comb.n_max + 1):
        upper = complex_transmission(lines, cond, comb.carrier_nu + n * spacing)
        if n == 0:
            lower = upper
        else:
            lower = complex_transmission(lines, cond, comb.carrier_nu - n * spacing)
        teeth.append(
            ToothResponse(
                n=n,
                sqrt_eta_plus=upper.sqrt_eta,
                sqrt_eta_minus=lower.sqrt_eta,
                phi_plus=upper.phi,
                phi_minus=lower.phi,
            )
        )
    return teeth
