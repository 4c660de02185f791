"""Probe and local-oscillator configuration, and the Bessel comb it produces."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NotModeledError
from .numerics import bessel_j

__all__ = [
    "CombConfig",
    "ToothAmplitude",
    "tooth_amplitudes",
    "comb_energy",
    "squeeze_db_to_s",
    "s_to_squeeze_db",
]


def squeeze_db_to_s(level_db: float) -> float:
    """Squeezing factor ``s`` for a noise-power reduction of ``level_db`` dB.

    Uses ``exp(2 s) = 10**(level_db / 10)``, so 13 dB gives s = 1.497.
    """
    level_db = float(level_db)
    if not (math.isfinite(level_db) and level_db >= 0.0):
        raise DomainError(f"squeezing level must be >= 0 dB, got {level_db}")
    return level_db * math.log(10.0) / 20.0


def s_to_squeeze_db(s: float) -> float:
    return 20.0 * s / math.log(10.0)


@dataclass(frozen=True)
class CombConfig:
    """Squeezed, phase-modulated probe plus the homodyne local oscillator.

    Parameters
    ----------
    carrier_nu : float
        Carrier wavenumber in cm^-1.
    omega_mod_hz : float
        Modulation frequency in Hz (tooth spacing).
    depth : float
        Phase-modulation depth M.
    n_teeth : int
        Odd number of teeth: the carrier plus ``(n_teeth - 1) / 2`` pairs.
    squeeze_s : float
        Squeezing factor s >= 0.
    squeeze_theta : float
        Squeezing angle. Only 0 (squeezed quadrature aligned with the
        measured amplitude quadrature) is modelled.
    alpha_mag, beta_mag : float
        Coherent probe and LO amplitudes.
    eta_d : float
        Detector efficiency in (0, 1].
    """

    carrier_nu: float
    omega_mod_hz: float = 500e6
    depth: float = 2.0
    n_teeth: int = 33
    squeeze_s: float = 0.0
    squeeze_theta: float = 0.0
    alpha_mag: float = 1e3
    beta_mag: float = 1e3
    eta_d: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.carrier_nu) and self.carrier_nu > 0):
            raise DomainError(f"carrier_nu must be positive, got {self.carrier_nu}")
        if not (math.isfinite(self.omega_mod_hz) and self.omega_mod_hz > 0):
            raise DomainError(f"omega_mod_hz must be positive, got {self.omega_mod_hz}")
        if not (math.isfinite(self.depth) and self.depth >= 0):
            raise DomainError(f"modulation depth must be >= 0, got {self.depth}")
        if int(self.n_teeth) != self.n_teeth or self.n_teeth < 1 or self.n_teeth % 2 == 0:
            raise DomainError(f"n_teeth must be an odd integer >= 1, got {self.n_teeth}")
        if (self.n_teeth - 1) // 2 > 512:
            raise DomainError("at most 512 tooth pairs are supported")
        if not (math.isfinite(self.squeeze_s) and self.squeeze_s >= 0):
            raise DomainError(f"squeeze_s must be >= 0, got {self.squeeze_s}")
        if self.squeeze_theta != 0.0:
            raise NotModeledError(
                "squeezing angle misaligned with the amplitude quadrature is not modelled; "
                "the analytic noise formulas assume squeeze_theta = 0"
            )
        if not 0.0 < self.eta_d <= 1.0:
            raise DomainError(f"eta_d must lie in (0, 1], got {self.eta_d}")
        if not (self.alpha_mag >= 0 and self.beta_mag >= 0):
            raise DomainError("alpha_mag and beta_mag must be >= 0")

    @property
    def n_max(self) -> int:
        return (self.n_teeth - 1) // 2

    @property
    def squeeze_db(self) -> float:
        return s_to_squeeze_db(self.squeeze_s)

    def kappa(self, n: int) -> float:
        """Signal normalisation ``sqrt(eta_d) |alpha beta| |J_n(M)|``.

        The sign of ``J_n`` drops out of every power, so kappa is kept >= 0.
        """
        return math.sqrt(self.eta_d) * self.alpha_mag * self.beta_mag * abs(bessel_j(n, self.depth))


@dataclass(frozen=True)
class ToothAmplitude:
    n: int
    amplitude: float
    parity_factor: int

    @property
    def lower_amplitude(self) -> float:
        """Signed amplitude of the tooth at ``-n``."""
        return self.parity_factor * self.amplitude


def tooth_amplitudes(comb: CombConfig) -> list[ToothAmplitude]:
    """``J_n(M)`` for n = 0 .. n_max with the ``(-1)^n`` lower-sideband factor."""
    return [
        ToothAmplitude(n=n, amplitude=bessel_j(n, comb.depth), parity_factor=(-1) ** n)
        for n in range(comb.n_max + 1)
    ]


def comb_energy(amplitudes: list[ToothAmplitude]) -> float:
    """Fraction of carrier power carried by the listed teeth (both sidebands)."""
    total = 0.0
    for tooth in amplitudes:
        weight = 1.0 if tooth.n == 0 else 2.0
        total += weight * tooth.amplitude**2
    return total
