"""Analytic homodyne spectral power, noise and SNR for one tooth pair.

Conventions
-----------
* ``delta_phi_lo`` is the LO phase measured from the upper tooth,
  ``phi_plus - phi_LO``.
* ``delta_phi`` is the dispersion difference ``phi_plus - phi_minus``.
* The n = 0 bin holds a single tooth (the carrier), so it is counted once:
  its classical power is ``kappa^2 eta_0 cos^2(delta_phi_lo)`` and the noise
  terms use ``eta_0`` and ``1 - eta_0`` instead of pair sums.

The two-mode-squeezing variance uses its closed form unchanged. Its
``J_n^4`` bracket ``3 (eta_+ + eta_-)^4 - (...)^2`` does not reduce to the
single-mode term at s = 0 and turns negative for transmissions below about
0.58, so the variance is smallest at s = 0 only at high transmission.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .comb import CombConfig
from .errors import DomainError, OutOfRegimeError
from .lineshape import ToothResponse
from .numerics import bessel_j

__all__ = [
    "DISPERSION_WARN",
    "DISPERSION_LIMIT",
    "OutOfRegimeWarning",
    "SpectrumRow",
    "classical_power_terms",
    "classical_power",
    "quadrature_powers",
    "lo_extrema",
    "extremum_shift_exact",
    "pair_sums",
    "tms_bracket",
    "mean_power",
    "variance",
    "variance_tms",
    "advantage",
    "snr_table",
]

DISPERSION_WARN = 0.05
DISPERSION_LIMIT = 0.3


class OutOfRegimeWarning(UserWarning):
    """Dispersion difference is large enough to strain the weak-dispersion expansion."""


def _check_regime(delta_phi, warn: bool = True) -> bool:
    worst = float(np.max(np.abs(delta_phi)))
    if worst > DISPERSION_LIMIT:
        raise OutOfRegimeError(
            f"|delta_phi| = {worst:.3g} exceeds {DISPERSION_LIMIT}; "
            "the weak-dispersion spectral density is not valid there"
        )
    flagged = worst > DISPERSION_WARN
    if flagged and warn:
        warnings.warn(
            f"|delta_phi| = {worst:.3g} > {DISPERSION_WARN}: weak-dispersion result is approximate",
            OutOfRegimeWarning,
            stacklevel=3,
        )
    return flagged


def _lattice_trig(t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """cos t, sin t, sin 2t with exact values on the m*pi/2 lattice."""
    quarter = np.rint(t / (0.5 * math.pi))
    on_lattice = np.abs(t - quarter * (0.5 * math.pi)) <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(t))
    q = np.mod(quarter, 4).astype(int)
    cos_t = np.where(on_lattice, np.choose(q, [1.0, 0.0, -1.0, 0.0]), np.cos(t))
    sin_t = np.where(on_lattice, np.choose(q, [0.0, 1.0, 0.0, -1.0]), np.sin(t))
    sin_2t = np.where(on_lattice, 0.0, np.sin(2.0 * t))
    return cos_t, sin_t, sin_2t


def classical_power_terms(
    sqrt_eta_plus, sqrt_eta_minus, n: int, kappa, delta_phi_lo, delta_phi=0.0, *, warn: bool = True
):
    """Classical spectral power ``|I_n|^2`` from raw numbers (array friendly).

    For n > 0 this is the weak-dispersion expansion

        kappa^2 { cos^2(t) [a + p b]^2 + sin^2(t) [a - p b]^2
                  + 2 p sin(2t) delta_phi a b }

    with ``a, b = sqrt_eta_plus, sqrt_eta_minus``, ``p = (-1)^n`` and
    ``t = delta_phi_lo``.
    """
    _check_regime(delta_phi, warn=warn)
    a = np.asarray(sqrt_eta_plus, dtype=float)
    b = np.asarray(sqrt_eta_minus, dtype=float)
    t = np.asarray(delta_phi_lo, dtype=float)
    k2 = np.asarray(kappa, dtype=float) ** 2
    cos_t, sin_t, sin_2t = _lattice_trig(t)
    if n == 0:
        out = k2 * a * a * cos_t * cos_t
    else:
        p = 1.0 if n % 2 == 0 else -1.0
        out = k2 * (
            cos_t * cos_t * (a + p * b) ** 2
            + sin_t * sin_t * (a - p * b) ** 2
            + 2.0 * p * sin_2t * delta_phi * a * b
        )
    return out[()] if out.ndim == 0 else out


def classical_power(
    tooth: ToothResponse, kappa: float, delta_phi_lo: float, delta_phi: float | None = None
) -> float:
    """Classical spectral power of ``tooth`` at LO phase ``delta_phi_lo``.

    ``delta_phi`` defaults to the tooth's own dispersion difference.
    """
    if delta_phi is None:
        delta_phi = tooth.delta_phi
    return float(
        classical_power_terms(
            tooth.sqrt_eta_plus, tooth.sqrt_eta_minus, tooth.n, kappa, delta_phi_lo, delta_phi
        )
    )


def quadrature_powers(tooth: ToothResponse, kappa: float) -> tuple[float, float]:
    """Classical power at the X (delta_phi_lo = 0) and P (pi/2) lattice points.

    The dispersion term vanishes at both, so ``delta_phi`` is not needed.
    """
    a, b, n = tooth.sqrt_eta_plus, tooth.sqrt_eta_minus, tooth.n
    if n == 0:
        return kappa**2 * a * a, 0.0
    p = 1.0 if n % 2 == 0 else -1.0
    return kappa**2 * (a + p * b) ** 2, kappa**2 * (a - p * b) ** 2


def lo_extrema(eta_plus: float, eta_minus: float, delta_phi: float, n: int = 0) -> tuple[float, float]:
    """LO phases of maximum and minimum classical power, shifted by dispersion.

    Both extrema move off the ``m pi/2`` lattice by

        0.5 * atan(2 delta_phi / (1 + sqrt(eta_plus / eta_minus)))

    The maximum sits near ``m pi`` (X quadrature) for even ``n`` and near
    ``(m + 1/2) pi`` (P quadrature) for odd ``n``. Returned phases use m = 0.

    Differentiating the weak-dispersion power directly gives the shift
    ``0.5 * atan(delta_phi)`` for any transmission ratio (see
    :func:`extremum_shift_exact`); the two agree when eta_plus == eta_minus
    and differ at second order in the transmission imbalance otherwise.
    """
    for name, value in (("eta_plus", eta_plus), ("eta_minus", eta_minus)):
        if not 0.0 < value <= 1.0:
            raise DomainError(f"{name} must lie in (0, 1], got {value}")
    shift = 0.5 * math.atan(2.0 * delta_phi / (1.0 + math.sqrt(eta_plus / eta_minus)))
    if n % 2 == 0:
        return shift, shift + 0.5 * math.pi
    return shift + 0.5 * math.pi, shift


def extremum_shift_exact(delta_phi: float) -> float:
    """Stationary-point shift of the weak-dispersion power, ``0.5 atan(delta_phi)``."""
    return 0.5 * math.atan(delta_phi)


def pair_sums(tooth: ToothResponse) -> tuple[float, float]:
    """(transmitted sum, lost sum) over the teeth in the bin."""
    if tooth.n == 0:
        return tooth.eta_plus, 1.0 - tooth.eta_plus
    total = tooth.eta_plus + tooth.eta_minus
    return total, 2.0 - total


def mean_power(
    tooth: ToothResponse, comb: CombConfig, delta_phi_lo: float = 0.0, classical: float | None = None
) -> float:
    """Total mean spectral power: classical part plus squeezed, sample-loss
    and detector-loss vacuum contributions."""
    if classical is None:
        classical = classical_power(tooth, comb.kappa(tooth.n), delta_phi_lo)
    jn = bessel_j(tooth.n, comb.depth)
    kept, lost = pair_sums(tooth)
    b2 = comb.beta_mag**2
    return (
        classical
        + b2 * jn * jn * comb.eta_d * kept * math.exp(-2.0 * comb.squeeze_s)
        + b2 * comb.eta_d * lost
        + (1.0 - comb.eta_d)
    )


def variance(tooth: ToothResponse, comb: CombConfig) -> float:
    """Variance of the spectral power for a single-mode squeezed probe."""
    jn = bessel_j(tooth.n, comb.depth)
    kept, lost = pair_sums(tooth)
    b4 = comb.beta_mag**4
    return (
        2.0
        * b4
        * comb.eta_d**2
        * (jn**4 * kept**2 * math.exp(-4.0 * comb.squeeze_s) + lost**2)
        + 2.0 * (1.0 - comb.eta_d) ** 2
    )


def tms_bracket(eta_plus: float, eta_minus: float) -> float:
    """``3 (eta_+ + eta_-)^4 - (eta_+ + eta_- + 2 sqrt(eta_+ eta_-))^2``."""
    total = eta_plus + eta_minus
    return 3.0 * total**4 - (total + 2.0 * math.sqrt(eta_plus * eta_minus)) ** 2


def variance_tms(tooth: ToothResponse, comb: CombConfig) -> float:
    """Variance when the symmetric teeth are two-mode squeezed instead."""
    if tooth.n == 0:
        raise DomainError("two-mode squeezing pairs symmetric teeth; n = 0 has no partner")
    jn = bessel_j(tooth.n, comb.depth)
    _, lost = pair_sums(tooth)
    bracket = tms_bracket(tooth.eta_plus, tooth.eta_minus)
    return (
        2.0
        * comb.beta_mag**4
        * comb.eta_d**2
        * (jn**4 * bracket * math.cosh(2.0 * comb.squeeze_s) ** 2 + lost**2)
        + 2.0 * (1.0 - comb.eta_d) ** 2
    )


def _with_squeezing(comb: CombConfig, s: float) -> CombConfig:
    params = asdict(comb)
    params["squeeze_s"] = s
    return CombConfig(**params)


def advantage(tooth: ToothResponse, comb: CombConfig) -> float:
    """Noise reduction ``Delta S_SQL / Delta S`` relative to an unsqueezed probe."""
    sql = variance(tooth, _with_squeezing(comb, 0.0))
    return math.sqrt(sql / variance(tooth, comb))


@dataclass(frozen=True)
class SpectrumRow:
    n: int
    squeeze_db: float
    eta_plus: float
    eta_minus: float
    delta_phi: float
    kappa: float
    classical_power: float
    mean_power: float
    variance: float
    snr: float
    snr_normalized: float
    advantage: float
    out_of_regime: bool

    def as_dict(self) -> dict:
        return asdict(self)


def snr_table(teeth: Iterable[ToothResponse], comb: CombConfig) -> list[SpectrumRow]:
    """One :class:`SpectrumRow` per tooth pair.

    The signal is the classical power at the brighter of the two quadrature
    lattice points (X for even n, P for odd n near line centre), and
    ``snr = <S> / Delta S``. ``snr_normalized`` divides by ``|alpha|``.
    """
    sql_comb = _with_squeezing(comb, 0.0)
    rows = []
    for tooth in teeth:
        flagged = _check_regime(tooth.delta_phi, warn=False)
        kappa = comb.kappa(tooth.n)
        signal = max(quadrature_powers(tooth, kappa))
        mean = mean_power(tooth, comb, classical=signal)
        var = variance(tooth, comb)
        snr = mean / math.sqrt(var) if var > 0 else math.inf
        ratio = math.sqrt(variance(tooth, sql_comb) / var) if var > 0 else math.inf
        rows.append(
            SpectrumRow(
                n=tooth.n,
                squeeze_db=comb.squeeze_db,
                eta_plus=tooth.eta_plus,
                eta_minus=tooth.eta_minus,
                delta_phi=tooth.delta_phi,
                kappa=kappa,
                classical_power=signal,
                mean_power=mean,
                variance=var,
                snr=snr,
                snr_normalized=snr / comb.alpha_mag if comb.alpha_mag > 0 else math.nan,
                advantage=ratio,
                out_of_regime=flagged,
            )
        )
    return rows
