"""Recover per-sideband transmission from an LO phase sweep.

A sweep of the LO phase traces ``a cos^2(t) + b sin^2(t)`` (plus a small
dispersion term odd about the quadrature points). A linear least-squares
fit gives ``a`` and ``b``; their square roots are the X and P quadrature
amplitudes, and

    sqrt(eta_+) = |I_X + I_P| / (2 kappa),   sqrt(eta_-) = |I_X - I_P| / (2 kappa)

once ``I_X`` and ``I_P`` carry their signs. A power trace only fixes
magnitudes. The bright quadrature (X for even n, P for odd n) is
non-negative. The sign of the dark one equals ``sign(sqrt(eta_+) -
sqrt(eta_-))``, i.e. which sideband transmits more, and cannot be read from
the trace. It must come from outside (the carrier position relative to the
line, a model prediction). Without it the upper sideband is taken as the
more transmissive one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InconsistentTraceError

__all__ = [
    "PhaseSweepTrace",
    "QuadratureFit",
    "RecoveredTransmission",
    "fit_quadratures",
    "extract_quadratures",
    "signed_quadratures",
    "recover_transmission",
    "calibrate_kappa",
    "invert_trace",
    "transmission_errors",
]

NOISE_SIGMAS = 5.0
# fitted powers below this fraction of the trace scale are round-off
ROUNDOFF = 16 * np.finfo(float).eps


@dataclass(frozen=True)
class PhaseSweepTrace:
    """Classical spectral power sampled while the LO phase is swept."""

    phases: np.ndarray
    powers: np.ndarray
    n: int

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=float)
        powers = np.asarray(self.powers, dtype=float)
        if phases.ndim != 1 or phases.shape != powers.shape:
            raise ValueError("phases and powers must be 1-D arrays of equal length")
        if phases.size < 16:
            raise ValueError(f"a trace needs at least 16 samples, got {phases.size}")
        if np.any(np.diff(phases) <= 0):
            raise ValueError("phases must be strictly increasing")
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "powers", powers)


@dataclass(frozen=True)
class QuadratureFit:
    """Least-squares fit of ``a cos^2 + b sin^2`` with parameter covariance."""

    a: float
    b: float
    cov: np.ndarray
    residual_rms: float

    @property
    def i_x(self) -> float:
        return math.sqrt(max(self.a, 0.0))

    @property
    def i_p(self) -> float:
        return math.sqrt(max(self.b, 0.0))

    @property
    def se_a(self) -> float:
        return math.sqrt(self.cov[0, 0])

    @property
    def se_b(self) -> float:
        return math.sqrt(self.cov[1, 1])

    def amplitude_errors(self) -> tuple[float, float]:
        """Standard errors of ``i_x`` and ``i_p``.

        Delta method ``se / (2 sqrt(value))``; near zero power, where the
        square root stops being linear, this saturates at ``sqrt(se)``.
        """

        def one(value, se):
            if se == 0.0:
                return 0.0
            return se / (2.0 * math.sqrt(max(value, 0.25 * se)))

        return one(self.a, self.se_a), one(self.b, self.se_b)


@dataclass(frozen=True)
class RecoveredTransmission:
    sqrt_eta_plus: float
    sqrt_eta_minus: float
    i_x: float
    i_p: float
    clamped: bool = False


def fit_quadratures(trace: PhaseSweepTrace, background: float = 0.0) -> QuadratureFit:
    """Fit the LO sweep after subtracting a constant ``background``.

    ``background`` is the noise floor (mean power with no probe light).
    It cannot be separated from ``a`` and ``b`` by the fit itself because
    ``cos^2 + sin^2 = 1``.
    """
    c2 = np.cos(trace.phases) ** 2
    design = np.column_stack([c2, 1.0 - c2])
    y = trace.powers - background
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 2:
        raise InconsistentTraceError("phase grid does not separate the two quadratures")
    resid = y - design @ coef
    dof = max(y.size - 2, 1)
    sigma2 = float(resid @ resid) / dof
    cov = sigma2 * np.linalg.inv(design.T @ design)
    scale = float(np.max(np.abs(y))) if y.size else 0.0
    coef = np.where(np.abs(coef) <= ROUNDOFF * scale, 0.0, coef)
    fit = QuadratureFit(a=float(coef[0]), b=float(coef[1]), cov=cov, residual_rms=math.sqrt(sigma2))
    for name, value, se in (("a", fit.a, fit.se_a), ("b", fit.b, fit.se_b)):
        if value < -(NOISE_SIGMAS * se):
            raise InconsistentTraceError(
                f"fitted quadrature power {name} = {value:.4g} is negative beyond noise (se {se:.3g})"
            )
    return fit


def extract_quadratures(trace: PhaseSweepTrace, background: float = 0.0) -> tuple[float, float]:
    """Magnitudes ``(i_x, i_p)`` of the X and P quadrature amplitudes."""
    fit = fit_quadratures(trace, background)
    return fit.i_x, fit.i_p


def signed_quadratures(i_x: float, i_p: float, n: int, upper_brighter: bool = True) -> tuple[float, float]:
    """Attach signs to quadrature magnitudes.

    ``upper_brighter`` says whether the upper sideband transmits at least as
    much as the lower one; it sets the sign of the dark quadrature.
    """
    sign = 1.0 if upper_brighter else -1.0
    if n % 2 == 0:
        return abs(i_x), sign * abs(i_p)
    return sign * abs(i_x), abs(i_p)


def recover_transmission(
    i_x: float, i_p: float, kappa: float, n: int, upper_brighter: bool = True
) -> RecoveredTransmission:
    """Sideband amplitude transmissions from quadrature amplitudes.

    ``i_x`` and ``i_p`` may be magnitudes or already signed; signs are set
    from the parity of ``n`` and ``upper_brighter``. Results above one
    (sampling noise near full transmission) are clamped and flagged.
    """
    if not kappa > 0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    if n == 0:
        plus = minus = abs(i_x) / kappa
    else:
        sx, sp = signed_quadratures(i_x, i_p, n, upper_brighter)
        plus = abs(sx + sp) / (2.0 * kappa)
        minus = abs(sx - sp) / (2.0 * kappa)
    # excess at the round-off level is not worth a flag
    clamped = bool(max(plus, minus) > 1.0 + ROUNDOFF)
    return RecoveredTransmission(
        sqrt_eta_plus=min(plus, 1.0),
        sqrt_eta_minus=min(minus, 1.0),
        i_x=i_x,
        i_p=i_p,
        clamped=clamped,
    )


def calibrate_kappa(trace: PhaseSweepTrace, background: float = 0.0) -> float:
    """kappa from a reference sweep with an empty cell (eta = 1 at every tooth).

    The bright quadrature then equals ``2 kappa`` (``kappa`` for n = 0).
    """
    i_x, i_p = extract_quadratures(trace, background)
    bright = max(i_x, i_p)
    return bright if trace.n == 0 else 0.5 * bright


def invert_trace(
    trace: PhaseSweepTrace, kappa: float, background: float = 0.0, upper_brighter: bool = True
) -> RecoveredTransmission:
    i_x, i_p = extract_quadratures(trace, background)
    return recover_transmission(i_x, i_p, kappa, trace.n, upper_brighter)


def transmission_errors(
    fit: QuadratureFit, n: int, kappa: float, upper_brighter: bool = True, background_se: float = 0.0
) -> tuple[float, float]:
    """Standard errors of the recovered ``(sqrt_eta_plus, sqrt_eta_minus)``.

    First-order propagation through the square roots using the full fit
    covariance. ``background_se`` is the uncertainty of the subtracted noise
    floor, which shifts ``a`` and ``b`` together. Near zero power the square
    root derivative is capped as in :meth:`QuadratureFit.amplitude_errors`.

    When a quadrature power is consistent with zero (a symmetric pair) the
    amplitude estimate is biased and non-Gaussian and these errors are too
    small; judge that quadrature by its fitted power and ``se`` instead.
    """
    cov = np.array(fit.cov, dtype=float) + background_se**2 * np.ones((2, 2))

    def slope(value, var):
        return 0.5 / math.sqrt(max(value, 0.25 * math.sqrt(var), 1e-300))

    gx, gp = slope(fit.a, cov[0, 0]), slope(fit.b, cov[1, 1])
    if n == 0:
        se = math.sqrt(gx * gx * cov[0, 0]) / kappa
        return se, se
    sx, sp = signed_quadratures(1.0, 1.0, n, upper_brighter)
    out = []
    for sign in (1.0, -1.0):
        grad = np.array([sx * gx, sign * sp * gp])
        out.append(math.sqrt(max(grad @ cov @ grad, 0.0)) / (2.0 * kappa))
    return out[0], out[1]
