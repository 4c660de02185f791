"""Special-function kernels: integer-order Bessel J and the Faddeeva function.

Both are written out here rather than pulled from scipy so the package core
only needs numpy. The test-suite checks them against independent oracles
(high-precision power series and direct quadrature).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

__all__ = ["MAX_ORDER", "bessel_j", "faddeeva", "faddeeva_array"]

MAX_ORDER = 512

_SMALL_ARG = 1e-3
_BIG = 1e250
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def _bessel_series(n: int, m: float) -> float:
    # n >= 0, m small: terms shrink like (m/2)^2k / (k! (k+n)!)
    half = 0.5 * m
    if half == 0.0:
        return 1.0 if n == 0 else 0.0
    log_lead = n * math.log(half) - math.lgamma(n + 1)
    if log_lead < -745.0:
        return 0.0
    term = math.exp(log_lead)
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total


def _bessel_miller(n: int, m: float) -> float:
    # Downward recurrence J_{k-1} = (2k/m) J_k - J_{k+1}, normalised with
    # J_0 + 2 sum_{k>=1} J_{2k} = 1.
    top = max(n, m)
    start = int(top + 30 + 10 * math.sqrt(top))
    start += start % 2
    two_over_m = 2.0 / m
    j_next = 0.0
    j_cur = 1e-300
    norm = 0.0
    wanted = 0.0
    for k in range(start, 0, -1):
        j_prev = k * two_over_m * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur now holds J_{k-1}
        if k - 1 == n:
            wanted = j_cur
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
        if abs(j_cur) > _BIG:
            j_cur /= _BIG
            j_next /= _BIG
            norm /= _BIG
            wanted /= _BIG
    norm += j_cur
    return wanted / norm


def bessel_j(n: int, m: float) -> float:
    """Bessel function of the first kind J_n(m) for integer order.

    Parameters
    ----------
    n : int
        Signed order, ``|n| <= 512``.
    m : float
        Argument (the modulation depth), finite and non-negative.

    Returns
    -------
    float
        ``J_n(m)``. Negative orders use ``J_{-n} = (-1)^n J_n`` exactly.
    """
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"Bessel order must be an integer, got {n!r}")
    n = int(n)
    if abs(n) > MAX_ORDER:
        raise DomainError(f"Bessel order |n|={abs(n)} exceeds {MAX_ORDER}")
    m = float(m)
    if not math.isfinite(m) or m < 0.0:
        raise DomainError(f"Bessel argument must be finite and >= 0, got {m}")
    k = abs(n)
    if m < _SMALL_ARG:
        value = _bessel_series(k, m)
    else:
        value = _bessel_miller(k, m)
    if n < 0 and k % 2 == 1:
        return -value
    return value


def faddeeva(z: complex) -> complex:
    """Faddeeva function w(z) = exp(-z^2) erfc(-iz) in the closed upper half plane.

    Region-switched evaluation after Poppe and Wijers: a Taylor series with
    an ``h``-shifted continued fraction close to the origin and the Laplace
    continued fraction further out. Accuracy is around 1e-13 relative to
    ``|w(z)|``.
    """
    z = complex(z)
    x, y = z.real, z.imag
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError(f"faddeeva needs a finite argument, got {z}")
    if y < 0.0:
        raise DomainError(f"faddeeva is only provided for Im z >= 0, got {z}")

    xabs = abs(x)
    xs = xabs / 6.3
    ys = y / 4.4
    qrho = xs * xs + ys * ys
    xquad = xabs * xabs - y * y
    yquad = 2.0 * xabs * y

    if qrho < 0.085264:
        # power series around the origin
        qrho = (1.0 - 0.85 * ys) * math.sqrt(qrho)
        nterms = int(round(6.0 + 72.0 * qrho))
        j = 2 * nterms + 1
        xsum = 1.0 / j
        ysum = 0.0
        for i in range(nterms, 0, -1):
            j -= 2
            xaux = (xsum * xquad - ysum * yquad) / i
            ysum = (xsum * yquad + ysum * xquad) / i
            xsum = xaux + 1.0 / j
        u1 = -_TWO_OVER_SQRT_PI * (xsum * y + ysum * xabs) + 1.0
        v1 = _TWO_OVER_SQRT_PI * (xsum * xabs - ysum * y)
        daux = math.exp(-xquad)
        u2 = daux * math.cos(yquad)
        v2 = -daux * math.sin(yquad)
        u = u1 * u2 - v1 * v2
        v = u1 * v2 + v1 * u2
    else:
        if qrho > 1.0:
            h = 0.0
            kapn = 0
            qrho = math.sqrt(qrho)
            nu = int(3 + 1442 / (26 * qrho + 77))
        else:
            qrho = (1.0 - ys) * math.sqrt(1.0 - qrho)
            h = 1.88 * qrho
            kapn = int(round(7 + 34 * qrho))
            nu = int(round(16 + 26 * qrho))
        h2 = 2.0 * h
        qlambda = h2**kapn if h > 0.0 else 0.0
        rx = ry = sx = sy = 0.0
        for k in range(nu, -1, -1):
            kp1 = k + 1
            tx = y + h + kp1 * rx
            ty = xabs - kp1 * ry
            c = 0.5 / (tx * tx + ty * ty)
            rx = c * tx
            ry = c * ty
            if h > 0.0 and k <= kapn:
                tx = qlambda + sx
                sx = rx * tx - ry * sy
                sy = ry * tx + rx * sy
                qlambda /= h2
        if h == 0.0:
            u = _TWO_OVER_SQRT_PI * rx
            v = _TWO_OVER_SQRT_PI * ry
        else:
            u = _TWO_OVER_SQRT_PI * sx
            v = _TWO_OVER_SQRT_PI * sy
        if y == 0.0:
            u = math.exp(-xabs * xabs)

    if x < 0.0:
        v = -v
    return complex(u, v)


def faddeeva_array(z) -> np.ndarray:
    """Elementwise :func:`faddeeva` over an array-like of complex numbers."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    flat_in = z.ravel()
    flat_out = out.ravel()
    for i, value in enumerate(flat_in):
        flat_out[i] = faddeeva(value)
    return out
