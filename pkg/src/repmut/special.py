"""Special functions used by the explicit formulas.

Three pieces live here:

* :func:`erf_upper`, the *unnormalised* upper Gaussian tail
  ``Erf(theta) = int_theta^inf exp(-z**2/2) dz``.  This is not the usual
  ``erf``; the sqrt(2) convention is folded in here and nowhere else.
* :func:`airy_ai`, the Airy function Ai on ``|x| <= 50``.
* :func:`heat_kernel`, the fundamental solution of ``w_t = w_xx``.

The Airy evaluator combines power series and asymptotic expansions:

====================  ==============================================
region                method
====================  ==============================================
``|x| <= 2``          Maclaurin series
``2 < x <= C``        Taylor continuation of ``y'' = x y`` started at
                      ``x = C`` from the asymptotic expansion and
                      stepped towards the origin
``-C <= x < -2``      Taylor continuation started at ``x = -2``
``|x| > C``           asymptotic expansions (DLMF 9.7.5, 9.7.9)
====================  ==============================================

``C`` is :attr:`SpecialFnConfig.series_cutoff`.  On the positive axis
the continuation runs from large to small ``x``, the direction in which
Ai is the dominant solution, so relative accuracy is preserved; summing
the Maclaurin series out to ``x = 6`` would instead lose eight digits to
cancellation against Bi.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate, special

from .errors import DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)

# Ai(0) and -Ai'(0)
_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)

_INNER = 2.0
_MAX_STEP = 0.5
_TAYLOR_TERMS = 48
AIRY_RANGE = 50.0


@dataclass(frozen=True)
class SpecialFnConfig:
    """Tuning knobs for the special functions.

    Attributes
    ----------
    series_cutoff : float
        ``|x|`` beyond which Ai switches to asymptotic expansions.
    quad_tol : float
        Tolerance used by the quadrature-based reference evaluators.
    """

    series_cutoff: float = 10.0
    quad_tol: float = 1e-12

    def __post_init__(self):
        if not self.series_cutoff > _INNER:
            raise ValueError(f"series_cutoff must exceed {_INNER}")
        if not 0.0 < self.quad_tol < 1.0:
            raise ValueError("quad_tol must lie in (0, 1)")


DEFAULT_CONFIG = SpecialFnConfig()


def erf_upper(theta):
    """Upper Gaussian tail ``int_theta^inf exp(-z**2/2) dz``.

    Equals ``sqrt(2*pi) * Phi(-theta)`` with ``Phi`` the standard normal
    CDF.  Accepts scalars or arrays.
    """
    return SQRT_2PI * special.ndtr(-np.asarray(theta, dtype=float))


def log_erf_upper(theta):
    """Natural log of :func:`erf_upper`, finite for every real ``theta``."""
    return 0.5 * math.log(2.0 * math.pi) + special.log_ndtr(
        -np.asarray(theta, dtype=float))


def heat_kernel(t, x, y):
    """Heat kernel ``(4 pi t)**-0.5 * exp(-(x - y)**2 / (4 t))``."""
    return np.exp(log_heat_kernel(t, x, y))


def log_heat_kernel(t, x, y):
    if np.any(np.asarray(t) <= 0):
        raise DomainError("heat kernel needs t > 0")
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    return -0.5 * np.log(4.0 * np.pi * t) - d * d / (4.0 * t)


# --------------------------------------------------------------------------
# Airy function


def _taylor_step(x0, y, yp, h):
    """Advance ``(Ai, Ai')`` from ``x0`` to ``x0 + h`` by the Taylor series
    of the Airy equation. All arguments broadcast."""
    x0 = np.asarray(x0, dtype=float)
    a_km1 = np.zeros(np.broadcast(x0, y, h).shape)  # a_{k-1}
    a_k = np.broadcast_to(y, a_km1.shape).astype(float)  # a_0
    a_kp1 = np.broadcast_to(yp, a_km1.shape).astype(float)  # a_1
    val = a_k + a_kp1 * h
    der = a_kp1.copy()
    hp = np.ones_like(val)  # h**(k-1) for k = 1
    hp = hp * h  # h**1
    k = 0
    for _ in range(_TAYLOR_TERMS):
        # a_{k+2} = (x0 a_k + a_{k-1}) / ((k+2)(k+1))
        a_next = (x0 * a_k + a_km1) / ((k + 2) * (k + 1))
        der = der + (k + 2) * a_next * hp
        hp = hp * h
        val = val + a_next * hp
        a_km1, a_k, a_kp1 = a_k, a_kp1, a_next
        k += 1
    return val, der


def _continue(x_start, y0, yp0, x):
    """Taylor continuation from ``x_start`` to each entry of ``x``."""
    dist = np.abs(x - x_start)
    nsteps = max(1, int(math.ceil(dist.max() / _MAX_STEP))) if dist.size else 1
    h = (x - x_start) / nsteps
    pos = np.full_like(x, x_start)
    y = np.full_like(x, y0)
    yp = np.full_like(x, yp0)
    for _ in range(nsteps):
        y, yp = _taylor_step(pos, y, yp, h)
        pos = pos + h
    return y, yp


def _asym_coeffs(n):
    """u_k and v_k of the Airy asymptotic expansions (DLMF 9.7.2)."""
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1)
                 / ((2 * k - 1) * 216.0 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, n)]
    return np.array(u), np.array(v)


_U, _V = _asym_coeffs(24)


def _asym_pos(x):
    """Ai and Ai' for large positive ``x``."""
    x = np.asarray(x, dtype=float)
    zeta = 2.0 / 3.0 * x ** 1.5
    signs = (-1.0) ** np.arange(_U.size)
    powers = zeta[..., None] ** -np.arange(_U.size)
    su = (signs * _U * powers).sum(axis=-1)
    sv = (signs * _V * powers).sum(axis=-1)
    pref = np.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return pref * su / x ** 0.25, -pref * sv * x ** 0.25


def _asym_neg(x):
    """Ai for large negative ``x`` (pass ``x < 0``)."""
    z = -np.asarray(x, dtype=float)
    zeta = 2.0 / 3.0 * z ** 1.5
    kk = np.arange(_U.size // 2)
    sign = (-1.0) ** kk
    even = (sign * _U[0::2] * zeta[..., None] ** (-2.0 * kk)).sum(axis=-1)
    odd = (sign * _U[1::2] * zeta[..., None] ** (-2.0 * kk - 1)).sum(axis=-1)
    phase = zeta - math.pi / 4.0
    return (np.cos(phase) * even + np.sin(phase) * odd) / (
        math.sqrt(math.pi) * z ** 0.25)


def airy_ai(x, config=DEFAULT_CONFIG):
    """Airy function ``Ai(x)`` for real ``|x| <= 50``.

    Relative accuracy is better than 1e-9 on ``|x| <= 10`` (measured
    against the amplitude envelope on the oscillatory side, where Ai has
    zeros) and better than 1e-6 out to ``|x| = 50``.

    Raises
    ------
    DomainError
        If any ``|x| > 50`` or ``x`` is not finite.
    """
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)) or np.any(np.abs(xa) > AIRY_RANGE):
        raise DomainError(f"airy_ai is documented on |x| <= {AIRY_RANGE}")
    flat = xa.ravel()
    out = np.empty_like(flat)
    cut = config.series_cutoff

    m = np.abs(flat) <= _INNER
    if m.any():
        out[m] = _taylor_step(0.0, _AI0, _AIP0, flat[m])[0]
    m = (flat > _INNER) & (flat <= cut)
    if m.any():
        y0, yp0 = _asym_pos(np.array([cut]))
        out[m] = _continue(cut, y0[0], yp0[0], flat[m])[0]
    m = (flat < -_INNER) & (flat >= -cut)
    if m.any():
        y0, yp0 = _taylor_step(0.0, _AI0, _AIP0, np.array([-_INNER]))
        out[m] = _continue(-_INNER, y0[0], yp0[0], flat[m])[0]
    m = flat > cut
    if m.any():
        out[m] = _asym_pos(flat[m])[0]
    m = flat < -cut
    if m.any():
        out[m] = _asym_neg(flat[m])
    out = out.reshape(xa.shape)
    return out[()] if out.ndim == 0 else out


def airy_ai_scaled(z, config=DEFAULT_CONFIG):
    """``Ai(z) * exp(2/3 z**1.5)`` for ``z >= 0``, any size.

    The scaling removes the superexponential decay so callers can work in
    log space far beyond the range of :func:`airy_ai`.
    """
    za = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(za)) or np.any(za < 0):
        raise DomainError("airy_ai_scaled needs finite z >= 0")
    flat = za.ravel()
    out = np.empty_like(flat)
    big = flat > config.series_cutoff
    if big.any():
        zb = flat[big]
        zeta = 2.0 / 3.0 * zb ** 1.5
        signs = (-1.0) ** np.arange(_U.size)
        su = (signs * _U * zeta[:, None] ** -np.arange(_U.size)).sum(axis=-1)
        out[big] = su / (2.0 * math.sqrt(math.pi) * zb ** 0.25)
    small = ~big
    if small.any():
        zs = flat[small]
        out[small] = airy_ai(zs, config) * np.exp(2.0 / 3.0 * zs ** 1.5)
    out = out.reshape(za.shape)
    return out[()] if out.ndim == 0 else out


def airy_ai_oscillatory(z):
    """``Ai(z)`` for ``z < -series_cutoff`` with no lower limit, from the
    asymptotic expansion."""
    za = np.asarray(z, dtype=float)
    if np.any(za >= -DEFAULT_CONFIG.series_cutoff):
        raise DomainError("airy_ai_oscillatory is for large negative z")
    out = _asym_neg(za.ravel()).reshape(za.shape)
    return out[()] if out.ndim == 0 else out


def airy_ai_contour(x, tol=DEFAULT_CONFIG.quad_tol):
    """Reference value of Ai(x) by quadrature of its Fourier integral.

    The integration line is lifted to ``Im xi = eta > 0``, where the
    integrand ``exp(i xi**3/3 + i x xi)`` is damped like
    ``exp(-eta Re(xi)**2)``.  For ``x > 0`` the line passes through the
    saddle point ``eta = sqrt(x)``.  Slow; meant for tests.
    """
    x = float(x)
    if x > 0.25:
        eta = math.sqrt(x)
    elif x >= -3.0:
        eta = 0.5
    else:
        eta = min(0.5, 3.0 / abs(x))

    def integrand(s):
        z = complex(s, eta)
        return (np.exp(1j * z ** 3 / 3.0 + 1j * x * z)).real

    # e^{-eta s^2} below 1e-20 of the peak
    smax = math.sqrt(46.0 / eta) + 1.0
    val, _ = integrate.quad(integrand, 0.0, smax, epsabs=tol * 1e-3,
                            epsrel=tol, limit=2000)
    return val / math.pi
