"""Solitary waves ``phi(x - c t)`` of the replicator-mutator equation.

A travelling profile ``psi`` with zero mean solves

    psi'' + c psi' + x psi = 0,   int psi = 1,   int x psi = 0,

and for every ``c > 0`` the only solution is

    psi_c(x) = exp(-c x / 2 + c**3 / 12) * Ai(c**2 / 4 - x).

Its Fourier transform is ``exp(-i xi**3 / 3 - c xi**2 / 2)``.  Profiles
with mean ``alpha`` are translates ``psi_c(x - alpha)``.  None of them is
a density: Ai oscillates on the negative axis, so ``psi_c`` changes sign
to the right of ``c**2 / 4``.  No wave exists for ``c <= 0``.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate

from . import io
from .errors import NoSolitaryWave
from .profiles import GridFunction
from .special import DEFAULT_CONFIG, airy_ai, airy_ai_oscillatory, airy_ai_scaled


def _check_speed(c):
    if not c > 0:
        raise NoSolitaryWave(f"no solitary wave for c={c!r} <= 0")


def solitary_wave(c, x):
    """``psi_c(x)``; scalars or arrays.

    Uses the scaled Airy function where ``Ai`` is small, so the exponent
    ``-c x / 2 + c**3 / 12 - 2/3 z**1.5`` is summed before
    exponentiation.

    Raises
    ------
    NoSolitaryWave
        If ``c <= 0``.
    """
    _check_speed(c)
    xa = np.asarray(x, dtype=float)
    z = c * c / 4.0 - xa
    lin = -0.5 * c * xa + c ** 3 / 12.0
    out = np.empty_like(z)
    pos = z >= 0
    zp = z[pos]
    out[pos] = np.exp(lin[pos] - 2.0 / 3.0 * zp ** 1.5) * airy_ai_scaled(zp)
    cut = DEFAULT_CONFIG.series_cutoff
    mid = (z < 0) & (z >= -cut)
    out[mid] = np.exp(lin[mid]) * airy_ai(z[mid])
    far = z < -cut
    out[far] = np.exp(lin[far]) * airy_ai_oscillatory(z[far])
    return out[()] if out.ndim == 0 else out


def translated_wave(c, alpha, x):
    """``phi_{alpha,c}(x) = psi_c(x - alpha)``, the wave with mean ``alpha``."""
    return solitary_wave(c, np.asarray(x, dtype=float) - alpha)


def wave_window(c, alpha=0.0, tol=1e-17):
    """Interval outside which ``|psi| < tol`` (up to the Airy envelope).

    Left: the Gaussian-like decay ``exp(-c x/2 + c**3/12 - 2/3 z**1.5)``.
    Right: the envelope ``exp(-c x / 2 + c**3 / 12)``.
    """
    _check_speed(c)
    logtol = math.log(tol)
    hi = max(c * c / 4.0, 2.0 * (c ** 3 / 12.0 - logtol) / c)
    lo = -1.0
    while (-0.5 * c * lo + c ** 3 / 12.0
           - 2.0 / 3.0 * (c * c / 4.0 - lo) ** 1.5) > logtol:
        lo *= 1.5
    return lo + alpha, hi + alpha


@dataclass(frozen=True)
class WaveProfile:
    """Sampled wave ``phi_{alpha,c}``."""

    c: float
    alpha: float
    samples: GridFunction

    def __post_init__(self):
        _check_speed(self.c)

    @classmethod
    def build(cls, c, alpha=0.0, h=1e-3, window=None):
        """Sample on ``window`` (default :func:`wave_window`) at spacing
        about ``h``."""
        lo, hi = wave_window(c, alpha) if window is None else window
        n = int(math.ceil((hi - lo) / h)) + 1
        x = np.linspace(lo, hi, n)
        return cls(float(c), float(alpha),
                   GridFunction(lo, hi, translated_wave(c, alpha, x)))

    @property
    def mass(self):
        return self.samples.integral()

    @property
    def mean(self):
        return self.samples.integral(1)

    def to_csv(self, path_or_buf):
        io.write_csv(path_or_buf, ("x", "psi"),
                     zip(self.samples.x, self.samples.values))


def wave_moments(c, alpha=0.0, panel=0.25, order=24):
    """``(int phi, int x phi)`` by composite Gauss-Legendre quadrature.

    Panels of width ``panel`` hold a fraction of an Airy oscillation, so
    ``order`` nodes per panel integrate to rounding level.
    """
    _check_speed(c)
    lo, hi = wave_window(c, alpha)
    k = int(math.ceil((hi - lo) / panel))
    edges = np.linspace(lo, hi, k + 1)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    half = 0.5 * np.diff(edges)[:, None]
    x = (0.5 * (edges[:-1] + edges[1:]))[:, None] + half * nodes
    w = (half * weights).ravel()
    x = x.ravel()
    v = translated_wave(c, alpha, x)
    return float(math.fsum(w * v)), float(math.fsum(w * x * v))


def _d1(v, h):
    return (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)


def _d2(v, h):
    return (-v[:-4] + 16 * v[1:-3] - 30 * v[2:-2] + 16 * v[3:-1] - v[4:]) / (12 * h * h)


def wave_residual(c, window=(-15.0, 10.0), h=1e-3, alpha=0.0):
    """Sup of ``|phi'' + c phi' + (x - alpha) phi|`` over interior points.

    Derivatives use 5-point central differences on a grid of spacing
    ``h``; the two points at each end are skipped.
    """
    _check_speed(c)
    lo, hi = window
    n = int(round((hi - lo) / h)) + 1
    x = np.linspace(lo, hi, n)
    h = x[1] - x[0]
    v = translated_wave(c, alpha, x)
    res = _d2(v, h) + c * _d1(v, h) + (x[2:-2] - alpha) * v[2:-2]
    return float(np.max(np.abs(res)))


def _fourier_shift(c, x):
    # saddle point of the phase on the imaginary axis; stays below c/2,
    # where the contour would lose its Gaussian damping
    return 0.5 * (c - math.sqrt(c * c - 4.0 * x)) if x < 0 else 0.0


def wave_from_fourier(c, x, tol=1e-13):
    """``psi_c(x)`` from its Fourier integral; returns ``(real, imag)``.

    The line of integration is ``Im xi = eta`` with ``eta`` the saddle
    point for ``x < 0`` (so the integrand carries no cancellation there)
    and the real axis otherwise.  On that line the integrand decays like
    ``exp(-(c/2 - eta) s**2)``.  The imaginary part vanishes in exact
    arithmetic.
    """
    _check_speed(c)
    x = float(x)
    eta = _fourier_shift(c, x)
    xi0 = 1j * eta
    log0 = -1j * xi0 ** 3 / 3 - c * xi0 ** 2 / 2 + 1j * x * xi0

    def g(s):
        xi = s + 1j * eta
        return np.exp(-1j * xi ** 3 / 3 - c * xi ** 2 / 2 + 1j * x * xi - log0)

    smax = math.sqrt(42.0 / (c / 2 - eta))
    kw = dict(epsabs=tol, epsrel=tol, limit=2000)
    re = integrate.quad(lambda s: g(s).real, -smax, smax, **kw)[0]
    im = integrate.quad(lambda s: g(s).imag, -smax, smax, **kw)[0]
    scale = np.exp(log0) / (2 * math.pi)
    val = complex(re, im) * scale
    return val.real, val.imag


def sign_changes(c, window, h=1e-3):
    """Number of strict sign changes of ``psi_c`` on ``window``.

    Sampled at spacing ``h``; exact zeros and underflowed values are
    skipped.  Ai has zeros about ``pi / sqrt(|z|)`` apart, so ``h`` must
    stay well below that on the window.
    """
    _check_speed(c)
    lo, hi = window
    n = int(math.ceil((hi - lo) / h)) + 1
    v = solitary_wave(c, np.linspace(lo, hi, n))
    s = np.sign(v[v != 0])
    return int(np.count_nonzero(s[1:] != s[:-1]))
