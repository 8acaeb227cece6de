"""Explicit solutions of ``u_t = u_xx + (x - u_bar(t)) u``.

The workhorse is the heat-kernel representation

    u(t, x) = int G(t, x - t**2 - y) exp(t y) u0(y) dy / int exp(t y) u0(y) dy

with ``G`` the heat kernel: the solution is the heat flow, shifted by
``t**2``, of the exponentially tilted initial density.  Written this way
every weight is a normalised probability density, which keeps the
evaluation in log space and free of the ``exp(t x + t**3/3)`` overflow
hidden in the equivalent product form.

Closed forms are used for the Gaussian, exponential and Dirac families;
sampled profiles use the trapezoid rule on their own grid; everything
else (and the ``method="quad"`` cross-check) uses adaptive quadrature.
"""
from dataclasses import dataclass
import enum
import math

import numpy as np
from scipy import integrate, special as sp

from . import special
from .errors import (DomainError, NeverDefined, NonIntegrable, NotCompact,
                     OutOfLifespan)
from .profiles import (CompactSampled, Dirac, ExponentialTail, Gaussian,
                       GridFunction, classify_tail, exp_moment, TailKind)

GRID_POINTS = 4096
GRID_SIGMAS = 12.0
_KERNEL_SIGMAS = 14.0  # exp(-14**2/2) ~ 1e-43
_CHUNK = 512


class Status(enum.Enum):
    ALIVE = "Alive"
    EXTINCT = "Extinct"
    NEVER_DEFINED = "NeverDefined"


@dataclass(frozen=True)
class SolveStatus:
    status: Status
    T: float

    @property
    def after(self):
        """Extinction time for ``Extinct``, else ``None``."""
        return self.T if self.status is Status.EXTINCT else None

    def to_dict(self):
        T = "inf" if self.T == math.inf else (0 if self.T == 0 else self.T)
        d = {"status": self.status.value, "T": T}
        if self.status is Status.EXTINCT:
            d["after"] = self.T
        return d


@dataclass(frozen=True)
class SolutionFrame:
    """Snapshot of a solution on a grid.

    ``lifespan_boundary`` marks the zero frame returned at exactly
    ``t == T``; frames strictly past ``T`` are zero with ``extinct`` set.
    """

    t: float
    u: GridFunction
    u_bar: float
    mass: float
    lifespan_boundary: bool = False
    extinct: bool = False

    @property
    def x(self):
        return self.u.x

    @property
    def status(self):
        if self.lifespan_boundary:
            return "LifespanBoundary"
        return "Extinct" if self.extinct else "Alive"

    def sidecar(self):
        ub = self.u_bar
        return {"t": self.t, "u_bar": ub if math.isfinite(ub) else str(ub),
                "mass": self.mass, "status": self.status}


def solve_status(p):
    """Map the tail class of ``p`` to the fate of its solution."""
    tc = classify_tail(p)
    if tc.kind is TailKind.VERY_LIGHT:
        return SolveStatus(Status.ALIVE, math.inf)
    if tc.kind is TailKind.LIGHT:
        return SolveStatus(Status.EXTINCT, tc.T)
    return SolveStatus(Status.NEVER_DEFINED, 0.0)


def _check_lifespan(p, t):
    T = p.T
    if T == 0.0:
        raise NeverDefined(f"{p.kind} has a heavy right tail: T = 0")
    if t >= T:
        raise OutOfLifespan(t, T)


# --------------------------------------------------------------------------
# closed forms


def gaussian_solution(a, m, t):
    """Parameters of the Gaussian solution started from ``Gaussian(a, m)``.

    Returns ``(a/(1 + 2 a t), m + t**2 + t/a)``: inverse variance and
    centre at time ``t``.
    """
    if not a > 0:
        raise ValueError("a must be positive")
    return a / (1.0 + 2.0 * a * t), m + t * t + t / a


def extinction_profile(alpha, t, x):
    """Solution from ``alpha exp(-alpha y) 1_{y>0}`` at ``0 < t < alpha``.

    ``(alpha - t)/sqrt(2 pi) exp(-(alpha-t) x - alpha t**2 + alpha**2 t)
    Erf(-(x + t**2 - 2 alpha t)/sqrt(2 t))``, evaluated in log space.
    """
    if not 0.0 < t < alpha:
        raise DomainError(f"extinction_profile needs 0 < t < alpha, got t={t}")
    x = np.asarray(x, dtype=float)
    r = alpha - t
    theta = -(x + t * t - 2.0 * alpha * t) / math.sqrt(2.0 * t)
    logu = (math.log(r) - 0.5 * math.log(2.0 * math.pi) - r * x
            - alpha * t * t + alpha * alpha * t + special.log_erf_upper(theta))
    out = np.exp(logu)
    return out[()] if out.ndim == 0 else out


def dirac_solution(t, x, x0=0.0):
    """Elementary solution ``G(t, x - t**2 - x0)`` from a point mass."""
    return special.heat_kernel(t, x, t * t + x0)


def _sampled_u(p, t, x):
    """Trapezoid form of the representation over the sample grid."""
    y = p.grid.x
    w = p.weights()
    pos = w > 0
    y, lw = y[pos], np.log(w[pos]) + t * y[pos]
    lw = lw - sp.logsumexp(lw)
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty_like(flat)
    c = 0.25 / t
    lnorm = -0.5 * math.log(4.0 * math.pi * t)
    for i in range(0, flat.size, _CHUNK):
        d = (flat[i:i + _CHUNK, None] - t * t) - y[None, :]
        out[i:i + _CHUNK] = np.exp(lnorm - c * d * d + lw[None, :]).sum(axis=1)
    return out.reshape(x.shape)


def _effective_support(p, t):
    """Interval carrying all but a negligible part of the tilted density."""
    lo, hi = p.support()
    mean, sd = p.tilted_stats(t)
    span = 40.0 * max(sd, 1e-300)
    return max(lo, mean - span), min(hi, mean + span)


def _quad_u(p, t, x):
    """Adaptive quadrature of the representation, vectorised over ``x``.

    Each ``x`` integrates over the part of the effective support within
    14 kernel widths of ``x - t**2``; the intervals are mapped onto [0, 1]
    and handed together to ``quad_vec``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    m0 = exp_moment(p, t, 0, method="quad")
    lm0 = math.log(m0)
    c = x - t * t
    s = math.sqrt(2.0 * t)
    slo, shi = _effective_support(p, t)
    lo = np.maximum(c - _KERNEL_SIGMAS * s, slo)
    hi = np.minimum(c + _KERNEL_SIGMAS * s, shi)
    live = hi > lo
    lo, hi, cl = lo[live], hi[live], c[live]
    width = hi - lo

    def f(v):
        y = lo + width * v
        with np.errstate(divide="ignore"):
            lf = (special.log_heat_kernel(t, cl, y) + t * y
                  + p.log_density(y) - lm0)
        return width * np.exp(lf)

    out = np.zeros_like(x)
    if live.any():
        val, _ = integrate.quad_vec(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-13,
                                    norm="max", limit=4000)
        out[live] = val
    return out


def evaluate_u(p, t, x, method="auto"):
    """Solution ``u(t, x)`` of the replicator-mutator equation.

    Parameters
    ----------
    p : Profile
        Normalised initial density.
    t : float
        Time, ``0 < t < T(p)``.  ``t = 0`` returns ``u0`` for profiles
        with a density.
    x : float or array
    method : {"auto", "quad"}
        ``"auto"`` uses closed forms where they exist; ``"quad"`` forces
        adaptive quadrature of the heat-kernel representation (sampled
        profiles always use the trapezoid rule, Dirac is always exact).

    Raises
    ------
    NeverDefined
        Heavy right tail.
    OutOfLifespan
        ``t >= T(p)``.
    """
    _check_lifespan(p, t)
    if t < 0:
        raise DomainError("t must be nonnegative")
    x = np.asarray(x, dtype=float)
    if t == 0:
        if isinstance(p, Dirac):
            raise DomainError("the Dirac profile has no pointwise value at t = 0")
        return p.density(x)
    if isinstance(p, Dirac):
        out = dirac_solution(t, x, p.x0)
    elif isinstance(p, CompactSampled):
        out = _sampled_u(p, t, x)
    elif method == "auto" and isinstance(p, Gaussian):
        at, mt = gaussian_solution(p.a, p.m, t)
        out = np.sqrt(at / (2 * math.pi)) * np.exp(-0.5 * at * (x - mt) ** 2)
    elif method == "auto" and isinstance(p, ExponentialTail):
        out = extinction_profile(p.alpha, t, x)
    elif method in ("auto", "quad"):
        out = _quad_u(p, t, x).reshape(x.shape)
    else:
        raise ValueError(f"unknown method {method!r}")
    out = np.asarray(out, dtype=float)
    return out[()] if out.ndim == 0 else out


def mean_fitness(p, t):
    """``u_bar(t) = t**2 + M1(t)/M0(t)`` with ``Mk`` the exponential
    moments of ``u0``.

    Raises
    ------
    NeverDefined, OutOfLifespan
        As :func:`evaluate_u`.
    NonIntegrable
        If ``int |y| u0`` diverges (only the mean matters here).
    """
    _check_lifespan(p, t)
    if not math.isfinite(exp_moment(p, 0.0, 1)):
        raise NonIntegrable("first moment of u0 diverges")
    if isinstance(p, Dirac):
        return t * t + p.x0
    mean, _ = p.tilted_stats(t)
    return t * t + mean


# --------------------------------------------------------------------------
# grids and frames


def solution_grid(p, t, n=GRID_POINTS, sigmas=GRID_SIGMAS):
    """Uniform grid following the bulk of ``u(t, .)``.

    Centre ``t**2 + mean`` and half-width ``sigmas * (sqrt(2 t) + sd)``,
    where mean and sd are those of the tilted density
    ``exp(t y) u0(y)``; this is the exact mean and an upper bound on the
    spread of the solution.
    """
    mean, sd = p.tilted_stats(t)
    centre = t * t + mean
    spread = math.sqrt(2.0 * t) + sd
    if spread <= 0:
        spread = 1.0
    return np.linspace(centre - sigmas * spread, centre + sigmas * spread, n)


def solve_frame(p, t, n=GRID_POINTS, x=None, extend_by_zero=True):
    """Closed-form :class:`SolutionFrame` at time ``t``.

    For light tails, ``t >= T`` gives a zero frame when
    ``extend_by_zero`` (flagged ``lifespan_boundary`` at ``t == T``,
    ``extinct`` beyond) and raises :class:`OutOfLifespan` otherwise.
    """
    T = p.T
    if T == 0.0:
        raise NeverDefined(f"{p.kind} has a heavy right tail: T = 0")
    if x is None:
        if t >= T:
            x = np.linspace(-1.0, 1.0, n)
        else:
            x = solution_grid(p, t, n)
    x = np.asarray(x, dtype=float)
    if t >= T:
        if not extend_by_zero:
            raise OutOfLifespan(t, T)
        g = GridFunction(x[0], x[-1], np.zeros_like(x))
        return SolutionFrame(t, g, math.inf, 0.0,
                             lifespan_boundary=(t == T), extinct=(t > T))
    u = evaluate_u(p, t, x)
    g = GridFunction(x[0], x[-1], u)
    return SolutionFrame(t, g, mean_fitness(p, t), g.integral())


def deviation(p, t, n=GRID_POINTS):
    """Sup-distance between ``u(t, .)`` and the elementary solution.

    ``sup_x |u(t, x) - (4 pi t)**-0.5 exp(-(x - t**2)**2 / (4 t))|`` over
    the :func:`solution_grid`.  For data supported in ``[-M, M]`` this is
    at most ``M / (t sqrt(2e))``.
    """
    if not isinstance(p, CompactSampled):
        raise NotCompact("deviation needs a CompactSampled profile")
    x = solution_grid(p, t, n)
    u = evaluate_u(p, t, x)
    return float(np.max(np.abs(u - dirac_solution(t, x))))


def deviation_bound(M, t):
    """``M / (t sqrt(2 e))``; ``1/sqrt(2e) = sup_z |z exp(-z**2)|``."""
    return M / (t * math.sqrt(2.0 * math.e))
