"""Changes of unknown that relate modulated equations to the heat equation.

* gauge factor: ``u = v exp(int_0^t a)`` removes a potential ``a(t) u``;
* momentum factor: ``u = v / (1 + int_0^t v_bar)`` removes the nonlocal
  term ``-u_bar(t) u`` with ``u_bar = int f u``;
* Avron-Herbst shift: ``v(t, x) = w(t, x + t**2) exp(t x + t**3/3)``
  removes a linear potential ``x v``;
* lens transform with the fundamental pair ``(mu, nu)`` removes a
  quadratic potential ``-a x**2 v``; for constant ``a = 1`` it composes
  with the heat kernel into Mehler's formula.

Chaining heat flow -> Avron-Herbst -> momentum inversion rebuilds the
explicit solution of the replicator-mutator equation; the functions here
do that numerically, frame by frame, so the chain can be checked against
the direct formula in :mod:`repmut.closedform`.
"""
from dataclasses import dataclass
import enum
import math

import numpy as np
from scipy import integrate, special as sp
from scipy.interpolate import CubicHermiteSpline

from . import special
from .closedform import SolutionFrame, solution_grid
from .errors import BlowUp, DomainError, StepTooLarge, TransformOverflow
from .profiles import (CompactSampled, Dirac, ExponentialTail, Gaussian,
                       GridFunction, exp_moment)

_LOG_MAX = math.log(np.finfo(float).max)


# --------------------------------------------------------------------------
# time factors


class TimeFactor:
    """Coefficient ``a(t)`` with its integrals.

    ``A(t) = int_0^t a``, ``A2(t) = int_0^t int_0^s a`` and
    ``B(t) = int_0^t A(s)**2 ds`` (the last two enter the generalised
    Avron-Herbst formula).
    """

    def __init__(self, a_of_t, A=None, A2=None, B=None):
        self.a = a_of_t
        self._A, self._A2, self._B = A, A2, B

    @classmethod
    def constant(cls, c):
        c = float(c)
        return cls(lambda t: c, A=lambda t: c * t, A2=lambda t: 0.5 * c * t * t,
                   B=lambda t: c * c * t ** 3 / 3.0)

    def A(self, t):
        if self._A is not None:
            return self._A(t)
        return integrate.quad(self.a, 0.0, t, epsabs=1e-14, epsrel=1e-13)[0]

    def A2(self, t):
        if self._A2 is not None:
            return self._A2(t)
        return integrate.quad(lambda s: (t - s) * self.a(s), 0.0, t,
                              epsabs=1e-14, epsrel=1e-13)[0]

    def B(self, t):
        if self._B is not None:
            return self._B(t)
        return integrate.quad(lambda s: self.A(s) ** 2, 0.0, t,
                              epsabs=1e-14, epsrel=1e-13)[0]


def _as_factor(a_of_t):
    if isinstance(a_of_t, TimeFactor):
        return a_of_t
    if np.isscalar(a_of_t):
        return TimeFactor.constant(a_of_t)
    return TimeFactor(a_of_t)


def gauge_external(v, a_of_t, t=None):
    """Multiply ``v`` by ``exp(int_0^t a)``.

    ``v`` is a :class:`SolutionFrame` (its own time is used), or an array
    or scalar together with ``t``.
    """
    fac = _as_factor(a_of_t)
    if isinstance(v, SolutionFrame):
        g = math.exp(fac.A(v.t))
        u = GridFunction(v.u.x_lo, v.u.x_hi, v.u.values * g)
        return SolutionFrame(v.t, u, v.u_bar * g, v.mass * g)
    if t is None:
        raise ValueError("t is required for array input")
    return np.asarray(v) * math.exp(fac.A(t))


# --------------------------------------------------------------------------
# heat flow


class HeatFlow:
    """Solution ``w(t, x)`` of ``w_t = w_xx`` with ``w(0) = u0``.

    Closed forms for Gaussian, exponential and Dirac data; the trapezoid
    rule on the samples for :class:`CompactSampled`; adaptive quadrature
    otherwise.  ``log`` is provided so callers can combine with large
    exponential factors without overflow.
    """

    def __init__(self, profile):
        self.p = profile

    def __call__(self, t, x):
        return np.exp(self.log(t, x))

    def log(self, t, x):
        p = self.p
        x = np.asarray(x, dtype=float)
        if t == 0:
            if isinstance(p, Dirac):
                raise DomainError("heat flow of a Dirac mass at t = 0")
            with np.errstate(divide="ignore"):
                return np.log(p.density(x))
        if isinstance(p, Gaussian):
            b = p.a / (1.0 + 2.0 * p.a * t)
            return 0.5 * math.log(b / (2 * math.pi)) - 0.5 * b * (x - p.m) ** 2
        if isinstance(p, Dirac):
            return special.log_heat_kernel(t, x, p.x0)
        if isinstance(p, ExponentialTail):
            al = p.alpha
            return (math.log(al) - al * x + al * al * t
                    + sp.log_ndtr((x - 2 * al * t) / math.sqrt(2 * t)))
        if isinstance(p, CompactSampled):
            y = p.grid.x
            w = p.weights()
            pos = w > 0
            y, lw = y[pos], np.log(w[pos])
            flat = x.ravel()
            out = np.empty_like(flat)
            for i in range(0, flat.size, 512):
                lk = special.log_heat_kernel(t, flat[i:i + 512, None], y[None, :])
                out[i:i + 512] = sp.logsumexp(lk + lw[None, :], axis=1)
            return out.reshape(x.shape)
        return np.log(self._quad(t, x))

    def _quad(self, t, x):
        p = self.p
        flat = np.atleast_1d(x).ravel()
        lo, hi = p.support()
        s = math.sqrt(2 * t)
        out = np.empty_like(flat)
        for i, xi in enumerate(flat):
            a, b = max(lo, xi - 14 * s), min(hi, xi + 14 * s)
            if b <= a:
                out[i] = 0.0
                continue
            out[i] = integrate.quad(
                lambda y: float(special.heat_kernel(t, xi, y) * p.density(y)),
                a, b, epsabs=0.0, epsrel=1e-12, limit=200)[0]
        return out.reshape(np.shape(x))


def heat_flow(profile):
    return HeatFlow(profile)


def _log_eval(w_eval, t, x):
    if hasattr(w_eval, "log"):
        return np.asarray(w_eval.log(t, x), dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(w_eval(t, x), dtype=float))


# --------------------------------------------------------------------------
# Avron-Herbst


def avron_herbst(w_eval, t, x, a_of_t=1.0):
    """Solution of ``v_t = v_xx + a(t) x v`` from a heat solution ``w``.

    ``v(t, x) = w(t, x + 2 A2(t)) exp(x A(t) + B(t))``, which for
    ``a = 1`` reads ``w(t, x + t**2) exp(t x + t**3/3)``.  The product is
    formed in log space.

    Raises
    ------
    TransformOverflow
        If the result exceeds the double range.
    """
    fac = _as_factor(a_of_t)
    x = np.asarray(x, dtype=float)
    if t == 0:
        return np.exp(_log_eval(w_eval, 0.0, x))
    lv = _log_eval(w_eval, t, x + 2.0 * fac.A2(t)) + x * fac.A(t) + fac.B(t)
    if np.any(lv > _LOG_MAX):
        raise TransformOverflow(f"Avron-Herbst result overflows at t={t}")
    out = np.exp(lv)
    return out[()] if out.ndim == 0 else out


# --------------------------------------------------------------------------
# momentum factor


class Weight(enum.Enum):
    """Fitness weight ``f`` of the nonlocal term ``(f(x) - int f u) u``.

    ``LINEAR`` is ``f(x) = x``.  ``QUADRATIC`` is the selection against
    large ``|x|`` of ``u_t = u_xx - (x**2 - int x**2 u) u``, i.e.
    ``f(x) = -x**2``.
    """

    LINEAR = "Linear"
    QUADRATIC = "Quadratic"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x if self is Weight.LINEAR else -x * x


def _weight_fn(weight):
    if isinstance(weight, str):
        weight = Weight(weight)
    return weight


def momentum_denominators(frames, weight=Weight.LINEAR, rule="trapezoid"):
    """``1 + int_0^t v_bar(s) ds`` at every frame time.

    ``v_bar(s) = int f v(s, .)`` is taken by the trapezoid rule on each
    frame's grid; the time integral uses ``rule``: ``"trapezoid"`` or
    ``"simpson"`` (one Richardson step of the trapezoid rule, for uniform
    or smoothly varying frame times).
    """
    f = _weight_fn(weight)
    times = np.array([fr.t for fr in frames], dtype=float)
    if np.any(np.diff(times) <= 0):
        raise ValueError("frame times must be strictly increasing")
    vbar = np.array([_frame_moment(fr, f) for fr in frames])
    if rule == "trapezoid":
        cum = integrate.cumulative_trapezoid(vbar, times, initial=0.0)
    elif rule == "simpson":
        cum = integrate.cumulative_simpson(vbar, x=times, initial=0.0)
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return 1.0 + cum


def _frame_moment(fr, f):
    if getattr(fr, "moment", None) is not None:
        return fr.moment
    return float(np.dot(fr.u.trapezoid_weights(), f(fr.x) * fr.u.values))


@dataclass(frozen=True)
class VFrame(SolutionFrame):
    """Frame of a modulated (linear) equation; ``moment`` overrides the
    trapezoid value of ``int f v`` when it is known more accurately."""

    moment: float = None


def momentum_invert(frames, weight=Weight.LINEAR, rule="trapezoid", gauge=None):
    """Undo the momentum factor: ``u = v / (1 + int_0^t v_bar)``.

    Parameters
    ----------
    frames : sequence of SolutionFrame
        Frames of ``v`` at increasing times starting at ``t = 0``.
    weight : Weight
        Fitness weight ``f`` defining ``v_bar = int f v``.
    rule : {"trapezoid", "simpson"}
        Time quadrature of ``v_bar``.
    gauge : TimeFactor or callable, optional
        External factor ``exp(int_0^t a)`` carried by the frames, removed
        before inversion.

    Raises
    ------
    BlowUp
        When the denominator reaches zero; carries the bracketing frame
        times and a linearly interpolated ``t_star``.
    """
    if gauge is not None:
        fac = _as_factor(gauge)
        frames = [gauge_external(fr, TimeFactor(lambda s: -fac.a(s),
                                                A=lambda s: -fac.A(s)))
                  for fr in frames]
    f = _weight_fn(weight)
    den = momentum_denominators(frames, f, rule)
    bad = np.nonzero(den <= 0.0)[0]
    if bad.size:
        k = bad[0]
        t_lo, t_hi = frames[k - 1].t, frames[k].t
        d_lo, d_hi = den[k - 1], den[k]
        t_star = t_hi if d_hi == 0 else t_lo + (t_hi - t_lo) * d_lo / (d_lo - d_hi)
        raise BlowUp(float(t_lo), float(t_hi), float(t_star))
    out = []
    for fr, d in zip(frames, den):
        g = GridFunction(fr.u.x_lo, fr.u.x_hi, fr.u.values / d)
        ubar = float(np.dot(g.trapezoid_weights(), f(g.x) * g.values))
        out.append(SolutionFrame(fr.t, g, ubar, g.integral()))
    return out


# --------------------------------------------------------------------------
# drift-free example


def drift_free_frames(p, times, n=2048):
    """Heat frames of ``p`` for ``u_t = u_xx - u_bar(t) u``.

    Feed these to :func:`momentum_invert`; the denominator is
    ``1 + t int y u0(y) dy`` and vanishes at ``t = -1 / int y u0`` when
    the initial mean is negative.
    """
    w = heat_flow(p)
    mean, sd = p.tilted_stats(0.0)
    frames = []
    for t in times:
        half = 12.0 * (math.sqrt(2 * t) + sd)
        x = np.linspace(mean - half, mean + half, n)
        g = GridFunction(x[0], x[-1], w(t, x))
        frames.append(SolutionFrame(t, g, g.integral(1), g.integral()))
    return frames


def drift_free_blowup(p, times, n=2048):
    """Run the drift-free example; returns the inverted frames or raises
    :class:`BlowUp`."""
    return momentum_invert(drift_free_frames(p, times, n), Weight.LINEAR)


# --------------------------------------------------------------------------
# the transform route to the explicit solution


def transform_route_u(p, t, x, n_frames=32, n_grid=2048, tol=1e-8,
                      max_frames=4096):
    """``u(t, x)`` via heat flow, Avron-Herbst and momentum inversion.

    Frames of ``v = AH(w)`` are laid on ``[0, t]``, ``v_bar = int x v`` is
    taken on a grid following the bulk, and the number of frames is
    doubled until the Simpson denominator changes by less than ``tol``
    (relative).  Returns ``(u, denominator)``.
    """
    w = heat_flow(p)
    prev = None
    n = n_frames
    while True:
        den = _ah_denominator(p, w, t, n, n_grid)
        if prev is not None and abs(den - prev) <= tol * abs(den):
            break
        if 2 * n > max_frames:
            break
        prev = den
        n *= 2
    if den <= 0:
        raise BlowUp(0.0, t, math.nan)
    return avron_herbst(w, t, x) / den, den


def _ah_denominator(p, w, t, n_frames, n_grid):
    times = np.linspace(0.0, t, n_frames + 1)
    frames = []
    for s in times:
        if s == 0:
            m1 = exp_moment(p, 0.0, 1)
            g = GridFunction(-1.0, 1.0, np.zeros(2))
            frames.append(VFrame(0.0, g, m1, 1.0, moment=m1))
            continue
        xs = solution_grid(p, s, n_grid)
        g = GridFunction(xs[0], xs[-1], avron_herbst(w, s, xs))
        frames.append(VFrame(s, g, math.nan, g.integral()))
    return float(momentum_denominators(frames, Weight.LINEAR, "simpson")[-1])


# --------------------------------------------------------------------------
# fundamental pair and lens transform


@dataclass(frozen=True, eq=False)
class FundamentalPair:
    """Solutions of ``y'' = a(t) y`` with ``(mu, mu')(0) = (0, 1)`` and
    ``(nu, nu')(0) = (1, 0)``, tabulated on ``time_grid``."""

    time_grid: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    mu_dot: np.ndarray
    nu_dot: np.ndarray
    a_values: np.ndarray
    error_estimate: float = 0.0

    def wronskian(self):
        return self.mu_dot * self.nu - self.mu * self.nu_dot

    @property
    def t_max(self):
        return float(self.time_grid[-1])

    def at(self, t):
        """``(mu, nu, mu_dot, nu_dot)`` at ``t`` by cubic Hermite
        interpolation (derivatives from the ODE)."""
        if t < 0 or t > self.t_max * (1 + 1e-14):
            raise DomainError(f"t={t} outside the tabulated range [0, {self.t_max}]")
        tg = self.time_grid
        sm = CubicHermiteSpline(tg, self.mu, self.mu_dot)
        sn = CubicHermiteSpline(tg, self.nu, self.nu_dot)
        smd = CubicHermiteSpline(tg, self.mu_dot, self.a_values * self.mu)
        snd = CubicHermiteSpline(tg, self.nu_dot, self.a_values * self.nu)
        return float(sm(t)), float(sn(t)), float(smd(t)), float(snd(t))

    def to_csv(self, path_or_buf):
        from .io import write_csv
        rows = zip(self.time_grid, self.mu, self.nu, self.mu_dot, self.nu_dot)
        write_csv(path_or_buf, ("t", "mu", "nu", "mu_dot", "nu_dot"), rows)


def _rk4(a, t_max, dt):
    n = max(1, int(math.ceil(t_max / dt - 1e-9)))
    h = t_max / n
    tg = np.linspace(0.0, t_max, n + 1)
    y = np.empty((n + 1, 4))
    y[0] = (0.0, 1.0, 1.0, 0.0)  # mu, mu', nu, nu'

    def rhs(t, z):
        at = a(t)
        return np.array([z[1], at * z[0], z[3], at * z[2]])

    for i in range(n):
        t, z = tg[i], y[i]
        k1 = rhs(t, z)
        k2 = rhs(t + h / 2, z + h / 2 * k1)
        k3 = rhs(t + h / 2, z + h / 2 * k2)
        k4 = rhs(t + h, z + h * k3)
        y[i + 1] = z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return tg, y


def fundamental_pair(a_of_t, t_max, dt, wronskian_tol=1e-6):
    """Integrate the oscillator pair with classical RK4 at fixed step.

    A second run at ``dt/2`` gives a Richardson error estimate stored in
    ``error_estimate`` (max over the common nodes of |diff| / 15).

    Raises
    ------
    StepTooLarge
        If the Wronskian ``mu' nu - mu nu'`` drifts from 1 by more than
        ``wronskian_tol``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    a = _as_factor(a_of_t).a
    tg, y = _rk4(a, t_max, dt)
    _, yf = _rk4(a, t_max, (tg[1] - tg[0]) / 2)
    err = float(np.max(np.abs(yf[::2] - y)) / 15.0)
    av = np.array([a(t) for t in tg])
    pair = FundamentalPair(tg, y[:, 0], y[:, 2], y[:, 1], y[:, 3], av, err)
    drift = float(np.max(np.abs(pair.wronskian() - 1.0)))
    if drift > wronskian_tol:
        raise StepTooLarge(f"Wronskian drift {drift:.3g} with dt={dt}")
    return pair


def lens_transform(w_eval, pair, t, x):
    """Solution of ``v_t = v_xx - a x**2 v`` from a heat solution ``w``.

    ``v(t, x) = nu**-0.5 exp(-x**2 nu'/(2 nu)) w(mu/(2 nu), x/nu)`` with
    the pair read at ``2 t``.  For time-dependent ``a`` the potential
    seen by ``v`` at time ``t`` is ``a(2 t) x**2``.
    """
    x = np.asarray(x, dtype=float)
    if t == 0:
        return np.exp(_log_eval(w_eval, 0.0, x))
    mu, nu, _, nud = pair.at(2.0 * t)
    if nu <= 0:
        raise DomainError("nu(2t) must be positive")
    s = mu / (2.0 * nu)
    lv = -0.5 * math.log(nu) - 0.5 * x * x * nud / nu + _log_eval(w_eval, s, x / nu)
    out = np.exp(lv)
    return out[()] if out.ndim == 0 else out


# --------------------------------------------------------------------------
# Mehler


#: Sign of the ``xy / sinh(2t)`` term in Mehler's kernel, as settled by
#: :func:`resolve_mehler_sign` against the lens transform.
MEHLER_CROSS_SIGN = +1


def log_mehler_kernel(t, x, y, cross_sign=MEHLER_CROSS_SIGN):
    s2, c2 = math.sinh(2 * t), math.cosh(2 * t)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (-0.5 * math.log(2 * math.pi * s2) - c2 / s2 * (x * x + y * y) / 2
            + cross_sign * x * y / s2)


def mehler_kernel(t, x, y, cross_sign=MEHLER_CROSS_SIGN):
    """Kernel of ``v_t = v_xx - x**2 v``:
    ``(2 pi sinh 2t)**-0.5 exp(-coth(2t)(x**2+y**2)/2 + s xy/sinh(2t))``
    with ``s = cross_sign``."""
    return np.exp(log_mehler_kernel(t, x, y, cross_sign))


def mehler_solution(p, t, x, cross_sign=MEHLER_CROSS_SIGN):
    """``int K(t, x, y) u0(y) dy`` for ``v_t = v_xx - x**2 v``.

    In ``y`` the kernel is a Gaussian centred at ``s x / cosh(2t)`` with
    variance ``tanh(2t)``; the quadrature runs over 14 standard
    deviations of it intersected with the support of ``u0``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if t <= 0:
        raise DomainError("mehler_solution needs t > 0")
    if isinstance(p, Dirac):
        return mehler_kernel(t, x, p.x0, cross_sign)
    if isinstance(p, CompactSampled):
        y = p.grid.x
        w = p.weights()
        return (mehler_kernel(t, x[:, None], y[None, :], cross_sign) * w).sum(axis=1)
    sd = math.sqrt(math.tanh(2 * t))
    centre = cross_sign * x / math.cosh(2 * t)
    lo_s, hi_s = p.support()
    lo = np.maximum(centre - 14 * sd, lo_s)
    hi = np.minimum(centre + 14 * sd, hi_s)
    live = hi > lo
    out = np.zeros_like(x)
    if not live.any():
        return out
    lo, hi, xl = lo[live], hi[live], x[live]
    width = hi - lo

    def f(v):
        y = lo + width * v
        return width * mehler_kernel(t, xl, y, cross_sign) * p.density(y)

    out[live] = integrate.quad_vec(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-13,
                                   norm="max", limit=2000)[0]
    return out


def resolve_mehler_sign(p=None, times=(0.25, 1.0), x=None, dt=1e-3, tol=1e-8):
    """Decide the cross-term sign of Mehler's formula.

    Both signs are evaluated and compared with the lens transform of the
    heat flow at ``a = 1``; returns ``(sign, errors)`` where ``errors``
    maps each sign to its max discrepancy.  ``sign`` is ``None`` unless
    exactly one variant agrees within ``tol``.  The datum must not be
    even: for even ``u0`` the two signs give the same ``v``.
    """
    p = Gaussian(2.0, 0.7) if p is None else p
    x = np.linspace(-5, 5, 201) if x is None else x
    pair = fundamental_pair(1.0, 2.0 * max(times), dt)
    w = heat_flow(p)
    errors = {}
    for sign in (+1, -1):
        err = 0.0
        for t in times:
            ref = lens_transform(w, pair, t, x)
            err = max(err, float(np.max(np.abs(mehler_solution(p, t, x, sign) - ref))))
        errors[sign] = err
    ok = [s for s, e in errors.items() if e <= tol]
    return (ok[0] if len(ok) == 1 else None), errors


# --------------------------------------------------------------------------
# quadratic weight with Gaussian data


def quad_v_params(a, m, t):
    """Amplitude, inverse variance and centre of the Gaussian ``v(t, .)``
    solving ``v_t = v_xx - x**2 v`` from ``Gaussian(a, m)``."""
    c, s = math.cosh(2 * t), math.sinh(2 * t)
    amp = math.sqrt(a / (2 * math.pi * (c + a * s))) * math.exp(
        -a * m * m * s / (2 * (a * c + s)))
    return amp, (a * c + s) / (c + a * s), a * m / (a * c + s)


def quad_v_second_moment(a, m, t):
    """Closed form of ``int x**2 v(t, x) dx`` for the Gaussian ``v``."""
    c, s = math.cosh(2 * t), math.sinh(2 * t)
    return (math.sqrt(a) * math.exp(-a * m * m * s / (2 * (a * c + s)))
            / (a * c + s) ** 2.5 * ((c + a * s) * (a * c + s) + a * a * m * m))


def _quad_grid(a, m, t_end, n):
    sd = max(1.0 / math.sqrt(a), 1.0)
    return np.linspace(min(m, 0.0) - 12 * sd, max(m, 0.0) + 12 * sd, n)


def quad_v_frame(a, m, t, x):
    amp, at, mt = quad_v_params(a, m, t)
    vals = amp * np.exp(-0.5 * at * (x - mt) ** 2)
    return SolutionFrame(t, GridFunction(x[0], x[-1], vals), math.nan, math.nan)


def quad_weight_solution(a, m, t, n=4096, n_frames=64, tol=1e-12, max_frames=8192):
    """Solution of ``u_t = u_xx - (x**2 - int x**2 u) u`` from
    ``Gaussian(a, m)`` at time ``t``.

    ``v`` frames come from the closed Gaussian form; their second moments
    are taken on the grid and integrated in time (Simpson, frames doubled
    until the denominator changes by less than ``tol``), then ``v`` is
    divided by ``1 - int_0^t int x**2 v``.  The frame's ``u_bar`` is
    ``int f u = -int x**2 u``.

    Raises
    ------
    BlowUp
        If the denominator vanishes.
    """
    if not a > 0:
        raise ValueError("a must be positive")
    x = _quad_grid(a, m, t, n)
    if t == 0:
        vals = np.sqrt(a / (2 * math.pi)) * np.exp(-0.5 * a * (x - m) ** 2)
        g = GridFunction(x[0], x[-1], vals)
        return SolutionFrame(0.0, g, -g.integral(2), g.integral())
    prev = None
    k = n_frames
    while True:
        frames = [quad_v_frame(a, m, s, x) for s in np.linspace(0.0, t, k + 1)]
        den = momentum_denominators(frames, Weight.QUADRATIC, "simpson")
        if prev is not None and abs(den[-1] - prev) <= tol * abs(den[-1]):
            break
        if 2 * k > max_frames:
            break
        prev = den[-1]
        k *= 2
    return momentum_invert(frames, Weight.QUADRATIC, "simpson")[-1]
