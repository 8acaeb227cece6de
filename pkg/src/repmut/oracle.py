"""Direct numerical integration of the nonlocal equation.

The oracle knows nothing about the explicit formulas: it discretises

    u_t = u_xx + (f(x) - int f u) u,   f(x) = x  or  f(x) = -x**2,

on a finite window with zero Dirichlet data and Strang splitting.  One
step of length ``dt`` is

1. a half step of the reaction ``u_t = (f - int f u) u``.  Its exact
   flow multiplies by ``exp(f dt/2)`` and rescales to the incoming
   mass, i.e. ``int f u`` is frozen at its average over the half step;
2. a Crank-Nicolson step of the diffusion (tridiagonal solve);
3. a second reaction half step with ``int f u`` recomputed.

Integrals use the trapezoid rule.  With ``dt <= h**2`` the explicit half
of the Crank-Nicolson step has a nonnegative stencil and the implicit
half is an M-matrix, so the scheme keeps ``u >= 0``.
"""
from dataclasses import asdict, dataclass, field
import math
import time

import numpy as np
from scipy import linalg

from .closedform import SolutionFrame, _check_lifespan, evaluate_u, mean_fitness
from .errors import DomainEscape, GridMismatch, Unstable
from .profiles import Dirac, GridFunction, Profile
from .reductions import Weight, _weight_fn

ESCAPE_FRACTION = 1e-6
BLOWUP_GUARD = 1e12
SCHEMES = ("CrankNicolsonSplit",)
BOUNDARIES = ("Dirichlet0",)


@dataclass(frozen=True)
class OracleConfig:
    """Grid and step of the direct integrator.

    Attributes
    ----------
    x_lo, x_hi : float
        Window; the solution is held at zero outside.
    n : int
        Grid points, endpoints included.
    dt : float
        Time step; must satisfy ``dt <= h**2``.
    """

    x_lo: float
    x_hi: float
    n: int
    dt: float
    scheme: str = "CrankNicolsonSplit"
    boundary: str = "Dirichlet0"

    def __post_init__(self):
        if not self.x_hi > self.x_lo:
            raise ValueError("need x_lo < x_hi")
        if self.n < 8:
            raise ValueError("need at least 8 grid points")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.dt > self.h ** 2 * (1 + 1e-12):
            raise ValueError(
                f"dt={self.dt} exceeds h**2={self.h ** 2:.3g}; refine dt")

    @property
    def h(self):
        return (self.x_hi - self.x_lo) / (self.n - 1)

    @property
    def x(self):
        return np.linspace(self.x_lo, self.x_hi, self.n)

    @classmethod
    def for_profile(cls, p, t_end, n=2048, dt=1e-4, weight=Weight.LINEAR,
                    sigmas=12.0):
        """Window covering the predicted bulk padded by ``sigmas`` widths.

        For the linear weight the bulk sits at ``t**2`` plus the mean of
        the tilted initial density, with width ``sqrt(2 t)`` plus its
        standard deviation; the window is the hull over ``[0, t_end]``.
        For the quadratic weight the bulk relaxes towards the origin.
        """
        weight = _weight_fn(weight)
        if weight is Weight.LINEAR:
            lo, hi = math.inf, -math.inf
            for s in np.linspace(0.0, t_end, 41):
                mean, sd = p.tilted_stats(s)
                c, w = s * s + mean, math.sqrt(2 * s) + sd
                lo, hi = min(lo, c - sigmas * w), max(hi, c + sigmas * w)
        else:
            mean, sd = p.tilted_stats(0.0)
            w = max(sd, 1.0)
            lo = min(mean, 0.0) - sigmas * w
            hi = max(mean, 0.0) + sigmas * w
        return cls(float(lo), float(hi), int(n), float(dt))

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def _step_index(t, dt):
    k = round(t / dt)
    if abs(k * dt - t) > 1e-9 * max(1.0, abs(t)):
        raise ValueError(f"record time {t} is not a multiple of dt={dt}")
    return int(k)


def integrate(p, cfg, t_end, weight=Weight.LINEAR, record_times=None):
    """Integrate from ``p`` to ``t_end``.

    Parameters
    ----------
    p : Profile
        Initial density; needs a pointwise ``density`` (not Dirac).
    cfg : OracleConfig
    t_end : float
    weight : Weight
    record_times : sequence of float, optional
        Times (multiples of ``cfg.dt``) at which frames are kept.
        Defaults to ``(0, t_end)``.

    Returns
    -------
    list of SolutionFrame
        ``u_bar`` is ``int f u`` and ``mass`` is ``int u``, both by the
        trapezoid rule.

    Raises
    ------
    NeverDefined, OutOfLifespan
        Linear weight with a heavy tail, or ``t_end`` at or past the
        extinction time.
    DomainEscape
        More than 1e-6 of the mass sits in the boundary cells.
    Unstable
        A value exceeds 1e12 or stops being finite.
    """
    if isinstance(p, Dirac):
        raise ValueError("the oracle needs a pointwise initial density")
    f = _weight_fn(weight)
    if f is Weight.LINEAR:
        _check_lifespan(p, t_end)
    if record_times is None:
        record_times = (0.0, t_end)
    record_times = sorted(float(s) for s in record_times)
    if record_times[0] < 0 or record_times[-1] > t_end * (1 + 1e-12):
        raise ValueError("record times must lie in [0, t_end]")
    marks = {_step_index(s, cfg.dt): s for s in record_times}
    nsteps = _step_index(t_end, cfg.dt)

    x, h, dt = cfg.x, cfg.h, cfg.dt
    fx = f(x)
    u = np.asarray(p.density(x), dtype=float).copy()
    u[0] = u[-1] = 0.0
    mass0 = h * u.sum()
    edge = max(2, cfg.n // 100)

    # Crank-Nicolson on the interior points
    r = dt / (h * h)
    m = cfg.n - 2
    ab = np.empty((3, m))
    ab[0, :] = -0.5 * r
    ab[1, :] = 1.0 + r
    ab[2, :] = -0.5 * r

    def diffuse(u):
        rhs = (1.0 - r) * u[1:-1] + 0.5 * r * (u[2:] + u[:-2])
        u[1:-1] = linalg.solve_banded((1, 1), ab, rhs, check_finite=False)
        return u

    growth = np.exp(fx * (0.5 * dt))

    def react(u):
        # exact: the reaction conserves mass
        before = u.sum()
        u *= growth
        u *= before / u.sum()
        return u

    frames = []

    def record(t):
        g = GridFunction(cfg.x_lo, cfg.x_hi, u.copy())
        frames.append(SolutionFrame(t, g, float(h * np.dot(fx, u)), float(h * u.sum())))

    if 0 in marks:
        record(marks[0])
    for k in range(1, nsteps + 1):
        u = react(diffuse(react(u)))
        if not np.all(np.isfinite(u)) or u.max() > BLOWUP_GUARD:
            raise Unstable(f"values left [0, {BLOWUP_GUARD:g}] at t={k * dt:.6g}")
        near = u[:edge].sum() + u[-edge:].sum()
        if near * h > ESCAPE_FRACTION * mass0:
            raise DomainEscape(
                f"mass {near * h:.3g} in the boundary cells at t={k * dt:.6g}; "
                "widen the window")
        if k in marks:
            record(marks[k])
    return frames


@dataclass
class CompareReport:
    """Per-frame differences and their maxima."""

    rows: list = field(default_factory=list)

    @property
    def sup_du(self):
        return max((r["sup_du"] for r in self.rows), default=0.0)

    @property
    def d_ubar(self):
        return max((r["d_ubar"] for r in self.rows), default=0.0)

    @property
    def d_mass(self):
        return max((r["d_mass"] for r in self.rows), default=0.0)

    def to_dict(self):
        return {"frames": self.rows, "max_sup_du": self.sup_du,
                "max_d_ubar": self.d_ubar, "max_d_mass": self.d_mass}


def _reference_frames(explicit, frames):
    if isinstance(explicit, Profile):
        p = explicit
        out = []
        for fr in frames:
            vals = evaluate_u(p, fr.t, fr.x) if fr.t > 0 else p.density(fr.x)
            g = GridFunction(fr.u.x_lo, fr.u.x_hi, vals)
            out.append(SolutionFrame(fr.t, g, mean_fitness(p, fr.t), 1.0))
        return out
    if callable(explicit):
        out = []
        for fr in frames:
            g = GridFunction(fr.u.x_lo, fr.u.x_hi, explicit(fr.t, fr.x))
            out.append(SolutionFrame(fr.t, g, g.integral(1), g.integral()))
        return out
    ref = list(explicit)
    if len(ref) != len(frames):
        raise GridMismatch(f"{len(ref)} reference frames vs {len(frames)}")
    return ref


def compare(explicit, frames):
    """Compare ``frames`` with a reference.

    ``explicit`` is a Profile (explicit solution, exact mean fitness and
    unit mass), a callable ``(t, x) -> u`` (moments by trapezoid on the
    frame grid) or a sequence of frames on the same grids and times.

    Raises
    ------
    GridMismatch
        If reference frames do not share times and grids with ``frames``.
    """
    frames = list(frames)
    ref = _reference_frames(explicit, frames)
    report = CompareReport()
    for a, b in zip(ref, frames):
        if abs(a.t - b.t) > 1e-12 * max(1.0, abs(b.t)) or not a.u.same_grid(b.u):
            raise GridMismatch(f"frames at t={a.t} and t={b.t} are not aligned")
        report.rows.append({
            "t": float(b.t),
            "sup_du": float(np.max(np.abs(a.u.values - b.u.values))),
            "d_ubar": float(abs(a.u_bar - b.u_bar)),
            "d_mass": float(abs(a.mass - b.mass)),
        })
    return report


def self_convergence(p, t_end, n=2048, dt=1e-4, weight=Weight.LINEAR):
    """Error ratio between ``(n, dt)`` and ``(2n - 1, dt/2)`` runs.

    Both runs share the window of ``OracleConfig.for_profile(p, t_end)``;
    ``2n - 1`` points halve the spacing exactly.  The error is the sup
    distance to the explicit solution at ``t_end``.  Returns
    ``(ratio, coarse_error, fine_error)``.
    """
    c1 = OracleConfig.for_profile(p, t_end, n, dt, weight)
    c2 = OracleConfig(c1.x_lo, c1.x_hi, 2 * n - 1, dt / 2)
    e = []
    for cfg in (c1, c2):
        fr = integrate(p, cfg, t_end, weight, record_times=(t_end,))
        e.append(compare(p, fr).sup_du)
    return e[0] / e[1], e[0], e[1]


def run_manifest(p, cfg, t_end, weight, report, elapsed):
    """JSON-ready description of an oracle run."""
    return {"profile": p.to_dict(), "config": cfg.to_dict(), "t_end": t_end,
            "weight": _weight_fn(weight).value, "report": report.to_dict(),
            "timings": {"integrate_s": elapsed}}


def timed_integrate(p, cfg, t_end, weight=Weight.LINEAR, record_times=None):
    """:func:`integrate` plus wall-clock seconds."""
    t0 = time.perf_counter()
    frames = integrate(p, cfg, t_end, weight, record_times)
    return frames, time.perf_counter() - t0
