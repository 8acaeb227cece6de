"""Fast invariant checks behind ``repmut selftest``.

Each check returns ``(ok, detail)``; :func:`run_all` collects them.  The
whole suite takes a few seconds and touches every module.
"""
import numpy as np

from . import closedform, oracle, reductions, special, waves
from .errors import BlowUp, NeverDefined
from .profiles import AlgebraicTail, ExponentialTail, Gaussian


def _gaussian_similarity():
    p = Gaussian(1.0, 0.0)
    t = 1.0
    x = np.linspace(-20, 40, 601)
    a, m = 1 / (1 + 2 * t), t * t + t
    ref = np.sqrt(a / (2 * np.pi)) * np.exp(-a * (x - m) ** 2 / 2)
    err = float(np.max(np.abs(closedform.evaluate_u(p, t, x) - ref)))
    return err <= 1e-8, f"sup error {err:.2e}"


def _mean_fitness():
    err = abs(closedform.mean_fitness(ExponentialTail(1.0), 0.5) - 2.25)
    return err <= 1e-8, f"error {err:.2e}"


def _extinction_routes():
    p = ExponentialTail(1.0)
    x = closedform.solution_grid(p, 0.9, 64)
    a = closedform.evaluate_u(p, 0.9, x)
    b = closedform.evaluate_u(p, 0.9, x, method="quad")
    keep = a > 1e-6 * a.max()
    err = float(np.max(np.abs(a[keep] / b[keep] - 1)))
    return err <= 1e-9, f"relative gap {err:.2e}"


def _heavy_refused():
    try:
        closedform.evaluate_u(AlgebraicTail(2.0), 0.1, 0.0)
    except NeverDefined:
        return True, "NeverDefined raised"
    return False, "evaluated a heavy-tailed profile"


def _airy():
    xs = (-7.5, -1.0, 0.0, 2.5, 6.0)
    err = max(abs(special.airy_ai(x) - special.airy_ai_contour(x)) for x in xs)
    return err <= 1e-10, f"max gap to contour quadrature {err:.2e}"


def _wave():
    m0, m1 = waves.wave_moments(1.0)
    res = waves.wave_residual(1.0, h=1e-2)
    ok = abs(m0 - 1) <= 1e-6 and abs(m1) <= 1e-6 and res <= 1e-5
    return ok, f"mass {m0:.12f} mean {m1:.1e} residual {res:.1e}"


def _ground_state():
    p = Gaussian(1.0, 0.0)
    fr = reductions.quad_weight_solution(1.0, 0.0, 1.0, n=1024, n_frames=32)
    err = float(np.max(np.abs(fr.u.values - p.density(fr.x))))
    return err <= 1e-8, f"drift {err:.2e}"


def _mehler_sign():
    sign, errs = reductions.resolve_mehler_sign(times=(0.5,))
    return sign == reductions.MEHLER_CROSS_SIGN, f"resolved {sign}, gaps {errs}"


def _oracle():
    p = Gaussian(1.0, 0.0)
    cfg = oracle.OracleConfig.for_profile(p, 0.1, n=512, dt=1e-3)
    rep = oracle.compare(p, oracle.integrate(p, cfg, 0.1))
    return rep.sup_du <= 1e-3, f"sup error {rep.sup_du:.2e}"


def _blowup():
    try:
        reductions.drift_free_blowup(Gaussian(1.0, -1.0), np.linspace(0, 1.5, 151))
    except BlowUp as exc:
        return abs(exc.t_star - 1.0) <= 1e-3, f"T* = {exc.t_star:.6f}"
    return False, "no blow-up detected"


CHECKS = {
    "gaussian-self-similarity": _gaussian_similarity,
    "mean-fitness-exponential": _mean_fitness,
    "extinction-two-routes": _extinction_routes,
    "heavy-tail-refused": _heavy_refused,
    "airy-vs-contour": _airy,
    "solitary-wave": _wave,
    "quadratic-ground-state": _ground_state,
    "mehler-sign": _mehler_sign,
    "oracle-short-run": _oracle,
    "drift-free-blowup": _blowup,
}


def run_all():
    """``[(name, ok, detail)]`` for every check; exceptions count as
    failures."""
    out = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # report, don't crash the gate
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out


if __name__ == "__main__":
    for name, ok, detail in run_all():
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
