"""Acceptance criteria, one test and one summary line each.

Every test records ``criterion N PASS|FAIL: detail`` in
``conftest.ACCEPTANCE_LINES``; the lines are printed at the end of the
pytest run.  Tolerances and budgets are pinned here.
"""
import json
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from repmut import cli
from repmut.closedform import evaluate_u, mean_fitness, solution_grid, solve_status
from repmut.errors import BlowUp, NeverDefined, NoSolitaryWave
from repmut.oracle import OracleConfig, compare, integrate, self_convergence
from repmut.profiles import (AlgebraicTail, CompactSampled, Dirac,
                             ExponentialTail, Gaussian, normalize)
from repmut.reductions import (drift_free_blowup, fundamental_pair, heat_flow,
                               lens_transform, mehler_solution, quad_v_frame,
                               quad_weight_solution, resolve_mehler_sign,
                               transform_route_u)
from repmut.waves import (sign_changes, solitary_wave, wave_from_fourier,
                          wave_moments, wave_residual)


def record(n, checks, elapsed=None, budget=None):
    """Store the summary line for criterion ``n`` and assert it.

    ``checks`` maps a clause name to ``(ok, detail)``.
    """
    if budget is not None:
        checks["runtime"] = (elapsed < budget, f"{elapsed:.2f}s < {budget}s")
    failed = [k for k, (ok, _) in checks.items() if not ok]
    detail = "; ".join(f"{k} {d}{'' if ok else ' [FAIL]'}" for k, (ok, d) in checks.items())
    line = f"criterion {n:2d} {'FAIL' if failed else 'PASS'}: {detail}"
    ACCEPTANCE_LINES[f"{n:02d}"] = line
    print(line)
    assert not failed, line


def bump(lo=-1.0, hi=1.0, n=801):
    def f(y):
        z = (2 * y - lo - hi) / (hi - lo)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(np.abs(z) < 1, np.exp(-1 / (1 - z * z)), 0.0)
    return normalize(CompactSampled.from_function(f, lo, hi, n))


def test_criterion_01_gaussian_self_similarity():
    t0 = time.perf_counter()
    p = Gaussian(1.0, 0.0)
    x = np.linspace(-20, 40, 6001)
    err = {"closed": 0.0, "quad": 0.0}
    xq = np.linspace(-20, 40, 121)
    for t in (0.1, 1.0, 5.0):
        a, m = 1 / (1 + 2 * t), t * t + t
        ref = lambda z: np.sqrt(a / (2 * np.pi)) * np.exp(-a * (z - m) ** 2 / 2)
        err["closed"] = max(err["closed"], float(np.max(np.abs(evaluate_u(p, t, x) - ref(x)))))
        err["quad"] = max(err["quad"], float(np.max(np.abs(
            evaluate_u(p, t, xq, method="quad") - ref(xq)))))
    elapsed = time.perf_counter() - t0
    record(1, {k: (v <= 1e-8, f"sup {v:.1e} <= 1e-8") for k, v in err.items()},
           elapsed, 1.0)


def test_criterion_02_mean_fitness():
    p = ExponentialTail(1.0)
    err = max(abs(mean_fitness(p, t) - (t * t + 1 / (1 - t))) for t in (0.25, 0.5, 0.9))
    dirac_exact = all(mean_fitness(Dirac(0.0), t) == t * t for t in (0.0, 0.3, 1.0, 7.5))
    record(2, {"exponential": (err <= 1e-8, f"max error {err:.1e} <= 1e-8"),
               "dirac": (dirac_exact, "t**2 exactly")})


def test_criterion_03_extinction():
    t0 = time.perf_counter()
    p = ExponentialTail(1.0)
    sups, gap = [], 0.0
    for t in (0.9, 0.99, 0.999):
        x = solution_grid(p, t)
        u = evaluate_u(p, t, x)
        sups.append(float(u.max()))
        xs = solution_grid(p, t, 64)
        a = evaluate_u(p, t, xs)
        b = evaluate_u(p, t, xs, method="quad")
        keep = a > 1e-6 * a.max()
        gap = max(gap, float(np.max(np.abs(a[keep] / b[keep] - 1))))
    elapsed = time.perf_counter() - t0
    mono = sups[0] > sups[1] > sups[2]
    record(3, {"monotone": (mono, "sup u " + " > ".join(f"{s:.3g}" for s in sups)),
               "routes": (gap <= 1e-9, f"relative gap {gap:.1e} <= 1e-9")},
           elapsed, 5.0)


def test_criterion_04_ill_posedness(tmp_path):
    raised = []
    for q in (1.5, 2.0, 3.0):
        p = AlgebraicTail(q)
        for fn in (lambda: evaluate_u(p, 0.1, 0.0), lambda: mean_fitness(p, 0.1)):
            try:
                fn()
                raised.append(False)
            except NeverDefined:
                raised.append(True)
    status = solve_status(AlgebraicTail(2.0)).to_dict()
    spec = tmp_path / "alg.json"
    spec.write_text(json.dumps({"name": "alg", "times": [0.5],
                                "profile": {"kind": "AlgebraicTail", "p": 2}}))
    code = cli.main(["solve", "--spec", str(spec), "--out", str(tmp_path / "o"), "--quiet"])
    written = sorted(f.name for f in (tmp_path / "o").iterdir())
    record(4, {"refused": (all(raised), f"{sum(raised)}/{len(raised)} NeverDefined"),
               "status": (status == {"status": "NeverDefined", "T": 0}, json.dumps(status)),
               "cli": (code == 2 and written == ["summary.json"],
                       f"exit {code}, wrote {written}")})


def test_criterion_05_oracle_equivalence():
    t0 = time.perf_counter()
    p = Gaussian(1.0, 0.0)
    cfg = OracleConfig.for_profile(p, 0.5, n=2048, dt=1e-4)
    times = [k / 20 for k in range(11)]
    frames = integrate(p, cfg, 0.5, record_times=times)
    rep = compare(p, frames)
    ratio, _, _ = self_convergence(p, 0.5, n=2048, dt=1e-4)
    elapsed = time.perf_counter() - t0
    record(5, {"sup": (rep.sup_du <= 1e-3, f"{rep.sup_du:.1e} <= 1e-3"),
               "mass drift": (rep.d_mass <= 1e-4, f"{rep.d_mass:.1e} <= 1e-4"),
               "u_bar": (rep.d_ubar <= 1e-3, f"{rep.d_ubar:.1e} <= 1e-3"),
               "ratio": (3 <= ratio <= 5, f"{ratio:.3f} in [3, 5]")},
           elapsed, 60.0)


def test_criterion_06_long_time_bound():
    t0 = time.perf_counter()
    p = normalize(CompactSampled.from_function(np.ones_like, -1.0, 1.0, 4001))
    worst = 0.0
    for t in (1, 2, 5, 10, 50):
        x = solution_grid(p, t)
        ref = np.exp(-(x - t * t) ** 2 / (4 * t)) / np.sqrt(4 * np.pi * t)
        worst = max(worst, t * float(np.max(np.abs(evaluate_u(p, t, x) - ref))))
    elapsed = time.perf_counter() - t0
    record(6, {"bound": (worst <= 0.43, f"max t*dev {worst:.4f} <= 0.43")}, elapsed, 10.0)


def test_criterion_07_solitary_waves():
    t0 = time.perf_counter()
    checks = {}
    for c in (1.0, 2.0):
        m0, m1 = wave_moments(c)
        res = wave_residual(c, (-15.0, 10.0), 1e-3)
        xs = np.linspace(-10, 10, 41)
        fourier = max(abs(wave_from_fourier(c, x)[0] - solitary_wave(c, x)) for x in xs)
        nsc = sign_changes(c, (-15.0, 5.0))
        k = f"c={c:g}"
        checks[f"{k} mass"] = (abs(m0 - 1) <= 1e-6, f"|{m0:.10f} - 1| <= 1e-6")
        checks[f"{k} mean"] = (abs(m1) <= 1e-6, f"{m1:.1e}")
        checks[f"{k} residual"] = (res <= 1e-5, f"{res:.1e} <= 1e-5")
        checks[f"{k} fourier"] = (fourier <= 1e-7, f"{fourier:.1e} <= 1e-7")
        checks[f"{k} sign changes"] = (nsc >= 3, f"{nsc} >= 3 on [-15, 5]")
    try:
        solitary_wave(0.0, 0.0)
        rejected = False
    except NoSolitaryWave:
        rejected = True
    checks["c=0"] = (rejected, "NoSolitaryWave")
    record(7, checks, time.perf_counter() - t0, 10.0)


def test_criterion_08_quadratic_weight():
    p = Gaussian(1.0, 0.0)
    drift = 0.0
    for t in (0.5, 1.0):
        fr = quad_weight_solution(1.0, 0.0, t)
        drift = max(drift, float(np.max(np.abs(fr.u.values - p.density(fr.x)))))
    sign, _ = resolve_mehler_sign()
    pr = fundamental_pair(1.0, 2.0, 1e-3)
    x = np.linspace(-5, 5, 101)
    lens_gap = max(float(np.max(np.abs(lens_transform(heat_flow(p), pr, t, x)
                                       - mehler_solution(p, t, x, cross_sign=sign))))
                   for t in (0.25, 0.5, 1.0))
    xg = np.linspace(-12, 12, 4096)
    m2 = max(abs(quad_v_frame(1.0, 0.0, t, xg).u.integral(2) - math.exp(-t))
             for t in (0.25, 0.5, 1.0, 2.0))
    record(8, {"ground state": (drift <= 1e-8, f"drift {drift:.1e} <= 1e-8"),
               "mehler vs lens": (lens_gap <= 1e-8, f"sign {sign:+d}, gap {lens_gap:.1e} <= 1e-8"),
               "second moment": (m2 <= 1e-8, f"|int x^2 v - exp(-t)| {m2:.1e} <= 1e-8")})


def test_criterion_09_blow_up():
    try:
        drift_free_blowup(Gaussian(1.0, -1.0), np.linspace(0, 1.5, 151))
        ok, detail = False, "no BlowUp raised"
    except BlowUp as exc:
        ok = 0.999 <= exc.t_star <= 1.001
        detail = f"T* = {exc.t_star:.6f} in [0.999, 1.001]"
    record(9, {"blow-up": (ok, detail)})


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_criterion_10_transform_coherence():
    x = np.linspace(-10, 10, 81)
    checks = {}
    for name, p in (("gaussian", Gaussian(1.0, 0.0)), ("bump", bump())):
        gap = 0.0
        for t in (0.1, 0.5, 1.0):
            u, _ = transform_route_u(p, t, x)
            gap = max(gap, float(np.max(np.abs(u - evaluate_u(p, t, x)))))
        checks[name] = (gap <= 1e-7, f"sup {gap:.1e} <= 1e-7")
    record(10, checks)
