import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from repmut.closedform import mean_fitness, evaluate_u
from repmut.errors import (DomainEscape, GridMismatch, NeverDefined,
                           OutOfLifespan, Unstable)
from repmut.io import dumps
from repmut.oracle import (OracleConfig, compare, integrate, run_manifest,
                           self_convergence, timed_integrate)
from repmut.profiles import (AlgebraicTail, CompactSampled, Dirac,
                             ExponentialTail, Gaussian, GridFunction, normalize)
from repmut.reductions import Weight

TIMES = (0.0, 0.1, 0.25, 0.5)


@pytest.fixture(scope="module")
def gaussian_run():
    p = Gaussian(1.0, 0.0)
    cfg = OracleConfig.for_profile(p, 0.5, n=2048, dt=1e-4)
    return p, cfg, integrate(p, cfg, 0.5, record_times=TIMES)


def bump(n=801):
    def f(y):
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(np.abs(y) < 1, np.exp(-1 / (1 - y * y)), 0.0)
    return normalize(CompactSampled.from_function(f, -1.0, 1.0, n))


class TestConfig:
    def test_step_limited_by_spacing(self):
        with pytest.raises(ValueError, match="h\\*\\*2"):
            OracleConfig(-10, 10, 2001, 1e-3)

    @pytest.mark.parametrize("kw", [dict(x_lo=1.0, x_hi=0.0), dict(n=4), dict(dt=0.0),
                                    dict(scheme="Euler"), dict(boundary="Periodic")])
    def test_validation(self, kw):
        base = dict(x_lo=-10.0, x_hi=10.0, n=201, dt=1e-3)
        with pytest.raises(ValueError):
            OracleConfig(**{**base, **kw})

    def test_window_covers_the_travelling_bulk(self):
        cfg = OracleConfig.for_profile(Gaussian(1.0, 0.0), 2.0, n=4096, dt=1e-4)
        # bulk at t**2 + t = 6 with width sqrt(4) + 1 = 3
        assert cfg.x_lo <= -12 and cfg.x_hi >= 6 + 12 * 3

    def test_dict_round_trip(self):
        cfg = OracleConfig(-3.0, 4.0, 101, 1e-3)
        assert OracleConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


class TestGaussianRun:
    def test_sup_error(self, gaussian_run):
        p, _, frames = gaussian_run
        rep = compare(p, frames)
        assert rep.sup_du <= 1e-3

    def test_mass_conserved(self, gaussian_run):
        _, _, frames = gaussian_run
        assert max(abs(fr.mass - 1) for fr in frames) <= 1e-4

    def test_mean_fitness(self, gaussian_run):
        p, _, frames = gaussian_run
        for fr in frames:
            assert fr.u_bar == pytest.approx(mean_fitness(p, fr.t), abs=1e-3)

    def test_nonnegative(self, gaussian_run):
        _, _, frames = gaussian_run
        assert min(fr.u.values.min() for fr in frames) >= -1e-10

    def test_recorded_times(self, gaussian_run):
        _, cfg, frames = gaussian_run
        assert [fr.t for fr in frames] == list(TIMES)
        assert all(fr.u.n == cfg.n for fr in frames)

    def test_report_rows(self, gaussian_run):
        p, _, frames = gaussian_run
        rep = compare(p, frames)
        assert [r["t"] for r in rep.rows] == list(TIMES)
        assert rep.rows[0]["sup_du"] <= 1e-15
        d = rep.to_dict()
        assert d["max_sup_du"] == rep.sup_du

    def test_manifest(self, gaussian_run):
        p, cfg, frames = gaussian_run
        man = run_manifest(p, cfg, 0.5, Weight.LINEAR, compare(p, frames), 1.0)
        assert set(man) == {"profile", "config", "t_end", "weight", "report", "timings"}
        json.loads(dumps(man))


def test_second_order_self_convergence():
    ratio, coarse, fine = self_convergence(Gaussian(1.0, 0.0), 0.5, n=512, dt=1e-3)
    assert 3 <= ratio <= 5
    assert fine < coarse


def test_smooth_compact_data():
    p = bump()
    cfg = OracleConfig.for_profile(p, 0.5, n=1024, dt=4e-4)
    rep = compare(p, integrate(p, cfg, 0.5, record_times=(0.1, 0.5)))
    assert rep.sup_du <= 1e-3


def test_light_tail_before_extinction():
    p = ExponentialTail(1.0)
    cfg = OracleConfig.for_profile(p, 0.5, n=2048, dt=1e-4)
    rep = compare(p, integrate(p, cfg, 0.5, record_times=(0.25, 0.5)))
    # the jump of u0 at 0 costs accuracy; the frames still agree
    assert rep.sup_du <= 5e-3


@pytest.mark.parametrize("t", [0.5, 1.0])
def test_quadratic_ground_state_is_stationary(t):
    p = Gaussian(1.0, 0.0)
    cfg = OracleConfig.for_profile(p, t, n=2048, dt=1e-4, weight=Weight.QUADRATIC)
    fr = integrate(p, cfg, t, Weight.QUADRATIC, record_times=(t,))[0]
    assert np.max(np.abs(fr.u.values - p.density(fr.x))) <= 1e-4
    assert fr.u_bar == pytest.approx(-1.0, abs=1e-4)


@settings(max_examples=8, deadline=None)
@given(a=st.floats(0.5, 4.0), m=st.floats(-1.0, 1.0))
def test_nonnegativity_and_mass(a, m):
    p = Gaussian(a, m)
    cfg = OracleConfig.for_profile(p, 0.2, n=512, dt=1e-3)
    fr = integrate(p, cfg, 0.2, record_times=(0.2,))[0]
    assert fr.u.values.min() >= -1e-10
    assert fr.mass == pytest.approx(1.0, abs=1e-4)


class TestFailures:
    def test_domain_escape(self):
        with pytest.raises(DomainEscape):
            integrate(Gaussian(1.0, 0.0), OracleConfig(-5, 5, 512, 1e-4), 0.5)

    def test_unstable(self):
        h = 2 / 16
        cfg = OracleConfig(-1, 1, 17, 0.5 * h * h)
        with pytest.raises(Unstable):
            integrate(Gaussian(1e26, 0.0), cfg, 2 * cfg.dt)

    def test_refuses_past_extinction(self):
        with pytest.raises(OutOfLifespan):
            integrate(ExponentialTail(1.0), OracleConfig(-20, 20, 512, 1e-3), 1.2)

    def test_refuses_heavy_tail(self):
        with pytest.raises(NeverDefined):
            integrate(AlgebraicTail(2.0), OracleConfig(-20, 20, 512, 1e-3), 0.1)

    def test_needs_a_density(self):
        with pytest.raises(ValueError):
            integrate(Dirac(0.0), OracleConfig(-20, 20, 512, 1e-3), 0.1)

    def test_record_times_on_the_step_lattice(self):
        with pytest.raises(ValueError):
            integrate(Gaussian(), OracleConfig(-20, 20, 512, 1e-3), 0.1, record_times=(0.05005,))


class TestCompare:
    def test_identical_inputs(self, gaussian_run):
        _, _, frames = gaussian_run
        rep = compare(frames, frames)
        assert rep.sup_du == rep.d_ubar == rep.d_mass == 0.0

    def test_offset_point_mass_differs(self, gaussian_run):
        _, _, frames = gaussian_run
        later = [fr for fr in frames if fr.t > 0]
        rep = compare(lambda t, x: evaluate_u(Dirac(1.0), t, x), later)
        assert rep.sup_du > 0.1 and rep.d_ubar > 0.5

    def test_grid_mismatch(self, gaussian_run):
        _, _, frames = gaussian_run
        g = frames[-1]
        other = type(g)(g.t, GridFunction(g.u.x_lo, g.u.x_hi + 1, g.u.values), 0.0, 1.0)
        with pytest.raises(GridMismatch):
            compare([other], [g])

    def test_time_mismatch(self, gaussian_run):
        _, _, frames = gaussian_run
        with pytest.raises(GridMismatch):
            compare(frames[:2], frames[1:3])

    def test_count_mismatch(self, gaussian_run):
        _, _, frames = gaussian_run
        with pytest.raises(GridMismatch):
            compare(frames[:2], frames)


def test_timed_integrate_reports_seconds():
    frames, secs = timed_integrate(Gaussian(), OracleConfig(-15, 15, 256, 1e-2), 0.1)
    assert secs >= 0 and len(frames) == 2
