"""Fitness -x**2: harmonic oscillator and the Mehler kernel.

The standard Gaussian is a ground state that never moves.  The lens
transform of the heat flow matches the Mehler kernel once the sign of
its cross term is fixed by an asymmetric test density.
"""
import numpy as np

from repmut import Gaussian, fundamental_pair, heat_flow, lens_transform
from repmut.reductions import (mehler_solution, quad_weight_solution,
                               resolve_mehler_sign)

p = Gaussian(1.0, 0.0)
for t in (0.5, 1.0):
    fr = quad_weight_solution(1.0, 0.0, t)
    print(f"t={t}: ground state drift {np.max(np.abs(fr.u.values - p.density(fr.x))):.1e}")

sign, gaps = resolve_mehler_sign()
print(f"Mehler cross sign {sign:+d}; gaps per sign {gaps}")
pr = fundamental_pair(1.0, 2.0, 1e-3)
x = np.linspace(-5, 5, 101)
gap = np.max(np.abs(lens_transform(heat_flow(p), pr, 1.0, x) - mehler_solution(p, 1.0, x)))
print(f"lens vs Mehler at t=1: {gap:.1e}")

drift = quad_weight_solution(2.0, 1.0, 1.0)
print(f"Gaussian(2, 1) at t=1: mass {drift.mass:.12f}, -u_bar {-drift.u_bar:.6f}")
