"""Travelling waves psi_c(x - c t) built from the Airy function.

Each has unit mass and zero mean, solves psi'' + c psi' + x psi = 0 and
changes sign, so none of them is a population density.  The Fourier
integral reproduces the closed form.
"""
import numpy as np

from repmut import NoSolitaryWave, WaveProfile, solitary_wave, wave_from_fourier
from repmut.waves import sign_changes, wave_moments, wave_residual

for c in (0.5, 1.0, 2.0):
    m0, m1 = wave_moments(c)
    w = WaveProfile.build(c, h=1e-2)
    fourier = max(abs(wave_from_fourier(c, x)[0] - solitary_wave(c, x))
                  for x in np.linspace(-10, 10, 21))
    print(f"c={c}: mass {m0:.10f} mean {m1:+.1e} residual {wave_residual(c):.1e} "
          f"min {w.samples.values.min():.2e} fourier gap {fourier:.1e} "
          f"sign changes on [-15, 5]: {sign_changes(c, (-15, 5))}")

try:
    solitary_wave(0.0, 0.0)
except NoSolitaryWave as exc:
    print("c=0:", exc)
