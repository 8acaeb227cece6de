"""Explicit solutions for the three light-tailed cases.

A Gaussian stays Gaussian: its centre runs off like t**2 + t while its
width grows like sqrt(1 + 2t).  An exponential right tail dies out at a
finite time.  A point mass spreads like the heat kernel riding on t**2.
"""
import numpy as np

from repmut import (Dirac, ExponentialTail, Gaussian, evaluate_u,
                    mean_fitness, solution_grid)

p = Gaussian(1.0, 0.0)
print("Gaussian(1, 0)")
for t in (0.1, 1.0, 5.0):
    x = solution_grid(p, t)
    u = evaluate_u(p, t, x)
    print(f"  t={t:<4} mean fitness {mean_fitness(p, t):8.3f}  "
          f"peak at x={x[np.argmax(u)]:7.3f}  peak height {u.max():.4f}")

q = ExponentialTail(1.0)
print("ExponentialTail(1): extinct at T = 1")
for t in (0.5, 0.9, 0.99, 0.999):
    u = evaluate_u(q, t, solution_grid(q, t))
    print(f"  t={t:<6} mean fitness {mean_fitness(q, t):10.3f}  sup u {u.max():.3e}")

print("Dirac(0): mean fitness is t**2")
for t in (0.5, 2.0):
    print(f"  t={t}  u_bar={mean_fitness(Dirac(0.0), t)}")
