"""The right tail of the initial density decides everything.

T = sup{t : int exp(t y) u0(y) dy < inf} separates global solutions
(T = inf), extinction at T, and data for which no solution exists.
"""
from repmut import (AlgebraicTail, ExponentialTail, Gaussian,
                    ModifiedExponentialTail, NeverDefined, classify_tail,
                    evaluate_u)

for p in (Gaussian(1.0, 0.0), ExponentialTail(2.0),
          ModifiedExponentialTail(1.0, 2.0), AlgebraicTail(3.0)):
    tc = classify_tail(p)
    print(f"{p.kind:26s} {tc.kind.value:10s} T={tc.T}")

try:
    evaluate_u(AlgebraicTail(3.0), 0.01, 0.0)
except NeverDefined as exc:
    print("algebraic tail refused:", exc)
