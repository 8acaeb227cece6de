"""Every compactly supported start forgets its shape.

For data on [-M, M] the solution approaches the travelling heat kernel
(4 pi t)**-1/2 exp(-(x - t**2)**2 / 4t) at rate M / (t sqrt(2e)).
"""
import numpy as np

from repmut import CompactSampled, normalize
from repmut.closedform import deviation, deviation_bound

p = normalize(CompactSampled.from_function(np.ones_like, -1.0, 1.0, 4001))
for t in (1, 2, 5, 10, 50):
    d = deviation(p, t)
    print(f"t={t:<3} t*dev={t * d:.4f}  bound*t={t * deviation_bound(1.0, t):.4f}")
