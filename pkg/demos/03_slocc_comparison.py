"""
How lucky does a local filter need to be?
=========================================

A GHZ-class state can also be reached from a shared GHZ state by local
filtering.  The filter succeeds with probability 1/||M||^2, which collapses
as the target approaches the W class.  Compare with the fixed 1/18 of the
optical scheme.
"""

import numpy as np

from notouch import slocc_benchmark as sb

chis, alphas = sb.default_grid(25, 25)
table = sb.sweep(chis, alphas)

print("best cell:", table.p_succ.max())
print("worst cell:", table.p_succ.min(), "at chi=%.3f alpha=%.3f" % (chis[-1], alphas[0]))
print("fraction of the grid below 1/18: %.2f" % table.below_optical().mean())

# a slice along the symmetric direction with chi fixed at pi/4
for alpha in (1.5, 0.5, 0.1, 0.01, 0.001):
    p_spec = sb.symmetric_success(np.pi / 4, alpha, "spectral")
    p_frob = sb.symmetric_success(np.pi / 4, alpha, "frobenius")
    print(f"alpha={alpha:<6} spectral {p_spec:.3e}   frobenius {p_frob:.3e}")
