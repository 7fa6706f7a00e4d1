"""
Same circuit, different particles
=================================

Swapping two creation operators costs a phase exp(i*theta): nothing for
bosons, a sign for fermions, something in between for anyons.  Only the
|110> and |101> (and for anyons |111>) branches pick up a phase, and the
output layer can absorb it.
"""

import math

import numpy as np

from notouch import BOSONS, FERMIONS, ExchangeStatistics, decompose, protocol
from notouch.schmidt_canonical import w_state

canon = decompose(w_state()).without_locals()
reference = protocol.run(canon, BOSONS).qubit_state

for stats in (FERMIONS, ExchangeStatistics.anyons(math.pi / 3)):
    print(stats.label())
    for branch, phase in protocol.exchange_phases(stats).items():
        print(f"  |{branch}> picks up {complex(np.round(phase, 3))}")

    # leaving the output layer as for bosons gives the wrong state
    raw = protocol.run(canon, stats, compensate=False).qubit_state
    print("  fidelity without compensation:", round(reference.fidelity(raw), 6))

    fixed = protocol.run(canon, stats)
    print("  fidelity with compensation:   ", round(reference.fidelity(fixed.qubit_state), 12))
    print("  success probability:", fixed.success_probability)
