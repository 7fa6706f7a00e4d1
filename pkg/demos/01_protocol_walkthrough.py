"""
Preparing a three-qubit state with ten optical modes
====================================================

Three particles enter modes 1, 6 and 8, pass through a fixed layer of
splitters, a path permutation and a tunable output layer, and are kept only
when each dual-rail pair (1,2), (6,7), (9,10) holds exactly one particle.
"""

import numpy as np

from notouch import decompose, interferometer, protocol, random_state

# pick a target at random and bring it to its five-term canonical form
target = random_state(11)
canon = decompose(target)
print("canonical coefficients a..e:", np.round(canon.coefficients, 4))
print("relative phase phi:", round(canon.phi, 4))

# the output layer parameters follow directly from the canonical form
params = protocol.solve_params(canon.without_locals())
print("largest constraint residual:", max(params.constraint_residuals()))

circuit = interferometer.build_circuit(params)
print("total 10x10 transfer matrix is unitary:", interferometer.is_unitary(circuit.total()))

# run the full circuit including the local rotations on each pair;
# every heralded term is printed as a triple of occupied modes
result, locals_ = protocol.prepare(target)
for modes, amp in result.raw_terms:
    print(f"  modes {modes}: {amp:.5f}")

print("success probability:", result.success_probability, "(1/18 =", 1 / 18, ")")
print("fidelity with target:", target.fidelity(result.qubit_state))
