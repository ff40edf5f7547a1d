"""Outcome probabilities as ratios of probe pairings.

A measurement outcome is represented by a positive functional on the
boundary space.  Its probability is the pairing with the state divided by
the pairing of the reference functional, and for projective families this
ratio lands exactly on the trace formula.
"""

import numpy as np

import convexop as cx

rng = np.random.default_rng(7)

d = 3
space = cx.make_quantum_space(d)
rho = cx.random_density(d, rng)
state = cx.from_matrix(space, rho)

# random orthonormal frame -> rank one projective family
u = cx.random_unitary(d, rng)
projectors = [np.outer(u[:, k], u[:, k].conj()) for k in range(d)]

star = cx.ProbeFunctional((space,), cx.matrix_to_coords(np.eye(d)))
outcomes = [
    cx.ProbeFunctional((space,), cx.matrix_to_coords(p)) for p in projectors
]

print("outcome   pairing ratio   trace rule")
total = 0.0
for k, (probe, p) in enumerate(zip(outcomes, projectors)):
    ratio = cx.outcome_probability(probe, star, state)
    trace = float(np.real(np.trace(p @ rho)))
    total += ratio
    print(f"   {k}      {ratio:.12f}  {trace:.12f}")

print(f"sum of outcomes: {total:.12f}")
print(f"family complete: {cx.completeness_check(outcomes, star, 1e-10)}")

# the same number through the operational layer
spec, _ = cx.spectral_measurement(u @ np.diag(np.arange(d, dtype=float)) @ u.conj().T)
p0 = cx.predict(state, spec, "0")
print(f"operational prediction for outcome 0: {p0:.12f}")
