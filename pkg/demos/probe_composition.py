"""Composing processes by contracting a shared boundary factor.

Two maps in series can be described without ever mentioning operators:
represent each map as a probe on (initial x final), then sum both probes
against an orthonormal basis of the boundary they share.  The contraction
reproduces the probe of the composite map, and any orthonormal basis of
the shared factor gives the same answer.
"""

import numpy as np

import convexop as cx

rng = np.random.default_rng(21)

space = cx.make_quantum_space(2)
u1 = cx.random_unitary(2, rng)
u2 = cx.random_unitary(2, rng)

first = cx.map_to_probe(cx.unitary_operation(space, u1), final_id="mid")
mid = first.boundary[1]
second = cx.map_to_probe(
    cx.unitary_operation(mid, u2), initial_id="mid", final_id="out"
)

composed = cx.compose(first, second, shared="mid")
direct = cx.map_to_probe(cx.unitary_operation(space, u2 @ u1), final_id="out")
gap = float(np.abs(composed.coeffs - direct.coeffs).max())
print(f"contraction vs composite map: {gap:.2e}")

# rotate the basis used for the contraction; nothing changes
q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
rotated = cx.compose(first, second, shared="mid", basis=q)
gap = float(np.abs(rotated.coeffs - composed.coeffs).max())
print(f"rotated contraction basis:    {gap:.2e}")

# probes and maps are two descriptions of one object
back = cx.probe_to_map(composed)
direct_matrix = cx.unitary_operation(space, u2 @ u1).matrix
gap = float(np.abs(back.matrix - direct_matrix).max())
print(f"round trip to a map:          {gap:.2e}")
rho = cx.random_density(2, rng)
state = cx.from_matrix(space, rho)
evolved = cx.apply_operation(back, state)
expected = u2 @ u1 @ rho @ (u2 @ u1).conj().T
gap = float(np.abs(cx.to_matrix(evolved) - expected).max())
print(f"recovered map moves states:   {gap:.2e}")

# pairing the map probe with a product of states gives the transition weight
b1 = cx.from_matrix(space, rho)
sigma = cx.random_density(2, rng)
b2 = cx.from_matrix(first.boundary[1], sigma)
w = cx.pair(first, cx.tensor_element(b1, b2))
expected = float(np.real(np.trace(sigma @ u1 @ rho @ u1.conj().T)))
print(f"transition weight check:      {abs(w - expected):.2e}")
