"""Reversible evolution on quantum and classical models.

Quantum evolution is the one parameter group generated by a Hamiltonian;
classical evolution is a measure preserving permutation of phase space.
Both compose by addition of the time parameter, preserve the cone and
the normalization pairing, and the numerical integrator tracks the exact
group to fourth order.
"""

import numpy as np

import convexop as cx

space = cx.make_quantum_space(2)
sigma_z = np.diag([1.0, -1.0]).astype(complex)
group = cx.hamiltonian_evolution(sigma_z, space)

plus = cx.from_matrix(space, cx.pure_state(np.array([1.0, 1.0]) / np.sqrt(2)))

# a quarter period under sigma_z turns |+> into |->
rotated = cx.evolve(group, np.pi / 2, plus)
minus = cx.pure_state(np.array([1.0, -1.0]) / np.sqrt(2))
print(f"|+> to |-> gap at t=pi/2:  "
      f"{float(np.abs(cx.to_matrix(rotated) - minus).max()):.2e}")

# group law: evolving by s then t equals evolving by s + t
s, t = 0.3, 1.1
lhs = cx.evolve(group, t, cx.evolve(group, s, plus))
rhs = cx.evolve(group, s + t, plus)
print(f"group law gap:             "
      f"{float(np.abs(lhs.coords - rhs.coords).max()):.2e}")

# the integrator follows the exact path and keeps the trace
rng = np.random.default_rng(3)
h = cx.random_hermitian(3, rng)
big = cx.make_quantum_space(3)
b0 = cx.from_matrix(big, cx.random_density(3, rng))
exact = cx.evolve(cx.hamiltonian_evolution(h, big), 1.0, b0)
stepped = cx.liouville_integrate(h, b0, 1.0, dt=1e-3)
print(f"integrator error at t=1:   "
      f"{float(np.abs(stepped.coords - exact.coords).max()):.2e}")
drift = abs(cx.inner(cx.unit_element(big), stepped) - 1.0)
print(f"trace drift:               {drift:.2e}")

# classical: a three cell cycle moves the weight around and returns
cells = cx.make_classical_space(cx.PhaseSpace(3, np.ones(3)))
cycle = cx.permutation_evolution(cells, [1, 2, 0])
start = cx.Element(cells, np.array([1.0, 0.0, 0.0]))
positions = [int(cx.evolve(cycle, k, start).coords.argmax()) for k in range(4)]
print(f"cycle orbit of cell 0:     {positions}")
