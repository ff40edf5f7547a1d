"""Why the quantum cone has no infima: an explicit witness.

Classically, two effects always have a greatest lower bound, the
pointwise minimum.  On the cone of positive semidefinite matrices the
analogue fails: for an incomparable pair the witness below produces two
lower bounds with no common dominator that is still a lower bound, so no
candidate can be greatest.
"""

import numpy as np

import convexop as cx

space = cx.make_quantum_space(2)
a = cx.from_matrix(space, np.diag([1.0, 0.0]).astype(complex))
b = cx.from_matrix(space, np.diag([0.0, 1.0]).astype(complex))

relation = cx.classify_order(a, b)
print(f"order relation of the pair: {relation.verdict}")

witness = cx.anti_lattice_witness(a, b)
print("first lower bound:")
print(np.array_str(witness.c1.real, precision=6, suppress_small=True))
print("second lower bound (indefinite, still below both):")
print(np.array_str(witness.c2.real, precision=6, suppress_small=True))
print(f"grid search for a dominating lower bound "
      f"(step {witness.grid_step}): {witness.dominator}")

rng = np.random.default_rng(11)
found = 0
while found < 5:
    ea = cx.from_matrix(space, cx.random_psd(2, rng))
    eb = cx.from_matrix(space, cx.random_psd(2, rng))
    if cx.classify_order(ea, eb).verdict != "incomparable":
        continue
    found += 1
    w = cx.anti_lattice_witness(ea, eb)
    print(f"random pair {found}: dominator found: {w.dominator is not None}")

# the classical story for contrast: the pointwise minimum dominates
# every lower bound, so it is a true infimum
cells = cx.make_classical_space(cx.PhaseSpace(4, np.ones(4)))
f = cx.Element(cells, np.array([0.9, 0.2, 0.7, 0.4]))
g = cx.Element(cells, np.array([0.3, 0.8, 0.6, 0.5]))
m = cx.meet(f, g)
print(f"classical meet: {m.coords}")
low = cx.Element(cells, m.coords - rng.uniform(0.0, 0.2, size=4))
print(f"sampled lower bound below the meet: {cx.leq(low, m)}")
