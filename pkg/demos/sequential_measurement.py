"""Chains of measurements, unread outcomes, and post selection.

Conditioning on a recorded outcome uses the projection update; an unread
measurement applies the summed nonselective map instead.  The unread
step is invisible to anything already recorded but dephases the state,
which a later incompatible measurement can see.
"""

import numpy as np

import convexop as cx

space = cx.make_quantum_space(2)
plus = (np.array([1.0, 1.0]) / np.sqrt(2)).astype(complex)
state = cx.from_matrix(space, cx.pure_state(plus))

z_spec, _ = cx.spectral_measurement(np.diag([1.0, -1.0]).astype(complex),
                                    space=space, name="z")
x_spec, _ = cx.spectral_measurement(np.array([[0, 1], [1, 0]], dtype=complex),
                                    space=space, name="x")

# direct x measurement on |+>: deterministic
direct = cx.run_sequence(state, [(x_spec, "1")])
print(f"p(x=+1) directly:            {direct.probability:.6f}")

# insert an unread z measurement first; the record stays empty but the
# coherence is gone and the x outcome turns into a coin flip
dephased = cx.run_sequence(state, [(z_spec, cx.UNOBSERVED), (x_spec, "1")])
print(f"p(x=+1) after unread z:      {dephased.probability:.6f}")

# causality: adding the unread step after a recorded outcome does not
# change the recorded outcome's probability
base = cx.run_sequence(state, [(z_spec, "1")])
extended = cx.run_sequence(state, [(z_spec, "1"), (x_spec, cx.UNOBSERVED)])
print(f"p(z=+1) alone:               {base.probability:.6f}")
print(f"p(z=+1) then unread x:       {extended.probability:.6f}")

# conditioning twice on the same projector changes nothing the second time
p_up = np.array([[1, 0], [0, 0]], dtype=complex)
once = cx.luders(state, p_up)
twice = cx.luders(once, p_up)
print(f"repeatability gap:           "
      f"{float(np.abs(once.coords - twice.coords).max()):.2e}")

# post selection reweights the whole record by a final pairing
target = cx.from_matrix(space, cx.pure_state(np.array([0.6, 0.8])))
plain = cx.run_sequence(state, [(z_spec, "1")])
selected = cx.run_sequence(state, [(z_spec, "1")], post_selection=target)
print(f"p(z=+1):                     {plain.probability:.6f}")
print(f"p(z=+1) with post selection: {selected.probability:.6f}")
for record in selected.records:
    print(f"  step {record.name!r} outcome {record.outcome!r} "
          f"conditional {record.conditional_probability:.6f}")
