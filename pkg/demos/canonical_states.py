"""
Canonical states, entropy and the two zero temperatures
========================================================

The stable equilibrium state of a system with a given mean energy is the
canonical state p_i = exp(-beta e_i) / Z. This script walks through a
two-level system, then a spin ladder at negative temperature, and ends
with the third-law picture: 1/T runs from +inf to -inf as the energy
sweeps across a bounded spectrum.
"""

import math

import numpy as np

from qtherm import canonical_state, entropy, spin_fundamental, spin_system
from qtherm.equilibrium import beta_for_energy, max_entropy_witness

# a two-level system at beta = 1: p0 = 1/(1 + e^-1)
st = canonical_state([0.0, 1.0], 1.0)
print("two-level, beta = 1")
print("  occupations ", st.occupations)
print("  entropy     ", st.entropy)
print("  S - (beta E + ln Z) =", st.entropy - (st.beta * st.energy + st.log_partition))

# the map from energy back to beta; above the midpoint beta goes negative
for E in (0.1, 0.268941, 0.5, 0.731059, 0.9):
    print(f"  E = {E:<9} beta = {beta_for_energy([0.0, 1.0], E):+.6f}")

# entropy of the density operator, not just of occupation vectors
print("maximally mixed qubit:", entropy(np.eye(2) / 2), "= ln 2 =", math.log(2))

# a three-level ladder can be driven past infinite temperature
h = spin_system(3, [1.0, 1.0])
for beta in (math.inf, 2.0, 0.0, -2.0, -math.inf):
    s = canonical_state(h, beta)
    print(f"ladder beta = {beta:+6}: p = {np.round(s.occupations, 4)}  S = {s.entropy:.4f}")

# no other state with the same energy has more entropy
rep = max_entropy_witness([0.0, 1.0, 2.0, 3.0], 1.5, trials=1000, seed=0)
print(f"max-entropy witness: 1000 perturbations, smallest entropy loss {rep.min_margin:.3e}")

# the spin-lattice fundamental relation and both zero-temperature ends
print("filling   S/kN      1/T (k/gap)")
for f in (1e-9, 1e-3, 0.25, 0.5, 0.75, 1 - 1e-3, 1 - 1e-9):
    S, inv_t = spin_fundamental(1, 1.0, f)
    print(f"{f:<9.3g} {S:<9.3g} {inv_t:+.4f}")
