"""
Two phases: temperature, flow direction and absent constituents
================================================================

Energy flows from A to B exactly when 1/T_A < 1/T_B, whatever the signs of
the temperatures. Here the direction is decided the slow way, by asking
which small energy transfer increases the total entropy, and compared
with the rule. The second half shows why a constituent that is absent
from a phase has total potential -inf, so a solvent and an insoluble
colloid can share a temperature without ever sharing particles.
"""

import numpy as np

from qtherm import (
    FundamentalRelation,
    canonical_state,
    flow_direction,
    gibbs_ratio_residual,
    mutual_equilibrium,
    product_state,
    spin_system,
)
from qtherm.composite import flow_by_temperature_rule, total_entropy_change
from qtherm.fundamental import total_potential_at_temperature

# product canonical states at one temperature satisfy the occupation-ratio identity
e_s = np.array([0.0, 0.3, 1.1, 2.0])
e_c = np.array([0.0, 0.7, 0.9])
occ = product_state(canonical_state(e_s, 1.5), canonical_state(e_c, 1.5))
print("ratio residual at common T:", gibbs_ratio_residual(occ, 1 / 1.5))
occ = product_state(canonical_state(e_s, 1.5), canonical_state(e_c, 0.5))
print("ratio residual at unequal T:", gibbs_ratio_residual(occ, 1 / 1.5))

# a negative-temperature spin system is hotter than any positive-temperature one
hot = canonical_state(spin_system(2, [1.0]), -1.0)
cold = canonical_state(spin_system(2, [1.0]), +1.0)
for delta in (1e-4, -1e-4):
    print(f"move {delta:+g} of energy from A to B: dS_total = {total_entropy_change(hot, cold, delta):+.3e}")
print("flow:", flow_direction(hot, cold).value, "| rule:", flow_by_temperature_rule(hot, cold).value)

# random pairs, both signs of beta
rng = np.random.default_rng(1)
agree = 0
for _ in range(200):
    a = canonical_state(rng.uniform(0, 4, 6), rng.uniform(-3, 3))
    b = canonical_state(rng.uniform(0, 4, 5), rng.uniform(-3, 3))
    agree += flow_direction(a, b) is flow_by_temperature_rule(a, b)
print(f"entropy oracle agrees with the 1/T rule on {agree}/200 pairs")

# total potential of an ideal gas as its amount vanishes
gas = FundamentalRelation.ideal_gas()
for n in (1.0, 1e-3, 1e-10, 2.0**-100, 0.0):
    print(f"n = {n:<10.3g} mu/kT = {total_potential_at_temperature(gas, 1.0, n, 1.0):.3f}")

# solvent (s) and colloid (c): equal temperatures, cross potentials -inf
a = canonical_state([0.0, 1.0, 2.0], 0.8)
b = canonical_state([0.0, 0.4], 0.8)
print("solvent/colloid:", mutual_equilibrium(a, b, [-3.0, float("-inf")], [float("-inf"), -5.0]))
