"""
Reallocation of occupations under shape change at constant volume
=================================================================

A box whose shape wobbles at fixed volume and temperature passes through
a sequence of stable equilibrium states. Nothing moves in any of them,
yet the occupations of the energy eigenstates shift from one sample to
the next. This script runs a sinuous trajectory, reports the step sizes
and writes an SVG of S(t) and the step sequence next to this file.
"""

from pathlib import Path

import numpy as np

from qtherm import canonical_state, trajectory_run
from qtherm.equilibrium import mean_momentum
from qtherm.hamiltonians import GridWell, fd_well, momentum_operator
from qtherm.output import svg_line_chart, write_text
from qtherm.shape import sinuous_trajectory

traj = sinuous_trajectory(samples=200, volume=1.0, temperature=20.0)
trace = trajectory_run(traj, retained_levels=16)

steps = trace.reallocation_step[1:]
print(f"samples {len(trace)}, volume {traj.volume}")
print(f"reallocation step: min {steps.min():.3e}, max {steps.max():.3e}, total {steps.sum():.3e}")
print(f"entropy range: {trace.entropy.min():.6f} .. {trace.entropy.max():.6f}")
print("closed loop, first vs last occupations:", np.max(np.abs(trace.occupations[-1] - trace.occupations[0])))

out = Path(__file__).with_name("shape_reallocation.svg")
write_text(out, svg_line_chart(trace.times, {"S(t)": trace.entropy, "step": trace.reallocation_step}, "sinuous trajectory"))
print("wrote", out)

# every canonical state of a real Hamiltonian has zero mean momentum
well = GridWell(60, 1 / 61, np.random.default_rng(0).uniform(0, 100, 60))
h, p = fd_well(well), momentum_operator(well)

for beta in (1e-3, 1e-1, 10.0):
    print(f"beta {beta:g}: <P> = {mean_momentum(canonical_state(h, beta), p):.1e}")
