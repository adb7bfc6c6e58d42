"""Effect of the control parameters on convergence and chattering.

Reproduces the capture of a 500 m circular sun-terminator orbit around
Itokawa from 600 m above the pole, sweeping the surface-convergence rate
lambda, the assumed disturbance bound D, and the boundary-layer factor
n_phi, and shows the control-frequency interaction with n_phi.
"""

import os

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

import orbitkeeping as ok

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

fig, axes = plt.subplots(2, 2, figsize=(12, 7), sharey=False)

base = ok.sweep_baseline(duration=86400.0)
for axis, values, ax, title in (
        ("d", [1e-3, 1e-4, 1e-5, 1e-6], axes[0, 0], "assumed bound D"),
        ("lambda", [2.0, 0.2, 2e-3], axes[0, 1], "surface rate lambda"),
        ("n_phi", [1.0, 5.0, 10.0], axes[1, 0], "boundary layer n_phi")):
    for entry in ok.run_parametric_sweep(base, axis, values):
        ax.plot(entry["t"] / 3600, entry["r_mag"],
                lw=0.8, label="%s=%g" % (axis, entry["value"]))
    ax.axhline(500.0, color="k", lw=0.4)
    ax.set_xlabel("t [h]")
    ax.set_ylabel("r [m]")
    ax.legend(fontsize=8)
    ax.set_title(title)

# control period vs boundary layer: slow updates need a wide layer
ax = axes[1, 1]
slow = ok.sweep_baseline(duration=86400.0)
slow.sim.control_period = 10.0
slow = ok.apply_sweep_value(slow, "d", 1e-3)
for entry in ok.run_parametric_sweep(slow, "n_phi", [0.1, 1.0, 10.0]):
    ax.plot(entry["t"] / 3600, np.abs(entry["r_mag"] - 500.0) + 1e-4,
            lw=0.8, label="n_phi=%g" % entry["value"])
ax.set_yscale("log")
ax.set_xlabel("t [h]")
ax.set_ylabel("|r - 500| [m]")
ax.legend(fontsize=8)
ax.set_title("10 s control period, D=1e-3")

fig.tight_layout()
fig.savefig(os.path.join(OUT, "parameter_sweep.png"), dpi=120)
print("wrote", os.path.join(OUT, "parameter_sweep.png"))
