"""Beyond keeping: staged transfers and conic patching at Bennu.

The same path-following law executes a Hohmann-like descent
(600 m circle -> transfer ellipse -> 350 m circle, staged by a time
trigger and a periapsis-proximity trigger) and a trajectory patched
between a 1 km sun-terminator circle and an intersecting hyperbola
selected by the sign of Z.
"""

import os

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

import orbitkeeping as ok

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

fig = plt.figure(figsize=(12, 5))

hohmann = ok.run_transfer_sequencer(ok.preset("Bennu-Hohmann"))
s = hohmann.summary
print("Hohmann-like sequence: dv=%.2f cm/s, stages fired: %d"
      % (100 * s["total_dv"], s["stages_fired"]))
tm = hohmann.telemetry
ax = fig.add_subplot(1, 2, 1)
sc = ax.scatter(tm.column("rx_true"), tm.column("ry_true"),
                c=tm.t / 3600, s=0.3, cmap="viridis")
fig.colorbar(sc, ax=ax, label="t [h]")
ax.set_aspect("equal")
ax.set_xlabel("X [m]")
ax.set_ylabel("Y [m]")
ax.set_title("staged descent 600 m -> 350 m (dv %.1f cm/s)"
             % (100 * s["total_dv"]))

patch = ok.run_hyperbolic_patcher(ok.preset("Bennu-hyperbolic"))
s = patch.summary
print("hyperbolic patching: dv=%.2f cm/s, event=%s"
      % (100 * s["total_dv"], s["terminal_event"]))
tm = patch.telemetry
ax = fig.add_subplot(1, 2, 2, projection="3d")
ax.plot(tm.column("rx_true"), tm.column("ry_true"), tm.column("rz_true"),
        lw=0.5)
ax.set_xlabel("X [m]")
ax.set_ylabel("Y [m]")
ax.set_zlabel("Z [m]")
ax.set_title("circle above Z=0, hyperbola below (dv %.1f cm/s)"
             % (100 * s["total_dv"]))

fig.tight_layout()
fig.savefig(os.path.join(OUT, "transfers_patching.png"), dpi=120)
print("wrote", os.path.join(OUT, "transfers_patching.png"))
