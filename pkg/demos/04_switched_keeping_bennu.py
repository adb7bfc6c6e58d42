"""Idle-thruster orbit keeping at Bennu with the Schmitt-trigger switch.

Runs the tight and loose hysteresis scenarios on the 350 m inclined
circular orbit (full navigation noise and thruster execution error) and
compares switch activity, idle stretches and fuel cost.
"""

import os

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

import orbitkeeping as ok

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

fig, axes = plt.subplots(3, 2, figsize=(12, 8), sharex=True)
for col, name in enumerate(("Bennu-tight", "Bennu-loose")):
    res = ok.run_scenario(ok.preset(name))
    tm = res.telemetry
    s = res.summary
    print("%s: dv=%.2f cm/s, thrust duty %.1f%%, longest idle %.1f h"
          % (name, 100 * s["total_dv"], 100 * s["thrust_on_fraction"],
             s["max_idle"] / 3600))
    t_h = tm.t / 3600

    axes[0, col].plot(t_h, tm.r_mag, lw=0.6)
    axes[0, col].set_ylabel("r [m]")
    axes[0, col].set_title("%s (dv %.1f cm/s)" % (name, 100 * s["total_dv"]))

    u = np.linalg.norm(np.stack(
        [tm.column("uapp_r"), tm.column("uapp_t"), tm.column("uapp_n")],
        axis=1), axis=1)
    axes[1, col].plot(t_h, u * 1e3, lw=0.4)
    axes[1, col].set_ylabel("|u| [mm/s^2]")

    axes[2, col].fill_between(t_h, 0, tm.switch.astype(float), step="mid")
    axes[2, col].set_ylabel("switch")
    axes[2, col].set_xlabel("t [h]")

fig.tight_layout()
fig.savefig(os.path.join(OUT, "bennu_hysteresis.png"), dpi=120)
print("wrote", os.path.join(OUT, "bennu_hysteresis.png"))
