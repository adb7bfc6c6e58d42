"""Pulse-width pulse-frequency thrust modulation.

First characterizes one modulator axis alone (duty cycle against the
normalized command, dead zone below delta_on), then runs the Bennu PWPF
scenario.  Note the quantization floor: the minimum impulse bit is
u_m times the modulator update interval, so commands far below that per
update keep the loop in a pulsing limit cycle rather than the millisecond
pulses an analog modulator would emit.
"""

import os

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

import orbitkeeping as ok
from orbitkeeping import PwpfConfig, PwpfState, pwpf_step

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

cfg = PwpfConfig(u_m=1e-3, k_lpf=1.0, omega_c=1.0, delta_on=2.9e-3,
                 delta_off=2.5e-3)


def duty(u_cmd, dt, duration=400.0):
    state = PwpfState()
    on = 0
    n = int(duration / dt)
    for _ in range(n):
        thrust, state = pwpf_step(u_cmd, cfg, state, dt)
        on += thrust != 0.0
    return on / n


fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
commands = np.logspace(-4, 0.3, 60) * cfg.u_m
for dt in (1e-3, 0.1, 0.5):
    ax1.semilogx(commands / cfg.u_m, [duty(u, dt) for u in commands],
                 label="update dt = %g s" % dt)
ax1.axvline(cfg.delta_on, color="k", lw=0.4)
ax1.set_xlabel("command / u_m")
ax1.set_ylabel("duty cycle")
ax1.legend()
ax1.set_title("modulator static characteristic")

res = ok.run_scenario(ok.preset("Bennu-PWPF"))
tm = res.telemetry
print("Bennu-PWPF 24 h: dv=%.2f m/s, max |da|=%.1f m (orbit held; the "
      "0.5 s impulse bit and per-step navigation noise make this far "
      "thirstier than an analog modulator)"
      % (res.summary["total_dv"], res.summary["element_error_max"][0]))
ax2.plot(tm.t / 3600, tm.column("uapp_r") * 1e3, lw=0.3)
ax2.set_xlabel("t [h]")
ax2.set_ylabel("radial applied command, period mean [mm/s^2]")
ax2.set_title("modulated radial channel")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "pwpf.png"), dpi=120)
print("wrote", os.path.join(OUT, "pwpf.png"))
