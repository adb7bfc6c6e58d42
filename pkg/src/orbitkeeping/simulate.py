"""Closed-loop plant simulation with navigation noise and thrust switching.

One loop iteration per control period: update the navigation estimate
(measurement or onboard propagation), evaluate the sliding surface and the
switching logic, compute and execute the control (clamp, optional PWPF
modulation, thruster execution error), propagate the truth with the
applied control held, and log telemetry with a running delta-v ledger.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .control import (ControllerConfig, TargetOrbit, SwitchState, PwpfConfig,
                      PwpfState, sliding_surface, gain_matrix,
                      control_accel_rtn, clamp_thrust, hysteresis_step,
                      pwpf_step, intermediate_hd)
from .dynamics import Environment, propagate_period, onboard_propagate
from .frames import (StateVector, OrbitGeometry, rtn_basis, from_rtn,
                     geometry_from_state, element_errors)


@dataclass(frozen=True)
class NoiseConfig:
    """Navigation and execution noise levels.

    sigma_r/sigma_v: 1-sigma additive white Gaussian noise per Cartesian
    component of the measured position [m] and velocity [m/s];
    thruster_sigma: fractional 1-sigma execution dispersion per control
    component; measurement_period [s] (None: measure every control step).
    """
    sigma_r: float = 0.0
    sigma_v: float = 0.0
    thruster_sigma: float = 0.0
    measurement_period: float = None
    seed: int = 0

    def __post_init__(self):
        if min(self.sigma_r, self.sigma_v, self.thruster_sigma) < 0.0:
            raise ValueError("noise levels must be nonnegative")
        if self.measurement_period is not None and self.measurement_period <= 0:
            raise ValueError("measurement period must be positive")


def substreams(seed):
    """Independent child generators (measurement, thruster, dispersion).

    All stochastic draws flow from these spawned streams, so turning one
    noise source on or off never shifts another source's sequence.
    """
    children = np.random.SeedSequence(seed).spawn(3)
    return tuple(np.random.default_rng(c) for c in children)


def measure(state, noise, rng):
    """Noisy navigation fix of the true state."""
    r = state.r + noise.sigma_r * rng.standard_normal(3)
    v = state.v + noise.sigma_v * rng.standard_normal(3)
    return StateVector(r, v, t=state.t, frame=state.frame)


def apply_thruster_error(u_cmd, fraction, rng):
    """Scale each commanded component by (1 + N(0, fraction))."""
    return np.asarray(u_cmd, dtype=float) * (
        1.0 + fraction * rng.standard_normal(3))


class DeltaVLedger:
    """Running integral of applied thrust magnitude [m/s]."""

    def __init__(self):
        self.total = 0.0

    def add(self, u_norm, dt):
        if u_norm < 0.0 or dt < 0.0:
            raise ValueError("ledger entries must be nonnegative")
        self.total += u_norm * dt


# --- event scripting --------------------------------------------------------

@dataclass(frozen=True)
class TimeTrigger:
    """Switch the target geometry once the clock passes ``t`` [s]."""
    t: float
    geometry: OrbitGeometry


@dataclass(frozen=True)
class PeriapsisTrigger:
    """Switch targets when the estimate passes the current target's
    periapsis: radial velocity crossing negative-to-positive within
    ``threshold`` [m] of a(1-e)."""
    geometry: OrbitGeometry
    threshold: float = 5.0


@dataclass(frozen=True)
class ZSignRule:
    """Track one of two geometries by the sign of the estimated Z."""
    positive: OrbitGeometry
    negative: OrbitGeometry


TELEMETRY_COLUMNS = (
    "t",
    "rx_true", "ry_true", "rz_true", "vx_true", "vy_true", "vz_true",
    "rx_est", "ry_est", "rz_est", "vx_est", "vy_est", "vz_est",
    "s1", "s2", "s3",
    "switch",
    "ucmd_r", "ucmd_t", "ucmd_n",
    "uapp_r", "uapp_t", "uapp_n",
    "dv_cum",
    "da", "de", "di", "draan", "dargp",
)


class Telemetry:
    """Per-control-step log.

    Always carries t, |r|, dv_cum, switch, s and element errors; with
    ``full=True`` also the complete fixed-order column set
    (:data:`TELEMETRY_COLUMNS`) ready for CSV export.  For pulse-modulated
    runs the ucmd columns hold the period-mean modulated command and the
    uapp columns its executed (error-scaled) period mean.
    """

    def __init__(self, n_steps, full=True):
        self.full = full
        self.t = np.zeros(n_steps)
        self.r_mag = np.zeros(n_steps)
        self.dv_cum = np.zeros(n_steps)
        self.switch = np.zeros(n_steps, dtype=bool)
        self.s = np.zeros((n_steps, 3))
        self.element_err = np.zeros((n_steps, 5))
        self.rows = np.zeros((n_steps, len(TELEMETRY_COLUMNS))) if full else None
        self.n = 0

    def record(self, t, state, est, s, thrusting, u_cmd, u_app, dv, errs):
        i = self.n
        self.t[i] = t
        self.r_mag[i] = np.linalg.norm(state.r)
        self.dv_cum[i] = dv
        self.switch[i] = thrusting
        self.s[i] = s
        self.element_err[i] = errs
        if self.full:
            self.rows[i] = np.concatenate((
                [t], state.r, state.v, est.r, est.v, s,
                [1.0 if thrusting else 0.0], u_cmd, u_app, [dv], errs))
        self.n += 1

    def _trim(self):
        for name in ("t", "r_mag", "dv_cum", "switch", "s", "element_err"):
            setattr(self, name, getattr(self, name)[:self.n])
        if self.full:
            self.rows = self.rows[:self.n]

    def column(self, name):
        if not self.full:
            raise ValueError("run was recorded without full telemetry")
        return self.rows[:, TELEMETRY_COLUMNS.index(name)]

    def to_csv(self, path):
        if not self.full:
            raise ValueError("run was recorded without full telemetry")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TELEMETRY_COLUMNS)
            for row in self.rows:
                writer.writerow(["%.12g" % x for x in row])


@dataclass
class ClosedLoopSetup:
    """Everything a closed-loop run needs, in runtime objects."""
    name: str
    env: Environment
    target: OrbitGeometry
    controller: ControllerConfig
    noise: NoiseConfig
    initial_state: StateVector
    duration: float
    control_period: float = 4.0
    substeps: int = 8
    escape_radius: float = np.inf
    events: list = field(default_factory=list)
    pwpf: PwpfConfig = None


@dataclass
class RunResult:
    summary: dict
    telemetry: Telemetry


def _apply_events(rules, fired, t, est, geom, prev_vr):
    # Staged (time/periapsis) rules fire in script order: a stage is armed
    # only once every earlier staged rule has fired.
    changed = False
    armed = True
    for i, rule in enumerate(rules):
        if isinstance(rule, TimeTrigger):
            if not fired[i] and armed and t >= rule.t:
                fired[i] = True
                geom, changed = rule.geometry, True
            armed = armed and fired[i]
        elif isinstance(rule, PeriapsisTrigger):
            if not fired[i] and armed and prev_vr is not None:
                r = np.linalg.norm(est.r)
                vr = float(est.v @ est.r) / r
                if prev_vr < 0.0 <= vr and abs(r - geom.periapsis) < rule.threshold:
                    fired[i] = True
                    geom, changed = rule.geometry, True
            armed = armed and fired[i]
        elif isinstance(rule, ZSignRule):
            want = rule.positive if est.r[2] > 0.0 else rule.negative
            if want is not geom:
                geom, changed = want, True
        else:
            raise TypeError("unknown event rule %r" % (rule,))
    return geom, changed


def run_closed_loop(setup, seed=None, record="full"):
    """Run the switching controller against the true dynamics.

    Parameters
    ----------
    seed : overrides setup.noise.seed when given
    record : "full" keeps the complete telemetry table; "series" keeps
        only the light per-step series (time, radius, dv, s, errors)

    Returns a :class:`RunResult`; the summary includes the delta-v total,
    any terminal impact/escape event, switch duty statistics and element
    error statistics over the final half of the run.
    """
    env = setup.env
    cfg = setup.controller
    noise = setup.noise
    dt_c = setup.control_period
    n_steps = int(round(setup.duration / dt_c))
    if n_steps < 1:
        raise ValueError("duration shorter than one control period")
    seed = noise.seed if seed is None else seed
    meas_rng, thr_rng, _ = substreams(seed)

    state = setup.initial_state
    state.require_frame(env.frame)
    est = measure(state, noise, meas_rng)
    meas_period = noise.measurement_period or dt_c
    next_meas = meas_period

    geom = setup.target
    target = TargetOrbit(geom, cfg.mu)
    switch = SwitchState.off()
    pwpf_axes = [PwpfState(), PwpfState(), PwpfState()]
    fired = [False] * len(setup.events)
    prev_vr = None
    u_cmd_frame = np.zeros(3)
    ledger = DeltaVLedger()
    telemetry = Telemetry(n_steps, full=(record == "full"))
    beta_substitutions = 0
    event = None
    event_t = None

    for k in range(n_steps):
        t = k * dt_c
        if k > 0:
            if t + 1e-9 >= next_meas:
                est = measure(state, noise, meas_rng)
                while next_meas <= t + 1e-9:
                    next_meas += meas_period
            else:
                est = onboard_propagate(cfg.mu, est, u_cmd_frame, dt_c,
                                        setup.substeps)

        geom, changed = _apply_events(setup.events, fired, t, est, geom, prev_vr)
        if changed:
            target = TargetOrbit(geom, cfg.mu)
        r_est = np.linalg.norm(est.r)
        prev_vr = float(est.v @ est.r) / r_est

        basis_est = rtn_basis(est)
        eff_target = target
        guards = 0
        while float(eff_target.hd_hat @ basis_est.h_hat) <= 1e-12 and guards < 60:
            eff_target = eff_target.with_hd(
                intermediate_hd(basis_est.h_hat, eff_target.hd_hat))
            guards += 1
        if guards:
            beta_substitutions += 1

        s = sliding_surface(est, eff_target, cfg.lambda_r, cfg.lambda_n)
        if cfg.switched:
            switch = hysteresis_step(s, switch, cfg.s_on, cfg.s_off)
            thrusting = switch.thrusting
        else:
            thrusting = True

        if thrusting:
            k_diag = gain_matrix(est, eff_target, cfg)
            u_cmd = clamp_thrust(
                control_accel_rtn(est, eff_target, cfg, k=k_diag, s=s),
                cfg.u_max)
        else:
            u_cmd = np.zeros(3)
            if setup.pwpf is not None:
                pwpf_axes = [PwpfState(), PwpfState(), PwpfState()]

        if setup.pwpf is not None and thrusting:
            # Pulse modulation runs on the substep grid (the command is
            # held over the control period); the truth sees each pulse.
            err = 1.0 + noise.thruster_sigma * thr_rng.standard_normal(3)
            dt_sub = dt_c / setup.substeps
            cur = state
            exec_cmd = np.zeros(3)
            u_app = np.zeros(3)
            for _ in range(setup.substeps):
                pulse = np.zeros(3)
                for ax in range(3):
                    pulse[ax], pwpf_axes[ax] = pwpf_step(
                        u_cmd[ax], setup.pwpf, pwpf_axes[ax], dt_sub)
                applied = pulse * err
                nxt, event = propagate_period(
                    env, cur, from_rtn(applied, basis_est), dt_sub, 1,
                    setup.escape_radius)
                ledger.add(float(np.linalg.norm(applied)), nxt.t - cur.t)
                exec_cmd += pulse / setup.substeps
                u_app += applied / setup.substeps
                cur = nxt
                if event is not None:
                    break
            next_state = cur
        else:
            exec_cmd = u_cmd if thrusting else np.zeros(3)
            u_app = apply_thruster_error(exec_cmd, noise.thruster_sigma,
                                         thr_rng)
            next_state, event = propagate_period(
                env, state, from_rtn(u_app, basis_est), dt_c, setup.substeps,
                setup.escape_radius)
            ledger.add(float(np.linalg.norm(u_app)), next_state.t - t)
        u_cmd_frame = from_rtn(exec_cmd, basis_est)

        try:
            true_geom, _ = geometry_from_state(state, env.mu)
            errs = element_errors(true_geom, geom)
        except ValueError:
            errs = np.full(5, np.nan)
        telemetry.record(t, state, est, s, thrusting, u_cmd, u_app,
                         ledger.total, errs)

        if event is not None:
            event_t = next_state.t
            state = next_state
            break
        state = StateVector(next_state.r, next_state.v, t=(k + 1) * dt_c,
                            frame=env.frame)

    telemetry._trim()
    summary = _summarize(setup, telemetry, ledger, event, event_t, state,
                         beta_substitutions, seed)
    summary["stages_fired"] = int(sum(fired))
    return RunResult(summary, telemetry)


def _summarize(setup, tm, ledger, event, event_t, final_state,
               beta_substitutions, seed):
    t_end = float(tm.t[-1]) + setup.control_period if event is None \
        else float(event_t)
    half = tm.t >= 0.5 * setup.duration
    if half.any():
        finite = tm.element_err[half]
        err_max = np.nanmax(np.abs(finite), axis=0)
        err_rms = np.sqrt(np.nanmean(finite ** 2, axis=0))
    else:
        err_max = np.full(5, np.nan)
        err_rms = np.full(5, np.nan)

    off = ~tm.switch
    max_idle = 0
    run = 0
    for flag in off:
        run = run + 1 if flag else 0
        max_idle = max(max_idle, run)

    return {
        "name": setup.name,
        "seed": int(seed),
        "duration": float(setup.duration),
        "control_period": float(setup.control_period),
        "steps": int(tm.n),
        "elapsed": t_end,
        "total_dv": float(ledger.total),
        "dv_per_day": float(ledger.total) / max(t_end / 86400.0, 1e-12),
        "terminal_event": None if event is None
        else {"type": event, "t": float(event_t)},
        "thrust_on_fraction": float(np.mean(tm.switch)),
        "max_idle": float(max_idle * setup.control_period),
        "element_error_max": [float(x) for x in err_max],
        "element_error_rms": [float(x) for x in err_rms],
        "final_s": [float(x) for x in tm.s[-1]],
        "final_element_errors": [float(x) for x in tm.element_err[-1]],
        "final_state": {"r": [float(x) for x in final_state.r],
                        "v": [float(x) for x in final_state.v],
                        "t": float(final_state.t)},
        "beta_substitutions": int(beta_substitutions),
    }
