"""Perturbed equations of motion around a spinning small body.

The true dynamics add to the central gravity term: higher-order gravity
from a polyhedron or harmonics field (spinning with the body), cannonball
solar radiation pressure with the sun fixed along inertial -X, and, when
simulating in the body-fixed frame, the rotating-frame terms.  Propagation
is classical fixed-step RK4 with the control held over each step.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .constants import SRP_P0
from .frames import StateVector, INERTIAL, BODY_FIXED
from .gravity import GravityField, interior_point


class ImpactError(RuntimeError):
    """Trajectory entered the body (or the configured impact sphere)."""


@dataclass(frozen=True)
class SrpConfig:
    """Cannonball solar-radiation-pressure parameters.

    reflectivity (0..2), mass_to_area [kg/m^2], sun_distance [m];
    p0 is the flux constant (flux/c at 1 AU times AU^2).
    """
    reflectivity: float
    mass_to_area: float
    sun_distance: float
    p0: float = SRP_P0

    def __post_init__(self):
        if not 0.0 <= self.reflectivity <= 2.0:
            raise ValueError("reflectivity must lie in [0, 2]")
        if self.mass_to_area <= 0.0 or self.sun_distance <= 0.0:
            raise ValueError("mass_to_area and sun_distance must be positive")

    @property
    def magnitude(self):
        """Acceleration magnitude [m/s^2]."""
        return ((1.0 + self.reflectivity) * self.p0
                / (self.mass_to_area * self.sun_distance ** 2))


@dataclass(frozen=True)
class Environment:
    """The simulated plant: gravity variant, spin, SRP and frame choice."""
    gravity: GravityField
    nu: float = 0.0                 # body spin rate [rad/s], +Z
    srp: SrpConfig = None
    frame: str = INERTIAL
    impact_radius: float = 0.0      # impact event when |r| drops below [m]

    def __post_init__(self):
        if self.frame not in (INERTIAL, BODY_FIXED):
            raise ValueError("unknown frame %r" % (self.frame,))

    @property
    def mu(self):
        return self.gravity.mu

    def contains(self, r):
        """True when a body-frame-agnostic impact test triggers at r."""
        if np.linalg.norm(r) < self.impact_radius:
            return True
        if self.gravity.kind == "polyhedron":
            return interior_point(self.gravity.shape, r)
        return False


def srp_accel(env, t):
    """SRP acceleration [m/s^2] in the environment frame at time t.

    Constant +X in the inertial frame (sun fixed along -X); in the
    body-fixed frame the direction counter-rotates at the spin rate.
    """
    if env.srp is None:
        return np.zeros(3)
    mag = env.srp.magnitude
    if env.frame == INERTIAL:
        return np.array([mag, 0.0, 0.0])
    ang = env.nu * t
    return mag * np.array([np.cos(ang), -np.sin(ang), 0.0])


def rotating_frame_terms(state, nu):
    """Centrifugal + Coriolis acceleration of the body-fixed frame [m/s^2]."""
    state.require_frame(BODY_FIXED)
    x, y = state.r[0], state.r[1]
    vx, vy = state.v[0], state.v[1]
    return np.array([2.0 * nu * vy + nu ** 2 * x,
                     -2.0 * nu * vx + nu ** 2 * y,
                     0.0])


def _full_field_in_frame(env, r, t):
    """Complete gravity acceleration expressed in the simulation frame."""
    if env.frame == BODY_FIXED:
        return env.gravity.acceleration(r)
    ang = env.nu * t
    c, s = np.cos(ang), np.sin(ang)
    to_body = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])
    g_body = env.gravity.acceleration(to_body @ r)
    return to_body.T @ g_body


def higher_order_disturbance(env, state, t=None):
    """Full-field gravity minus the central term, in the simulation frame."""
    if t is None:
        t = state.t
    state.require_frame(env.frame)
    if env.contains(state.r if env.frame == BODY_FIXED
                    else _to_body_position(env, state.r, t)):
        raise ImpactError("field point inside the body")
    if env.gravity.kind == "point":
        return np.zeros(3)
    r = np.linalg.norm(state.r)
    return _full_field_in_frame(env, state.r, t) + env.mu * state.r / r ** 3


def _to_body_position(env, r, t):
    ang = env.nu * t
    c, s = np.cos(ang), np.sin(ang)
    return np.array([c * r[0] + s * r[1], -s * r[0] + c * r[1], r[2]])


def eom_rhs(env, state, u_applied, t=None):
    """Time derivative (rdot, vdot) of the true dynamics plus control."""
    if t is None:
        t = state.t
    state.require_frame(env.frame)
    r_body = (state.r if env.frame == BODY_FIXED
              else _to_body_position(env, state.r, t))
    if env.contains(r_body):
        raise ImpactError("state inside the body at t=%.3f" % t)
    accel = _full_field_in_frame(env, state.r, t)
    if env.frame == BODY_FIXED:
        accel = accel + rotating_frame_terms(state, env.nu)
    accel = accel + srp_accel(env, t) + np.asarray(u_applied, dtype=float)
    return np.concatenate([state.v, accel])


def _kernel_args(env):
    grav = env.gravity
    if grav.kind == "harmonics":
        model = grav.harmonics
        return (_kernels.HARMONICS, model.r0, model.c, model.s, model.nmax)
    if grav.kind == "point":
        dummy = np.zeros((2, 2))
        return (_kernels.POINT, 1.0, dummy, dummy, 0)
    raise ValueError("no compiled path for %r gravity" % grav.kind)


def integrate_step(env, state, u_applied, dt):
    """One classical RK4 step with the control held constant (ZOH)."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    state.require_frame(env.frame)
    u = np.asarray(u_applied, dtype=float)
    if env.gravity.kind == "polyhedron":
        return _integrate_step_numpy(env, state, u, dt)
    kind, r0, c, s, nmax = _kernel_args(env)
    frame = _kernels.BODY_FIXED if env.frame == BODY_FIXED else _kernels.INERTIAL
    srp_mag = 0.0 if env.srp is None else env.srp.magnitude
    x = np.concatenate([state.r, state.v])
    x, t, event = _kernels.propagate_zoh(
        x, state.t, 1, dt, u, env.mu, env.nu, frame, kind, r0, c, s, nmax,
        srp_mag, env.impact_radius ** 2, np.inf)
    if event == _kernels.IMPACT:
        raise ImpactError("impact at t=%.3f" % t)
    return StateVector(x[:3], x[3:], t=t, frame=env.frame)


def _integrate_step_numpy(env, state, u, dt):
    def rhs(x, t):
        st = StateVector(x[:3], x[3:], t=t, frame=env.frame)
        return eom_rhs(env, st, u, t)

    x = np.concatenate([state.r, state.v])
    t = state.t
    k1 = rhs(x, t)
    k2 = rhs(x + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = rhs(x + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = rhs(x + dt * k3, t + dt)
    x = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return StateVector(x[:3], x[3:], t=t + dt, frame=env.frame)


def propagate_period(env, state, u_applied, period, substeps,
                     escape_radius=np.inf):
    """Propagate one control period with impact/escape detection.

    Returns (state, event) with event None, "impact" or "escape"; on an
    event the state carries the substep boundary where it was detected.
    """
    state.require_frame(env.frame)
    u = np.asarray(u_applied, dtype=float)
    dt = period / substeps
    if env.gravity.kind == "polyhedron":
        cur = state
        for _ in range(substeps):
            try:
                cur = _integrate_step_numpy(env, cur, u, dt)
            except ImpactError:
                return cur, "impact"
            if env.contains(cur.r if env.frame == BODY_FIXED
                            else _to_body_position(env, cur.r, cur.t)):
                return cur, "impact"
            if np.linalg.norm(cur.r) > escape_radius:
                return cur, "escape"
        return cur, None
    kind, r0, c, s, nmax = _kernel_args(env)
    frame = _kernels.BODY_FIXED if env.frame == BODY_FIXED else _kernels.INERTIAL
    srp_mag = 0.0 if env.srp is None else env.srp.magnitude
    x = np.concatenate([state.r, state.v])
    x, t, event = _kernels.propagate_zoh(
        x, state.t, substeps, dt, u, env.mu, env.nu, frame, kind,
        r0, c, s, nmax, srp_mag, env.impact_radius ** 2, escape_radius ** 2)
    out = StateVector(x[:3], x[3:], t=t, frame=env.frame)
    return out, {_kernels.NO_EVENT: None, _kernels.IMPACT: "impact",
                 _kernels.ESCAPE: "escape"}[event]


def onboard_propagate(mu, state_est, u_cmd_frame, period, substeps=8):
    """Advance the navigation estimate: central gravity plus the commanded
    control only (no spin, SRP or higher-order terms)."""
    dummy = np.zeros((2, 2))
    x = np.concatenate([state_est.r, state_est.v])
    x, t, _ = _kernels.propagate_zoh(
        x, state_est.t, substeps, period / substeps,
        np.asarray(u_cmd_frame, dtype=float), mu, 0.0, _kernels.INERTIAL,
        _kernels.POINT, 1.0, dummy, dummy, 0, 0.0, 0.0, np.inf)
    return StateVector(x[:3], x[3:], t=t, frame=state_est.frame)
