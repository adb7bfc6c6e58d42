"""Sliding-mode path-following control of Keplerian orbit geometry.

The sliding surface couples the eccentricity-vector error, the angular
momentum magnitude error and the plane error; driving it to zero recovers
the five geometric elements without any time parameterization.  The layer
around the control law adds the practical pieces: saturation instead of
the sign function, a Schmitt-trigger thrust switch, a component clamp and
an optional PWPF modulator.
"""

from dataclasses import dataclass, replace

import numpy as np

from .frames import (rtn_basis, eccentricity_vector, hd_from_angles,
                     h_from_elements, periapsis_direction, cross3, norm3)


class BetaGuardError(ValueError):
    """Current and desired orbit normals are 90 degrees or more apart.

    Carries ``suggested_hd``, an intermediary desired normal halfway
    (on the sphere) between the two, which keeps the control well posed
    for the offending step.
    """

    def __init__(self, h_hat, hd_hat):
        self.suggested_hd = intermediate_hd(h_hat, hd_hat)
        super().__init__("desired plane is >= 90 deg away from the current "
                         "plane; retry with an intermediary target normal")


def intermediate_hd(h_hat, hd_hat):
    """Unit vector halfway between two unit vectors on the sphere."""
    mid = np.asarray(h_hat, dtype=float) + np.asarray(hd_hat, dtype=float)
    n = np.linalg.norm(mid)
    if n < 1e-12:
        # antipodal normals: any perpendicular direction is halfway
        seed = np.array([1.0, 0.0, 0.0])
        if abs(h_hat[0]) > 0.9:
            seed = np.array([0.0, 1.0, 0.0])
        mid = np.cross(h_hat, seed)
        n = np.linalg.norm(mid)
    return mid / n


@dataclass(frozen=True)
class ControllerConfig:
    """Gains, assumed disturbance bounds and actuation limits.

    d_r/d_t/d_n are the assumed radial/transverse/normal disturbance
    bounds [m/s^2] from which the gain matrix is computed at equality;
    the boundary layer is n_phi * diag(K).  s_on/s_off are the Schmitt
    switch thresholds per component of s (None disables the switch).
    mu is the central gravitational parameter the controller knows.
    """
    mu: float
    d_r: float
    d_t: float
    d_n: float
    lambda_r: float = 2.0
    lambda_n: float = 2.0
    n_phi: float = 5.0
    u_max: float = np.inf
    s_on: np.ndarray = None
    s_off: np.ndarray = None

    def __post_init__(self):
        if min(self.lambda_r, self.lambda_n) <= 0.0:
            raise ValueError("lambda_r and lambda_n must be positive")
        if min(self.d_r, self.d_t, self.d_n) <= 0.0:
            raise ValueError("assumed disturbance bounds must be positive")
        if self.n_phi <= 0.0:
            raise ValueError("n_phi must be positive")
        if self.u_max <= 0.0:
            raise ValueError("u_max must be positive")
        if (self.s_on is None) != (self.s_off is None):
            raise ValueError("give both or neither of s_on / s_off")
        if self.s_on is not None:
            s_on = np.array(self.s_on, dtype=float).reshape(3)
            s_off = np.array(self.s_off, dtype=float).reshape(3)
            if np.any(s_off > s_on):
                raise ValueError("s_off must not exceed s_on componentwise")
            if np.any(s_off < 0.0):
                raise ValueError("switch thresholds must be nonnegative")
            s_on.flags.writeable = False
            s_off.flags.writeable = False
            object.__setattr__(self, "s_on", s_on)
            object.__setattr__(self, "s_off", s_off)

    @property
    def switched(self):
        return self.s_on is not None

    def with_target_mu(self, mu):
        return replace(self, mu=mu)


class TargetOrbit:
    """Desired geometry with its derived control quantities.

    Attributes: geometry, mu, hd_hat (plane normal), h_d [m^2/s] and the
    desired eccentricity vector e_vec_d.
    """

    def __init__(self, geometry, mu):
        self.geometry = geometry
        self.mu = float(mu)
        self.hd_hat = hd_from_angles(geometry.inc, geometry.raan)
        self.h_d = h_from_elements(mu, geometry.a, geometry.e)
        self.e_vec_d = geometry.e * periapsis_direction(
            geometry.inc, geometry.raan, geometry.argp)

    def with_hd(self, hd_hat):
        """Copy with an overridden plane normal (intermediary target)."""
        out = TargetOrbit.__new__(TargetOrbit)
        out.geometry = self.geometry
        out.mu = self.mu
        out.hd_hat = np.asarray(hd_hat, dtype=float)
        out.h_d = self.h_d
        out.e_vec_d = self.e_vec_d
        return out


class _StepCore:
    """Kinematic quantities shared by the controller pieces at one state."""

    __slots__ = ("r", "h", "vr", "r_hat", "theta_hat", "h_hat", "e_tilde")

    def __init__(self, state, target):
        r_vec = state.r
        v_vec = state.v
        self.r = norm3(r_vec)
        if self.r == 0.0:
            raise ValueError("zero radius state")
        h_vec = cross3(r_vec, v_vec)
        self.h = norm3(h_vec)
        if self.h == 0.0:
            raise ValueError("zero angular momentum state")
        self.r_hat = r_vec / self.r
        self.h_hat = h_vec / self.h
        self.theta_hat = cross3(self.h_hat, self.r_hat)
        self.vr = float(v_vec @ self.r_hat)
        e_vec = cross3(v_vec, h_vec) / target.mu - self.r_hat
        self.e_tilde = e_vec - target.e_vec_d


def sliding_surface(state, target, lambda_r=2.0, lambda_n=2.0):
    """The three sliding-surface components (zero on the desired orbit)."""
    return _sliding_surface(_StepCore(state, target), target,
                            lambda_r, lambda_n)


def _sliding_surface(core, target, lambda_r, lambda_n):
    return np.array([
        core.e_tilde @ (lambda_r * core.r_hat + core.theta_hat),
        core.h - target.h_d,
        target.hd_hat @ (lambda_n * core.r_hat + core.theta_hat),
    ])


def gain_matrix(state, target, cfg):
    """Diagonal switching gains, computed at the equality of the
    convergence inequality for the assumed disturbance bounds."""
    return _gain_matrix(_StepCore(state, target), target, cfg)


def _gain_matrix(core, target, cfg):
    mu = cfg.mu
    k1 = (core.h / mu * cfg.d_r
          + abs(2.0 * cfg.lambda_r * core.h - core.vr * core.r) / mu * cfg.d_t
          + core.r * abs(target.e_vec_d @ core.h_hat) / core.h * cfg.d_n)
    k2 = core.r * cfg.d_t
    k3 = core.r * float(target.hd_hat @ core.h_hat) / core.h * cfg.d_n
    return np.array([k1, k2, k3])


def control_matrices(state, target, lambda_r, lambda_n, mu):
    """The upper-triangular F matrix and G vector of the control law."""
    return _control_matrices(_StepCore(state, target), target,
                             lambda_r, lambda_n, mu)


def _control_matrices(core, target, lambda_r, lambda_n, mu):
    r = core.r
    h = core.h
    f = np.array([
        [-h / mu, (2.0 * lambda_r * h - core.vr * r) / mu,
         -r * float(target.e_vec_d @ core.h_hat) / h],
        [0.0, r, 0.0],
        [0.0, 0.0, r * float(target.hd_hat @ core.h_hat) / h],
    ])
    g = h / r ** 2 * np.array([
        core.e_tilde @ (lambda_r * core.theta_hat - core.r_hat) - 1.0,
        0.0,
        target.hd_hat @ (lambda_n * core.theta_hat - core.r_hat),
    ])
    return f, g


def upper_triangular_inverse(f):
    """Closed-form inverse of an invertible upper-triangular 3x3 matrix."""
    a, b, c = f[0]
    d = f[1, 1]
    e = f[1, 2]
    g = f[2, 2]
    return np.array([
        [1.0 / a, -b / (a * d), (b * e - c * d) / (a * d * g)],
        [0.0, 1.0 / d, -e / (d * g)],
        [0.0, 0.0, 1.0 / g],
    ])


def saturation(x, xstar):
    """Saturation function: x/xstar inside [-xstar, xstar], +-1 outside."""
    xstar = np.asarray(xstar, dtype=float)
    if np.any(xstar <= 0.0):
        raise ValueError("saturation width must be positive")
    return np.clip(np.asarray(x, dtype=float) / xstar, -1.0, 1.0)


def control_accel_rtn(state, target, cfg, k=None, s=None, chattering=False):
    """Control acceleration in RTN coordinates [m/s^2].

    The practical saturated form; ``chattering=True`` selects the pure
    sign-function law (for chattering demonstrations only).  Raises
    :class:`BetaGuardError` when the desired plane is >= 90 deg away.
    """
    core = _StepCore(state, target)
    hdh = float(target.hd_hat @ core.h_hat)
    if hdh <= 0.0:
        raise BetaGuardError(core.h_hat, target.hd_hat)
    if k is None:
        k = _gain_matrix(core, target, cfg)
    if s is None:
        s = _sliding_surface(core, target, cfg.lambda_r, cfg.lambda_n)
    if chattering:
        switch_term = k * np.sign(s)
    else:
        switch_term = k * saturation(s, cfg.n_phi * k)
    f, g = _control_matrices(core, target, cfg.lambda_r, cfg.lambda_n, cfg.mu)
    f_rtn = np.array([-cfg.mu / core.r ** 2, 0.0, 0.0])
    return -(upper_triangular_inverse(f) @ (g + switch_term)) - f_rtn


def clamp_thrust(u, u_max):
    """Componentwise clamp of the commanded acceleration to [-u_max, u_max]."""
    if u_max <= 0.0:
        raise ValueError("u_max must be positive")
    return np.clip(u, -u_max, u_max)


@dataclass(frozen=True)
class SwitchState:
    """Per-component Schmitt-trigger memory of the thrust switch."""
    latch: np.ndarray

    def __post_init__(self):
        latch = np.array(self.latch, dtype=bool).reshape(3)
        latch.flags.writeable = False
        object.__setattr__(self, "latch", latch)

    @property
    def thrusting(self):
        return bool(self.latch.any())

    @classmethod
    def off(cls):
        return cls(np.zeros(3, dtype=bool))


def hysteresis_step(s, switch, s_on, s_off):
    """One Schmitt-trigger update on |s| with per-component memory.

    A component latches on above s_on, off below s_off, and keeps its
    previous value in between; the thrusters fire while any component
    is latched.
    """
    mag = np.abs(np.asarray(s, dtype=float))
    latch = np.where(mag > s_on, True,
                     np.where(mag < s_off, False, switch.latch))
    return SwitchState(latch)


@dataclass(frozen=True)
class PwpfConfig:
    """Pulse-width pulse-frequency modulator parameters.

    The loop is dimensionless: the command is normalized by the thruster
    level u_m before the low-pass filter (gain k_lpf, cutoff omega_c
    [1/s]) and the Schmitt trigger (delta_on/delta_off).
    """
    u_m: float
    k_lpf: float = 1.0
    omega_c: float = 1.0
    delta_on: float = 2.9e-3
    delta_off: float = 2.5e-3

    def __post_init__(self):
        if self.u_m <= 0.0 or self.omega_c <= 0.0 or self.k_lpf <= 0.0:
            raise ValueError("u_m, k_lpf and omega_c must be positive")
        if not 0.0 <= self.delta_off < self.delta_on:
            raise ValueError("need 0 <= delta_off < delta_on")


@dataclass(frozen=True)
class PwpfState:
    """Filter value and firing sign (-1/0/+1) of one modulator axis."""
    filter: float = 0.0
    firing: int = 0


def pwpf_step(u_cmd, cfg, state, dt):
    """Advance one modulator axis by dt with the command held constant.

    The filter follows k_lpf * (u_cmd/u_m - firing) with an exact
    exponential update; the trigger turns on past +-delta_on and off
    inside +-delta_off.  Returns (thrust in {-u_m, 0, +u_m}, new state).
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    target = cfg.k_lpf * (u_cmd / cfg.u_m - state.firing)
    f = target + (state.filter - target) * np.exp(-cfg.omega_c * dt)
    firing = state.firing
    if firing == 0:
        if f > cfg.delta_on:
            firing = 1
        elif f < -cfg.delta_on:
            firing = -1
    elif firing == 1 and f < cfg.delta_off:
        firing = 0
    elif firing == -1 and f > -cfg.delta_off:
        firing = 0
    return firing * cfg.u_m, PwpfState(float(f), firing)


def sample_surface_over_elements(target, mu, ranges, samples=5,
                                 lambda_r=2.0, lambda_n=2.0):
    """Evaluate the sliding surface over a grid of orbital-element boxes.

    ``ranges`` maps any of "a", "e", "inc", "raan", "argp", "alpha" to
    (low, high) intervals; unlisted elements stay at the target values
    (alpha sweeps 0..2pi by default).  Returns (grid axes dict, s values
    of shape grid + (3,)).  There is no closed-form inverse from element
    bounds to s bounds; this utility supports choosing switch thresholds
    by inspection.
    """
    from .frames import state_from_geometry, OrbitGeometry

    geom = target.geometry
    defaults = {"a": geom.a, "e": geom.e, "inc": geom.inc,
                "raan": geom.raan, "argp": geom.argp,
                "alpha": (0.0, 2.0 * np.pi)}
    axes = {}
    for name in ("a", "e", "inc", "raan", "argp", "alpha"):
        if name in ranges:
            lo, hi = ranges[name]
            axes[name] = np.linspace(lo, hi, samples)
        elif name == "alpha":
            axes[name] = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
        else:
            axes[name] = np.array([defaults[name]])
    mesh = np.meshgrid(*axes.values(), indexing="ij")
    out = np.zeros(mesh[0].shape + (3,))
    it = np.nditer(mesh[0], flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        a, e, inc, raan, argp, alpha = (m[idx] for m in mesh)
        state = state_from_geometry(OrbitGeometry(a, e, inc, raan, argp),
                                    alpha, mu)
        out[idx] = sliding_surface(state, target, lambda_r, lambda_n)
    return axes, out
