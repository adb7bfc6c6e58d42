"""States, RTN bases, frame rotations and orbital-element conversions."""

import math
from dataclasses import dataclass

import numpy as np

INERTIAL = "inertial"
BODY_FIXED = "body"

_ECC_EPS = 1e-8   # below this, the orbit is treated as circular (argp := 0)
_INC_EPS = 1e-8   # below this, the orbit is treated as equatorial (raan := 0)


def cross3(a, b):
    """Cross product of two 3-vectors (fast path for tiny arrays)."""
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def norm3(a):
    """Euclidean norm of a 3-vector (fast path for tiny arrays)."""
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def _vec3(x):
    v = np.array(x, dtype=float).reshape(3)
    v.flags.writeable = False
    return v


@dataclass(frozen=True)
class StateVector:
    """Position/velocity at a time, tagged with its reference frame.

    r [m], v [m/s], t [s]; frame is "inertial" or "body".
    """
    r: np.ndarray
    v: np.ndarray
    t: float = 0.0
    frame: str = INERTIAL

    def __post_init__(self):
        object.__setattr__(self, "r", _vec3(self.r))
        object.__setattr__(self, "v", _vec3(self.v))
        object.__setattr__(self, "t", float(self.t))
        if not (np.all(np.isfinite(self.r)) and np.all(np.isfinite(self.v))
                and np.isfinite(self.t)):
            raise ValueError("state has non-finite components")
        if self.frame not in (INERTIAL, BODY_FIXED):
            raise ValueError("unknown frame %r" % (self.frame,))

    def require_frame(self, frame):
        if self.frame != frame:
            raise ValueError("state is in %r frame, expected %r"
                             % (self.frame, frame))


@dataclass(frozen=True)
class RtnBasis:
    """Right-handed radial / transverse / normal unit triad."""
    r_hat: np.ndarray
    theta_hat: np.ndarray
    h_hat: np.ndarray


@dataclass(frozen=True)
class OrbitGeometry:
    """The five geometric elements of a conic: a [m], e, i, raan, argp [rad].

    a > 0 for ellipses (e < 1), a < 0 for hyperbolas (e > 1); parabolic
    orbits (e = 1) are not representable.
    """
    a: float
    e: float
    inc: float
    raan: float
    argp: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "e", float(self.e))
        inc = float(self.inc)
        if -1e-12 <= inc < 0.0:
            inc = 0.0
        object.__setattr__(self, "inc", inc)
        object.__setattr__(self, "raan", float(self.raan) % (2.0 * np.pi))
        object.__setattr__(self, "argp", float(self.argp) % (2.0 * np.pi))
        if self.e < 0.0:
            raise ValueError("eccentricity must be nonnegative")
        if abs(self.e - 1.0) < 1e-12:
            raise ValueError("parabolic geometry (e = 1) is not representable")
        if self.e < 1.0 and self.a <= 0.0:
            raise ValueError("elliptic orbit needs a > 0")
        if self.e > 1.0 and self.a >= 0.0:
            raise ValueError("hyperbolic orbit needs a < 0")
        if not 0.0 <= self.inc <= np.pi + 1e-12:
            raise ValueError("inclination must lie in [0, pi]")
        if self.periapsis <= 0.0:
            raise ValueError("implied periapsis must be positive")

    @property
    def periapsis(self):
        return self.a * (1.0 - self.e)

    @property
    def semilatus(self):
        return self.a * (1.0 - self.e ** 2)


def rtn_basis(state):
    """RTN triad from the state's kinematics: r_hat, h_hat x r_hat, h_hat."""
    r = norm3(state.r)
    if r == 0.0:
        raise ValueError("zero radius state has no RTN basis")
    h_vec = cross3(state.r, state.v)
    h = norm3(h_vec)
    if h == 0.0:
        raise ValueError("zero angular momentum (velocity parallel to radius)")
    r_hat = state.r / r
    h_hat = h_vec / h
    return RtnBasis(r_hat, cross3(h_hat, r_hat), h_hat)


def to_rtn(vec, basis):
    """Components of an arbitrary vector along (r_hat, theta_hat, h_hat)."""
    vec = np.asarray(vec, dtype=float)
    return np.array([vec @ basis.r_hat, vec @ basis.theta_hat, vec @ basis.h_hat])


def from_rtn(vec, basis):
    """Inverse of :func:`to_rtn`."""
    return (vec[0] * basis.r_hat + vec[1] * basis.theta_hat
            + vec[2] * basis.h_hat)


def hd_from_angles(inc, raan):
    """Orbit-normal unit vector for a plane given by inclination and node."""
    return np.array([np.sin(inc) * np.sin(raan),
                     -np.sin(inc) * np.cos(raan),
                     np.cos(inc)])


def angular_momentum(state):
    """Specific angular momentum vector and magnitude [m^2/s]."""
    h_vec = cross3(state.r, state.v)
    return h_vec, norm3(h_vec)


def h_from_elements(mu, a, e):
    """Angular momentum magnitude sqrt(mu a (1 - e^2)) [m^2/s]."""
    p = a * (1.0 - e ** 2)
    if p < 0.0:
        raise ValueError("a (1 - e^2) must be nonnegative")
    return float(np.sqrt(mu * p))


def eccentricity_vector(state, mu):
    """(v x h)/mu - r_hat; magnitude e, points to periapsis."""
    r = norm3(state.r)
    if r == 0.0:
        raise ValueError("zero radius state has no eccentricity vector")
    h_vec = cross3(state.r, state.v)
    return cross3(state.v, h_vec) / mu - state.r / r


def periapsis_direction(inc, raan, argp):
    """Unit vector toward periapsis for the given angular elements."""
    co, so = np.cos(raan), np.sin(raan)
    cw, sw = np.cos(argp), np.sin(argp)
    ci, si = np.cos(inc), np.sin(inc)
    return np.array([co * cw - so * sw * ci,
                     so * cw + co * sw * ci,
                     sw * si])


def geometry_from_state(state, mu):
    """Geometric elements and true anomaly of a Cartesian state.

    Degeneracies: e < 1e-8 sets argp = 0 with the anomaly measured from the
    node; i < 1e-8 sets raan = 0 (node along +x).
    """
    r_vec = state.r
    v_vec = state.v
    r = norm3(r_vec)
    if r == 0.0:
        raise ValueError("zero radius state")
    h_vec = cross3(r_vec, v_vec)
    h = norm3(h_vec)
    if h == 0.0:
        raise ValueError("rectilinear state (zero angular momentum)")
    h_hat = h_vec / h
    e_vec = cross3(v_vec, h_vec) / mu - r_vec / r
    e = norm3(e_vec)
    energy = 0.5 * v_vec @ v_vec - mu / r
    if abs(e - 1.0) < 1e-12 or energy == 0.0:
        raise ValueError("parabolic state is not representable")
    a = -mu / (2.0 * energy)

    inc = float(np.arccos(np.clip(h_hat[2], -1.0, 1.0)))
    if inc < _INC_EPS or np.pi - inc < _INC_EPS:
        raan = 0.0
        node = np.array([1.0, 0.0, 0.0])
    else:
        raan = float(np.arctan2(h_vec[0], -h_vec[1])) % (2.0 * np.pi)
        node = np.array([np.cos(raan), np.sin(raan), 0.0])

    if e < _ECC_EPS:
        argp = 0.0
        ref = node
    else:
        e_hat = e_vec / e
        argp = math.atan2(cross3(node, e_hat) @ h_hat,
                          node @ e_hat) % (2.0 * np.pi)
        ref = e_hat
    r_hat = r_vec / r
    alpha = math.atan2(cross3(ref, r_hat) @ h_hat, ref @ r_hat)
    return OrbitGeometry(a, e, inc, raan, argp), alpha


def state_from_geometry(geom, alpha, mu, frame=INERTIAL, t=0.0):
    """Cartesian state on the conic at true anomaly ``alpha`` [rad]."""
    p = geom.semilatus
    denom = 1.0 + geom.e * np.cos(alpha)
    if denom <= 1e-12:
        raise ValueError("true anomaly beyond the asymptote of the conic")
    rmag = p / denom
    p_hat = periapsis_direction(geom.inc, geom.raan, geom.argp)
    q_hat = cross3(hd_from_angles(geom.inc, geom.raan), p_hat)
    h = np.sqrt(mu * p)
    r = rmag * (np.cos(alpha) * p_hat + np.sin(alpha) * q_hat)
    v = mu / h * (-np.sin(alpha) * p_hat + (geom.e + np.cos(alpha)) * q_hat)
    return StateVector(r, v, t=t, frame=frame)


def rotate_frame(state, nu, to_frame):
    """Rotate a state between the inertial and body-fixed frames.

    The body spins at +nu about the inertial Z axis and the frames coincide
    at t = 0; velocities include the transport term.
    """
    if to_frame == state.frame:
        return state
    ang = nu * state.t
    c, s = np.cos(ang), np.sin(ang)
    omega = np.array([0.0, 0.0, nu])
    if to_frame == BODY_FIXED:
        state.require_frame(INERTIAL)
        rot = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])
        r_b = rot @ state.r
        v_b = rot @ state.v - np.cross(omega, r_b)
        return StateVector(r_b, v_b, t=state.t, frame=BODY_FIXED)
    state.require_frame(BODY_FIXED)
    rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    r_i = rot @ state.r
    v_i = rot @ (state.v + np.cross(omega, state.r))
    return StateVector(r_i, v_i, t=state.t, frame=INERTIAL)


def wrap_angle(x):
    """Wrap an angle difference to (-pi, pi]."""
    return float(-((-x + np.pi) % (2.0 * np.pi) - np.pi))


def element_errors(geom, target):
    """Errors (da, de, di, draan, dargp) of ``geom`` relative to ``target``;
    angles wrapped to (-pi, pi]."""
    return np.array([geom.a - target.a,
                     geom.e - target.e,
                     wrap_angle(geom.inc - target.inc),
                     wrap_angle(geom.raan - target.raan),
                     wrap_angle(geom.argp - target.argp)])
