"""Compiled inner loops for field evaluation and trajectory propagation.

Everything here is a plain-number/array function so numba can compile it;
the public API stays in :mod:`gravity` and :mod:`dynamics`.
"""

import numpy as np
from numba import njit

# gravity kinds
POINT = 0
HARMONICS = 1
# frames
INERTIAL = 0
BODY_FIXED = 1
# events
NO_EVENT = 0
IMPACT = 1
ESCAPE = 2


@njit(cache=True)
def _harm_accel_work(mu, r0, c, s, nmax, x, y, z, v, w):
    """Acceleration from unnormalized coefficients via the Cartesian
    V/W recursion; work arrays v, w are (nmax+2, nmax+2)."""
    r2 = x * x + y * y + z * z
    rho = r0 * r0 / r2
    x0 = r0 * x / r2
    y0 = r0 * y / r2
    z0 = r0 * z / r2
    n2 = nmax + 2
    v[0, 0] = r0 / np.sqrt(r2)
    w[0, 0] = 0.0
    for m in range(n2):
        if m > 0:
            v[m, m] = (2 * m - 1) * (x0 * v[m - 1, m - 1] - y0 * w[m - 1, m - 1])
            w[m, m] = (2 * m - 1) * (x0 * w[m - 1, m - 1] + y0 * v[m - 1, m - 1])
        for n in range(m + 1, n2):
            v[n, m] = (2 * n - 1) / (n - m) * z0 * v[n - 1, m]
            w[n, m] = (2 * n - 1) / (n - m) * z0 * w[n - 1, m]
            if n - m > 1:
                v[n, m] -= (n + m - 1) / (n - m) * rho * v[n - 2, m]
                w[n, m] -= (n + m - 1) / (n - m) * rho * w[n - 2, m]
    ax = 0.0
    ay = 0.0
    az = 0.0
    for n in range(nmax + 1):
        for m in range(n + 1):
            if m == 0:
                ax += -c[n, 0] * v[n + 1, 1]
                ay += -c[n, 0] * w[n + 1, 1]
                az += -(n + 1) * c[n, 0] * v[n + 1, 0]
            else:
                f = float((n - m + 2) * (n - m + 1))
                ax += 0.5 * (-c[n, m] * v[n + 1, m + 1] - s[n, m] * w[n + 1, m + 1]
                             + f * (c[n, m] * v[n + 1, m - 1]
                                    + s[n, m] * w[n + 1, m - 1]))
                ay += 0.5 * (-c[n, m] * w[n + 1, m + 1] + s[n, m] * v[n + 1, m + 1]
                             + f * (-c[n, m] * w[n + 1, m - 1]
                                    + s[n, m] * v[n + 1, m - 1]))
                az += (n - m + 1) * (-c[n, m] * v[n + 1, m] - s[n, m] * w[n + 1, m])
    k = mu / (r0 * r0)
    return k * ax, k * ay, k * az


def harmonics_accel(mu, r0, c, s, nmax, x, y, z):
    v = np.zeros((nmax + 2, nmax + 2))
    w = np.zeros((nmax + 2, nmax + 2))
    ax, ay, az = _harm_accel_work(mu, r0, c, s, nmax, x, y, z, v, w)
    return np.array([ax, ay, az])


@njit(cache=True)
def _rhs(state, t, u, mu, nu, frame, grav_kind, r0, c, s, nmax,
         srp_mag, v, w, out):
    x, y, z, vx, vy, vz = state
    if grav_kind == HARMONICS:
        if frame == INERTIAL:
            cn = np.cos(nu * t)
            sn = np.sin(nu * t)
            xb = cn * x + sn * y
            yb = -sn * x + cn * y
            gxb, gyb, gzb = _harm_accel_work(mu, r0, c, s, nmax, xb, yb, z, v, w)
            gx = cn * gxb - sn * gyb
            gy = sn * gxb + cn * gyb
            gz = gzb
        else:
            gx, gy, gz = _harm_accel_work(mu, r0, c, s, nmax, x, y, z, v, w)
    else:
        r3 = (x * x + y * y + z * z) ** 1.5
        gx = -mu * x / r3
        gy = -mu * y / r3
        gz = -mu * z / r3
    if frame == BODY_FIXED:
        gx += 2.0 * nu * vy + nu * nu * x
        gy += -2.0 * nu * vx + nu * nu * y
        if srp_mag != 0.0:
            gx += srp_mag * np.cos(nu * t)
            gy += -srp_mag * np.sin(nu * t)
    else:
        gx += srp_mag
    out[0] = vx
    out[1] = vy
    out[2] = vz
    out[3] = gx + u[0]
    out[4] = gy + u[1]
    out[5] = gz + u[2]


@njit(cache=True)
def propagate_zoh(state, t0, nsub, dt, u, mu, nu, frame, grav_kind,
                  r0, c, s, nmax, srp_mag, impact_r2, escape_r2):
    """Classical RK4 over ``nsub`` steps of ``dt`` with constant control.

    Returns (state, t, event) with event 0=none, 1=impact, 2=escape; on an
    event the state and time of the offending substep boundary are returned.
    """
    v = np.zeros((nmax + 2, nmax + 2))
    w = np.zeros((nmax + 2, nmax + 2))
    x = state.copy()
    k1 = np.zeros(6)
    k2 = np.zeros(6)
    k3 = np.zeros(6)
    k4 = np.zeros(6)
    tmp = np.zeros(6)
    t = t0
    for i in range(nsub):
        _rhs(x, t, u, mu, nu, frame, grav_kind, r0, c, s, nmax, srp_mag, v, w, k1)
        for j in range(6):
            tmp[j] = x[j] + 0.5 * dt * k1[j]
        _rhs(tmp, t + 0.5 * dt, u, mu, nu, frame, grav_kind, r0, c, s, nmax,
             srp_mag, v, w, k2)
        for j in range(6):
            tmp[j] = x[j] + 0.5 * dt * k2[j]
        _rhs(tmp, t + 0.5 * dt, u, mu, nu, frame, grav_kind, r0, c, s, nmax,
             srp_mag, v, w, k3)
        for j in range(6):
            tmp[j] = x[j] + dt * k3[j]
        _rhs(tmp, t + dt, u, mu, nu, frame, grav_kind, r0, c, s, nmax,
             srp_mag, v, w, k4)
        for j in range(6):
            x[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
        t = t0 + (i + 1) * dt
        rr = x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
        if rr < impact_r2:
            return x, t, IMPACT
        if rr > escape_r2:
            return x, t, ESCAPE
    return x, t, NO_EVENT
