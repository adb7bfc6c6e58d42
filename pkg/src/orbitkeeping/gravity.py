"""Gravitational acceleration models.

Three interchangeable field models evaluated in the body-fixed frame:

* point mass,
* exact constant-density polyhedron (edge/face dyad formulation),
* spherical harmonics (Cartesian recursion, unnormalized coefficients),

plus derivation of harmonic coefficients from a polyhedron by exact
volume quadrature.
"""

import numpy as np

from .constants import GRAVITATIONAL_CONSTANT
from . import _kernels

MAX_HARMONIC_DEGREE = 16  # unnormalized recursion validity cap


class SurfacePointError(ValueError):
    """Field point exactly on an edge or face of the polyhedron."""


class InteriorPointWarning(UserWarning):
    pass


# --- point mass -----------------------------------------------------------

def point_mass_accel(mu, r):
    """Acceleration -mu r / |r|^3 [m/s^2]."""
    r = np.asarray(r, dtype=float)
    d = np.linalg.norm(r)
    if d == 0.0:
        raise ValueError("point-mass field evaluated at zero radius")
    return -mu * r / d ** 3


def point_mass_potential(mu, r):
    """Potential mu / |r| [m^2/s^2] (positive convention)."""
    d = np.linalg.norm(np.asarray(r, dtype=float))
    if d == 0.0:
        raise ValueError("point-mass field evaluated at zero radius")
    return mu / d


# --- constant-density polyhedron ------------------------------------------

def _polyhedron_terms(shape, r):
    """Per-edge log factors and per-face solid angles seen from ``r``."""
    v = shape.vertices
    ev = shape.edge_vertices
    ra = v[ev[:, 0]] - r
    rb = v[ev[:, 1]] - r
    na = np.linalg.norm(ra, axis=1)
    nb = np.linalg.norm(rb, axis=1)
    elen = np.linalg.norm(v[ev[:, 1]] - v[ev[:, 0]], axis=1)
    denom = na + nb - elen
    if np.any(denom <= 1e-12 * elen):
        raise SurfacePointError("field point lies on a polyhedron edge")
    le = np.log((na + nb + elen) / denom)

    f = shape.faces
    p1 = v[f[:, 0]] - r
    p2 = v[f[:, 1]] - r
    p3 = v[f[:, 2]] - r
    n1 = np.linalg.norm(p1, axis=1)
    n2 = np.linalg.norm(p2, axis=1)
    n3 = np.linalg.norm(p3, axis=1)
    num = np.einsum("ij,ij->i", p1, np.cross(p2, p3))
    den = (n1 * n2 * n3 + np.einsum("ij,ij->i", p1, p2) * n3
           + np.einsum("ij,ij->i", p2, p3) * n1
           + np.einsum("ij,ij->i", p3, p1) * n2)
    scale = n1 * n2 * n3
    if np.any((np.abs(num) <= 1e-14 * scale) & (den <= 0.0)):
        raise SurfacePointError("field point lies in the plane of a face")
    omega = 2.0 * np.arctan2(num, den)
    return ra, le, p1, omega


def polyhedron_accel(shape, density, r, gravity_constant=GRAVITATIONAL_CONSTANT):
    """Exact acceleration of a uniform-density polyhedron [m/s^2].

    Returns ``(accel, interior)``; ``interior`` is True when the field
    point is inside the body (total solid angle of -4 pi).  Evaluation is
    defined there too, but the simulator treats interior entry as impact.
    """
    r = np.asarray(r, dtype=float)
    ra, le, p1, omega = _polyhedron_terms(shape, r)
    edge_sum = np.einsum("e,eij,ej->i", le, shape.edge_dyads, ra)
    face_sum = np.einsum("f,fij,fj->i", omega, shape.face_dyads, p1)
    g = gravity_constant * density * (-edge_sum + face_sum)
    interior = omega.sum() > 2.0 * np.pi
    return g, interior


def polyhedron_potential(shape, density, r, gravity_constant=GRAVITATIONAL_CONSTANT):
    """Potential of a uniform-density polyhedron [m^2/s^2], mu/r convention."""
    r = np.asarray(r, dtype=float)
    ra, le, p1, omega = _polyhedron_terms(shape, r)
    edge_sum = np.einsum("e,ei,eij,ej->", le, ra, shape.edge_dyads, ra)
    face_sum = np.einsum("f,fi,fij,fj->", omega, p1, shape.face_dyads, p1)
    return 0.5 * gravity_constant * density * (edge_sum - face_sum)


def polyhedron_laplacian(shape, r):
    """Signed total solid angle of the surface seen from ``r`` [sr].

    ~0 for exterior points, ~-4 pi for interior points; equals the
    Laplacian of the polyhedron potential divided by (G * density).
    """
    _, _, _, omega = _polyhedron_terms(shape, np.asarray(r, dtype=float))
    return -float(omega.sum())


def interior_point(shape, r):
    """True when ``r`` lies inside the closed surface."""
    return polyhedron_laplacian(shape, r) < -2.0 * np.pi


# --- spherical harmonics ----------------------------------------------------

class HarmonicsModel:
    """Unnormalized spherical-harmonics gravity model.

    Attributes
    ----------
    mu : gravitational parameter [m^3/s^2]
    r0 : reference radius [m]
    nmax : maximum degree and order
    c, s : (nmax+1, nmax+1) unnormalized coefficients, c[n, m], s[n, m]
    """

    def __init__(self, mu, r0, c, s):
        c = np.array(c, dtype=float)
        s = np.array(s, dtype=float)
        if c.shape != s.shape or c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("coefficient arrays must be square and congruent")
        nmax = c.shape[0] - 1
        if nmax > MAX_HARMONIC_DEGREE:
            raise ValueError("degree %d exceeds the unnormalized recursion cap %d"
                             % (nmax, MAX_HARMONIC_DEGREE))
        if r0 <= 0:
            raise ValueError("reference radius must be positive")
        if np.any(s[:, 0] != 0.0):
            raise ValueError("S[n, 0] must be zero")
        self.mu = float(mu)
        self.r0 = float(r0)
        self.nmax = nmax
        self.c = c
        self.s = s
        self.c.flags.writeable = False
        self.s.flags.writeable = False

    def truncated(self, nmax):
        if nmax > self.nmax:
            raise ValueError("cannot truncate degree %d model to %d"
                             % (self.nmax, nmax))
        return HarmonicsModel(self.mu, self.r0,
                              self.c[:nmax + 1, :nmax + 1],
                              self.s[:nmax + 1, :nmax + 1])


def harmonics_accel(model, r):
    """Gradient of the truncated harmonic potential [m/s^2]."""
    r = np.asarray(r, dtype=float)
    if np.linalg.norm(r) == 0.0:
        raise ValueError("harmonics field evaluated at zero radius")
    return _kernels.harmonics_accel(model.mu, model.r0, model.c, model.s,
                                    model.nmax, r[0], r[1], r[2])


def harmonics_potential(model, r):
    """Harmonic potential sum [m^2/s^2], mu/r convention."""
    x, y, z = np.asarray(r, dtype=float)
    r2 = x * x + y * y + z * z
    if r2 == 0.0:
        raise ValueError("harmonics field evaluated at zero radius")
    n2 = model.nmax + 1
    v = np.zeros((n2, n2))
    w = np.zeros((n2, n2))
    rho = model.r0 ** 2 / r2
    x0, y0, z0 = model.r0 * x / r2, model.r0 * y / r2, model.r0 * z / r2
    v[0, 0] = model.r0 / np.sqrt(r2)
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
    return model.mu / model.r0 * float(np.sum(model.c * v) + np.sum(model.s * w))


def _regular_solid_harmonics(points, nmax, r0):
    """Regular solid harmonics (r/r0)^n P_nm cos/sin(m lon) at Cartesian points.

    Returns arrays of shape (nmax+1, nmax+1, len(points)).
    """
    x, y, z = points[:, 0] / r0, points[:, 1] / r0, points[:, 2] / r0
    rho = x * x + y * y + z * z
    n2 = nmax + 1
    re = np.zeros((n2, n2, len(points)))
    im = np.zeros((n2, n2, len(points)))
    re[0, 0] = 1.0
    for m in range(n2):
        if m > 0:
            re[m, m] = (2 * m - 1) * (x * re[m - 1, m - 1] - y * im[m - 1, m - 1])
            im[m, m] = (2 * m - 1) * (x * im[m - 1, m - 1] + y * re[m - 1, m - 1])
        for n in range(m + 1, n2):
            re[n, m] = (2 * n - 1) / (n - m) * z * re[n - 1, m]
            im[n, m] = (2 * n - 1) / (n - m) * z * im[n - 1, m]
            if n - m > 1:
                re[n, m] -= (n + m - 1) / (n - m) * rho * re[n - 2, m]
                im[n, m] -= (n + m - 1) / (n - m) * rho * im[n - 2, m]
    return re, im


def _simplex_quadrature(nmax):
    """Collapsed Gauss-Legendre rule on the unit simplex, exact for
    polynomials of total degree <= nmax."""
    p = int(np.ceil((nmax + 3) / 2.0))
    nodes, weights = np.polynomial.legendre.leggauss(p)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    x1, x2, x3 = np.meshgrid(nodes, nodes, nodes, indexing="ij")
    w1, w2, w3 = np.meshgrid(weights, weights, weights, indexing="ij")
    u = x1
    v = (1.0 - x1) * x2
    w = (1.0 - x1) * (1.0 - x2) * x3
    jac = (1.0 - x1) ** 2 * (1.0 - x2)
    bary = np.stack([u.ravel(), v.ravel(), w.ravel()], axis=1)
    return bary, (w1 * w2 * w3 * jac).ravel()


def harmonics_from_polyhedron(shape, density, nmax, r0=None,
                              gravity_constant=GRAVITATIONAL_CONSTANT,
                              chunk=20000):
    """Harmonic coefficients of a constant-density polyhedron.

    The coefficient volume integrals are homogeneous polynomials of degree n,
    integrated exactly per origin-anchored tetrahedron with a collapsed
    Gauss-Legendre rule.  The shape should be centered on its center of mass
    for the degree-1 terms to vanish.

    Parameters
    ----------
    nmax : maximum degree and order (<= 16)
    r0 : reference radius [m]; defaults to the circumscribing sphere radius
    """
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    if nmax > MAX_HARMONIC_DEGREE:
        raise ValueError("degree %d exceeds the unnormalized recursion cap %d"
                         % (nmax, MAX_HARMONIC_DEGREE))
    if r0 is None:
        r0 = shape.circumscribing_radius()
    if r0 <= 0:
        raise ValueError("reference radius must be positive")

    v = shape.vertices
    f = shape.faces
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    tet_vol = np.einsum("ij,ij->i", a, np.cross(b, c)) / 6.0
    volume = tet_vol.sum()
    if volume <= 0:
        raise ValueError("shape volume must be positive")

    bary, bw = _simplex_quadrature(nmax)
    n2 = nmax + 1
    cre = np.zeros((n2, n2))
    cim = np.zeros((n2, n2))
    faces_per_chunk = max(1, chunk // len(bary))
    for start in range(0, len(f), faces_per_chunk):
        sl = slice(start, start + faces_per_chunk)
        # points: (faces, quad, 3); weights: signed 6V per tet times rule weight
        pts = (bary[None, :, 0, None] * a[sl, None, :]
               + bary[None, :, 1, None] * b[sl, None, :]
               + bary[None, :, 2, None] * c[sl, None, :]).reshape(-1, 3)
        wts = (6.0 * tet_vol[sl, None] * bw[None, :]).ravel()
        re, im = _regular_solid_harmonics(pts, nmax, r0)
        cre += re @ wts
        cim += im @ wts

    cre /= volume
    cim /= volume
    factor = np.zeros((n2, n2))
    for n in range(n2):
        for m in range(n + 1):
            fac = 1.0
            for k in range(n - m + 1, n + m + 1):
                fac *= k
            factor[n, m] = (1.0 if m == 0 else 2.0) / fac
    cnm = factor * cre
    snm = factor * cim
    snm[:, 0] = 0.0
    mu = gravity_constant * density * volume
    return HarmonicsModel(mu, r0, cnm, snm)


# --- coefficient file I/O ---------------------------------------------------

def dump_coefficients(model, path):
    """Write a model as ASCII: header directives then "n m C S" lines."""
    with open(path, "w") as fh:
        fh.write("# spherical harmonics model, unnormalized coefficients\n")
        fh.write("mu %.17g\n" % model.mu)
        fh.write("r0 %.17g\n" % model.r0)
        for n in range(model.nmax + 1):
            for m in range(n + 1):
                fh.write("%d %d %.17g %.17g\n" % (n, m, model.c[n, m], model.s[n, m]))


def load_coefficients(path, normalized=False):
    """Read a model written by :func:`dump_coefficients`.

    With ``normalized=True`` the file's coefficients are treated as fully
    normalized and converted to the unnormalized convention at load time.
    """
    mu = None
    r0 = None
    entries = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "mu":
                mu = float(parts[1])
            elif parts[0] == "r0":
                r0 = float(parts[1])
            else:
                if len(parts) != 4:
                    raise ValueError("bad coefficient line: %r" % raw.strip())
                entries.append((int(parts[0]), int(parts[1]),
                                float(parts[2]), float(parts[3])))
    if mu is None or r0 is None:
        raise ValueError("coefficient file must declare mu and r0")
    if not entries:
        raise ValueError("coefficient file has no coefficient lines")
    nmax = max(e[0] for e in entries)
    c = np.zeros((nmax + 1, nmax + 1))
    s = np.zeros((nmax + 1, nmax + 1))
    for n, m, cv, sv in entries:
        if m > n:
            raise ValueError("order %d exceeds degree %d" % (m, n))
        if normalized:
            fac = 1.0
            for k in range(n - m + 1, n + m + 1):
                fac *= k
            scale = np.sqrt((1.0 if m == 0 else 2.0) * (2 * n + 1) / fac)
            cv *= scale
            sv *= scale
        c[n, m] = cv
        s[n, m] = sv
    return HarmonicsModel(mu, r0, c, s)


# --- field variants ----------------------------------------------------------

class GravityField:
    """Tagged union over the three field models, evaluated in the body frame."""

    def __init__(self, kind, mu, shape=None, density=None, harmonics=None):
        if kind not in ("point", "polyhedron", "harmonics"):
            raise ValueError("unknown gravity field kind %r" % kind)
        self.kind = kind
        self.mu = float(mu)
        self.shape = shape
        self.density = density
        self.harmonics = harmonics

    @classmethod
    def point_mass(cls, mu):
        return cls("point", mu)

    @classmethod
    def from_polyhedron(cls, shape, density,
                        gravity_constant=GRAVITATIONAL_CONSTANT):
        mu = gravity_constant * density * shape.signed_volume()
        field = cls("polyhedron", mu, shape=shape, density=density)
        field.gravity_constant = gravity_constant
        return field

    @classmethod
    def from_harmonics(cls, model):
        return cls("harmonics", model.mu, harmonics=model)

    def acceleration(self, r):
        """Body-frame acceleration [m/s^2] at body-frame position r [m]."""
        if self.kind == "point":
            return point_mass_accel(self.mu, r)
        if self.kind == "harmonics":
            return harmonics_accel(self.harmonics, r)
        g, _ = polyhedron_accel(self.shape, self.density, r,
                                getattr(self, "gravity_constant",
                                        GRAVITATIONAL_CONSTANT))
        return g

    def potential(self, r):
        if self.kind == "point":
            return point_mass_potential(self.mu, r)
        if self.kind == "harmonics":
            return harmonics_potential(self.harmonics, r)
        return polyhedron_potential(self.shape, self.density, r,
                                    getattr(self, "gravity_constant",
                                            GRAVITATIONAL_CONSTANT))
