"""Triangulated polyhedron shape models and their mass properties.

Shapes are closed, watertight, consistently wound triangle meshes in a
body-fixed frame (meters).  Mass properties assume uniform density, so the
body frame can be moved to the center of mass and aligned with the
principal axes of inertia.
"""

import numpy as np


class MeshError(ValueError):
    """Base error for invalid shape meshes."""


class NonTriangularFaceError(MeshError):
    pass


class VertexIndexError(MeshError):
    pass


class WatertightnessError(MeshError):
    pass


class DegenerateShapeError(MeshError):
    pass


class PolyhedronShape:
    """Closed triangulated surface with derived edge and normal tables.

    Parameters
    ----------
    vertices : (n, 3) float array, meters, body-fixed frame
    faces : (m, 3) int array, vertex index triples, counter-clockwise
        seen from outside

    Construction validates index ranges, watertightness (every edge shared
    by exactly two faces with opposite traversal) and outward orientation
    (positive total signed volume).
    """

    def __init__(self, vertices, faces):
        vertices = np.array(vertices, dtype=np.float64, order="C")
        faces = np.array(faces, dtype=np.int64, order="C")
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise MeshError("vertices must be an (n, 3) array")
        if faces.ndim != 2 or faces.shape[1] != 3:
            raise NonTriangularFaceError("faces must be an (m, 3) array of triangles")
        if faces.min(initial=0) < 0 or faces.max(initial=-1) >= len(vertices):
            raise VertexIndexError(
                "face indices out of range 0..%d" % (len(vertices) - 1))

        self.vertices = vertices
        self.faces = faces
        self._build_edges()
        self._build_geometry()
        if self.signed_volume() <= 0.0:
            raise MeshError("total signed volume is not positive; "
                            "faces are not consistently wound outward")
        self.vertices.flags.writeable = False
        self.faces.flags.writeable = False

    def _build_edges(self):
        f = self.faces
        directed = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        owner = np.concatenate([np.arange(len(f))] * 3)
        lo = directed.min(axis=1)
        hi = directed.max(axis=1)
        if np.any(lo == hi):
            raise MeshError("degenerate face with a repeated vertex index")
        keys = lo * len(self.vertices) + hi
        order = np.argsort(keys, kind="stable")
        keys_sorted = keys[order]
        if len(keys_sorted) % 2 != 0 or np.any(keys_sorted[0::2] != keys_sorted[1::2]):
            raise WatertightnessError("mesh is not watertight: some edge is not "
                                      "shared by exactly two faces")
        if len(keys_sorted) >= 4 and np.any(keys_sorted[1:-1:2] == keys_sorted[2::2]):
            raise WatertightnessError("mesh is not watertight: some edge is "
                                      "shared by more than two faces")
        first = order[0::2]
        second = order[1::2]
        same_way = directed[first, 0] == directed[second, 0]
        if np.any(same_way):
            raise WatertightnessError("inconsistent winding: an edge is traversed "
                                      "in the same direction by both of its faces")
        # Edge stored with the traversal direction of face_a.
        self.edge_vertices = directed[first]          # (E, 2)
        self.edge_face_a = owner[first]               # traverses edge as stored
        self.edge_face_b = owner[second]              # traverses it reversed

    def _build_geometry(self):
        v = self.vertices
        f = self.faces
        p0, p1, p2 = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
        cross = np.cross(p1 - p0, p2 - p0)
        norms = np.linalg.norm(cross, axis=1)
        if np.any(norms < 1e-300):
            raise MeshError("zero-area face in mesh")
        self.face_normals = cross / norms[:, None]

        na = self.face_normals[self.edge_face_a]
        nb = self.face_normals[self.edge_face_b]
        e_vec = v[self.edge_vertices[:, 1]] - v[self.edge_vertices[:, 0]]
        e_hat = e_vec / np.linalg.norm(e_vec, axis=1)[:, None]
        out_a = np.cross(e_hat, na)      # in-plane normal of face_a along +edge
        out_b = np.cross(-e_hat, nb)     # face_b traverses the edge reversed
        # Per-edge dyad n_a (x) out_a + n_b (x) out_b used by the gravity model.
        self.edge_dyads = (na[:, :, None] * out_a[:, None, :]
                           + nb[:, :, None] * out_b[:, None, :])
        self.face_dyads = (self.face_normals[:, :, None]
                           * self.face_normals[:, None, :])

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def n_edges(self):
        return len(self.edge_vertices)

    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces

    def signed_volume(self):
        """Total signed volume from the divergence theorem [m^3]."""
        v = self.vertices
        f = self.faces
        return float(np.einsum("ij,ij->", v[f[:, 0]],
                               np.cross(v[f[:, 1]], v[f[:, 2]]))) / 6.0

    def circumscribing_radius(self):
        """Radius of the smallest origin-centered sphere containing all vertices [m]."""
        return float(np.sqrt((self.vertices ** 2).sum(axis=1).max()))

    def translated(self, offset):
        return PolyhedronShape(self.vertices + np.asarray(offset, dtype=float),
                               self.faces)

    def rotated(self, rotation):
        """Shape with vertices mapped through ``rotation @ v`` (3x3 orthonormal)."""
        rotation = np.asarray(rotation, dtype=float)
        return PolyhedronShape(self.vertices @ rotation.T, self.faces)


class MassProperties:
    """Uniform-density mass properties of a polyhedron.

    Attributes
    ----------
    volume : m^3
    mass : kg
    centroid : (3,) m
    inertia : (3, 3) kg m^2, about the centroid, in the input axes
    rotation : (3, 3) maps input axes to principal axes
        (``rotation @ (x - centroid)``); moments ascend so the largest
        (the natural spin axis) maps to z; det = +1.
    principal_moments : (3,) kg m^2, ascending
    """

    def __init__(self, volume, mass, centroid, inertia, rotation, principal_moments):
        self.volume = volume
        self.mass = mass
        self.centroid = centroid
        self.inertia = inertia
        self.rotation = rotation
        self.principal_moments = principal_moments


def _principal_rotation(inertia):
    """Rotation whose rows are principal axes, ascending moments, det +1."""
    scale = np.abs(inertia).max()
    off = inertia - np.diag(np.diag(inertia))
    if np.abs(off).max() <= 1e-12 * scale:
        # Already diagonal: only permute axes so moments ascend.  Ties are
        # resolved toward the original order (quantized sort key), keeping
        # the operation idempotent for degenerate inertia (cube, sphere).
        key = np.round(np.diag(inertia) / scale * 1e9)
        order = np.argsort(key, kind="stable")
        rot = np.eye(3)[order]
        if np.linalg.det(rot) < 0:
            rot[2] = -rot[2]
        return rot, np.diag(inertia)[order]
    moments, vecs = np.linalg.eigh(inertia)
    rot = vecs.T
    for i in (0, 1):
        if rot[i, i] < 0:
            rot[i] = -rot[i]
    rot[2] = np.cross(rot[0], rot[1])
    return rot, moments


def mass_properties(shape, density=None, mass=None):
    """Volume, centroid, central inertia and principal axes of a shape.

    Either ``density`` [kg/m^3] or total ``mass`` [kg] must be given; with
    ``mass`` the uniform density is derived as mass/volume.
    """
    v = shape.vertices
    f = shape.faces
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    tet_vol = np.einsum("ij,ij->i", a, np.cross(b, c)) / 6.0
    volume = float(tet_vol.sum())
    if volume <= 1e-300:
        raise DegenerateShapeError("shape has zero volume")
    if (density is None) == (mass is None):
        raise ValueError("give exactly one of density or mass")
    if density is None:
        density = mass / volume
    mass = density * volume

    centroid = (tet_vol[:, None] * (a + b + c)).sum(axis=0) / (4.0 * volume)

    # Second moment integral over each tetrahedron (origin, a, b, c):
    # int x (x) x dV = V/20 * (a(x)a + b(x)b + c(x)c + p(x)p), p = a+b+c.
    p = a + b + c
    w = tet_vol / 20.0
    second = (np.einsum("i,ij,ik->jk", w, a, a)
              + np.einsum("i,ij,ik->jk", w, b, b)
              + np.einsum("i,ij,ik->jk", w, c, c)
              + np.einsum("i,ij,ik->jk", w, p, p))
    second_c = second - volume * np.outer(centroid, centroid)
    inertia = density * (np.trace(second_c) * np.eye(3) - second_c)
    rotation, moments = _principal_rotation(inertia)
    return MassProperties(volume, mass, centroid, inertia, rotation, moments)


def normalize_to_body_frame(shape, density=None, mass=None):
    """Re-express a shape with the centroid at the origin and principal axes
    aligned with (x, y, z), moments ascending (spin axis -> z)."""
    props = mass_properties(shape, density=density, mass=mass)
    verts = (shape.vertices - props.centroid) @ props.rotation.T
    return PolyhedronShape(verts, shape.faces)


# --- file parsing ---------------------------------------------------------

def parse_shape(data, fmt="obj", scale=1.0):
    """Parse a shape model file.

    Parameters
    ----------
    data : str or bytes, full file content
    fmt : "obj" for Wavefront OBJ ("v x y z" / "f i j k", 1-based), or
        "pds" for a two-block plain-text table (vertex count, coordinates,
        facet count, 1-based index triples)
    scale : factor applied to coordinates (e.g. 1e3 for km files)
    """
    if isinstance(data, bytes):
        data = data.decode("ascii", errors="replace")
    if fmt == "obj":
        verts, faces = _parse_obj(data)
    elif fmt == "pds":
        verts, faces = _parse_pds(data)
    else:
        raise ValueError("unknown shape format %r (expected 'obj' or 'pds')" % fmt)
    return PolyhedronShape(np.asarray(verts, dtype=float) * scale, faces)


def _parse_obj(text):
    verts = []
    faces = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "v":
            if len(parts) < 4:
                raise MeshError("line %d: vertex needs 3 coordinates" % lineno)
            verts.append([float(parts[1]), float(parts[2]), float(parts[3])])
        elif tag == "f":
            idx = [int(p.split("/")[0]) for p in parts[1:]]
            if len(idx) != 3:
                raise NonTriangularFaceError(
                    "line %d: face with %d vertices (triangles only)"
                    % (lineno, len(idx)))
            if any(i < 1 for i in idx):
                raise VertexIndexError("line %d: indices must be positive "
                                       "1-based" % lineno)
            faces.append([i - 1 for i in idx])
        # other OBJ record types (vn, vt, o, g, s, ...) are ignored
    if not verts or not faces:
        raise MeshError("no vertices or faces found in OBJ data")
    return verts, faces


def _parse_pds(text):
    tokens = text.split()
    pos = 0

    def take(n):
        nonlocal pos
        if pos + n > len(tokens):
            raise MeshError("truncated PDS table")
        out = tokens[pos:pos + n]
        pos += n
        return out

    nv = int(take(1)[0])
    verts = np.array(take(3 * nv), dtype=float).reshape(nv, 3)
    nf = int(take(1)[0])
    faces = np.array(take(3 * nf), dtype=int).reshape(nf, 3)
    if faces.min() < 1:
        raise VertexIndexError("PDS facet indices must be 1-based positive")
    return verts, faces - 1


# --- built-in test shapes -------------------------------------------------

_CUBE_FACES = np.array([
    (0, 3, 2), (0, 2, 1),   # -z
    (4, 5, 6), (4, 6, 7),   # +z
    (0, 1, 5), (0, 5, 4),   # -y
    (1, 2, 6), (1, 6, 5),   # +x
    (2, 3, 7), (2, 7, 6),   # +y
    (3, 0, 4), (3, 4, 7),   # -x
])


def cube_shape(side=1.0, center=(0.0, 0.0, 0.0)):
    """Axis-aligned cube: 8 vertices, 12 faces, 18 edges."""
    return box_shape((side / 2.0,) * 3, center=center)


def box_shape(semi_axes, center=(0.0, 0.0, 0.0)):
    """Axis-aligned rectangular box with the given semi-extents [m]."""
    sx, sy, sz = semi_axes
    corners = np.array([(-sx, -sy, -sz), (sx, -sy, -sz), (sx, sy, -sz),
                        (-sx, sy, -sz), (-sx, -sy, sz), (sx, -sy, sz),
                        (sx, sy, sz), (-sx, sy, sz)])
    return PolyhedronShape(corners + np.asarray(center, dtype=float), _CUBE_FACES)


def icosphere_shape(subdivisions=3, radius=1.0):
    """Subdivided icosahedron projected to a sphere; 20 * 4**s faces."""
    return ellipsoid_shape((radius, radius, radius), subdivisions=subdivisions)


def ellipsoid_shape(semi_axes, subdivisions=3):
    """Triaxial ellipsoid mesh from an anisotropically scaled icosphere."""
    t = (1.0 + np.sqrt(5.0)) / 2.0
    verts = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
             (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
             (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    verts = [np.asarray(v, dtype=float) / np.linalg.norm(v) for v in verts]

    midpoint_cache = {}

    def midpoint(i, j):
        key = (min(i, j), max(i, j))
        if key not in midpoint_cache:
            m = verts[i] + verts[j]
            verts.append(m / np.linalg.norm(m))
            midpoint_cache[key] = len(verts) - 1
        return midpoint_cache[key]

    for _ in range(subdivisions):
        new_faces = []
        for (i, j, k) in faces:
            a, b, c = midpoint(i, j), midpoint(j, k), midpoint(k, i)
            new_faces += [(i, a, c), (j, b, a), (k, c, b), (a, b, c)]
        faces = new_faces

    scaled = np.asarray(verts) * np.asarray(semi_axes, dtype=float)
    return PolyhedronShape(scaled, np.asarray(faces, dtype=np.int64))
