"""Bundled small-body stand-ins.

Shape archives for the real bodies are large; the package ships procedural
triaxial ellipsoids at the published overall dimensions, paired with the
published masses and spin rates.  They reproduce the scale and character
of the higher-order gravity terms, not the exact fields.
"""

from functools import lru_cache

from . import constants
from .gravity import harmonics_from_polyhedron
from .shapes import ellipsoid_shape

_BODIES = {
    "itokawa": (constants.ITOKAWA_MASS, constants.ITOKAWA_SPIN,
                constants.ITOKAWA_SEMI_AXES),
    "bennu": (constants.BENNU_MASS, constants.BENNU_SPIN,
              constants.BENNU_SEMI_AXES),
    "67p": (constants.COMET_67P_MASS, constants.COMET_67P_SPIN,
            constants.COMET_67P_SEMI_AXES),
}


def body_names():
    return tuple(sorted(_BODIES))


def body_mass(name):
    return _BODIES[_key(name)][0]


def body_spin(name):
    return _BODIES[_key(name)][1]


def _key(name):
    key = name.lower()
    if key not in _BODIES:
        raise ValueError("unknown body %r (have: %s)"
                         % (name, ", ".join(body_names())))
    return key


@lru_cache(maxsize=None)
def standin_shape(name, subdivisions=3):
    """Ellipsoid mesh for a bundled body (centered, principal axes)."""
    semi_axes = _BODIES[_key(name)][2]
    return ellipsoid_shape(semi_axes, subdivisions=subdivisions)


def standin_density(name, subdivisions=3):
    """Uniform density matching the published mass [kg/m^3]."""
    return body_mass(name) / standin_shape(name, subdivisions).signed_volume()


@lru_cache(maxsize=None)
def standin_harmonics(name, degree=5, subdivisions=3,
                      gravity_constant=constants.GRAVITATIONAL_CONSTANT):
    """Harmonics model of the stand-in shape at the published mass."""
    shape = standin_shape(name, subdivisions)
    return harmonics_from_polyhedron(shape, standin_density(name, subdivisions),
                                     degree, gravity_constant=gravity_constant)
