import numpy as np
import pytest

from orbitkeeping import cube_shape, icosphere_shape, box_shape
from orbitkeeping.constants import GRAVITATIONAL_CONSTANT

BENNU_MU = GRAVITATIONAL_CONSTANT * 7.329e10


@pytest.fixture(scope="session")
def cube():
    return cube_shape(1.0)


@pytest.fixture(scope="session")
def cube2():
    # side 2 m, handy for gravity tests (unit semi-extent)
    return cube_shape(2.0)


@pytest.fixture(scope="session")
def icosphere():
    return icosphere_shape(subdivisions=3, radius=1.0)


@pytest.fixture(scope="session")
def box211():
    # semi-extents (1, 0.5, 0.5): a 2 x 1 x 1 box
    return box_shape((1.0, 0.5, 0.5))


def kepler_propagate(state, mu, dt):
    """Independent analytic two-body propagation (elliptic Kepler solver).

    Oracle only: element-based, shares no code path with the RK4 routes.
    """
    from orbitkeeping.frames import geometry_from_state, state_from_geometry

    geom, alpha = geometry_from_state(state, mu)
    if geom.e >= 1.0:
        raise ValueError("oracle handles bound orbits only")
    ecc = geom.e
    ecan0 = np.arctan2(np.sqrt(1 - ecc ** 2) * np.sin(alpha),
                       ecc + np.cos(alpha))
    mean0 = ecan0 - ecc * np.sin(ecan0)
    n = np.sqrt(mu / geom.a ** 3)
    mean = mean0 + n * dt
    ecan = mean
    for _ in range(60):
        delta = (ecan - ecc * np.sin(ecan) - mean) / (1 - ecc * np.cos(ecan))
        ecan -= delta
        if abs(delta) < 1e-15:
            break
    alpha1 = 2.0 * np.arctan2(np.sqrt(1 + ecc) * np.sin(ecan / 2.0),
                              np.sqrt(1 - ecc) * np.cos(ecan / 2.0))
    out = state_from_geometry(geom, alpha1, mu, frame=state.frame,
                              t=state.t + dt)
    return out
