"""Physical constants and small-body reference data.

All internal computation is SI (meters, seconds, kilograms, radians).
"""

# Gravitational constant [m^3/(kg s^2)]. Overridable per scenario.
GRAVITATIONAL_CONSTANT = 6.6743e-11

# Astronomical unit [m]
AU = 1.495978707e11

# Solar radiation pressure constant for the cannonball model,
# flux/c scaled by the square of 1 AU: P0 = (G_sun/c) * AU^2.
# [kg m^3 / (s^2 m^2)]; magnitude = (1+rho) * P0 / (B_sc * S^2) with S in m.
SRP_P0 = 1.0e17

# Reference masses [kg] and spin rates [rad/s]
ITOKAWA_MASS = 3.51e10
ITOKAWA_SPIN = 1.4386e-4
BENNU_MASS = 7.329e10
BENNU_SPIN = 4.0684e-4
COMET_67P_MASS = 9.982e12
COMET_67P_SPIN = 1.4070e-4

# Semi-axes of the bundled triaxial stand-in shapes [m].
# Itokawa follows the published overall dimensions (the elongated shape
# dominates its field).  Bennu is a near-spherical rubble pile whose
# measured oblateness is about half what a uniform ellipsoid at the
# published dimensions would give, so its stand-in uses rounder axes that
# land the quadrupole near the measured J2 (~0.015 at the long axis).
# 67P is shrunk toward the volume-equivalent scale of its largest lobe so
# that close orbits clear the surface.
ITOKAWA_SEMI_AXES = (267.5, 147.0, 104.5)
BENNU_SEMI_AXES = (266.0, 264.0, 255.0)
COMET_67P_SEMI_AXES = (1500.0, 1150.0, 1000.0)
