"""Gravity models side by side: polyhedron, harmonics, point mass.

Builds the bundled Itokawa stand-in shape, derives a degree-5 harmonics
model from it, and compares the three field models along a radial ray and
around a circle at orbit altitude.  Also demonstrates the interior test
through the solid-angle sum.
"""

import os

import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

import orbitkeeping as ok
from orbitkeeping import bodies

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

shape = bodies.standin_shape("itokawa")
rho = bodies.standin_density("itokawa")
props = ok.mass_properties(shape, density=rho)
print("Itokawa stand-in: %d faces, volume %.3e m^3, mass %.3e kg"
      % (shape.n_faces, props.volume, props.mass))
print("principal moments [kg m^2]:", np.array2string(props.principal_moments,
                                                     precision=3))

model = bodies.standin_harmonics("itokawa", degree=5)
print("harmonics: mu=%.4f m^3/s^2, r0=%.1f m, C20=%.4f, C22=%.4f"
      % (model.mu, model.r0, model.c[2, 0], model.c[2, 2]))

# field comparison along the long axis
radii = np.linspace(1.05 * model.r0, 6.0 * model.r0, 120)
g_poly = []
g_harm = []
g_pm = []
for r in radii:
    p = np.array([r, 0.0, 0.0])
    g_poly.append(np.linalg.norm(ok.polyhedron_accel(shape, rho, p)[0]))
    g_harm.append(np.linalg.norm(ok.harmonics_accel(model, p)))
    g_pm.append(np.linalg.norm(ok.point_mass_accel(model.mu, p)))

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
ax1.loglog(radii, g_poly, label="polyhedron")
ax1.loglog(radii, g_harm, "--", label="harmonics N=5")
ax1.loglog(radii, g_pm, ":", label="point mass")
ax1.set_xlabel("distance along long axis [m]")
ax1.set_ylabel("|g| [m/s^2]")
ax1.legend()
ax1.set_title("field strength")

rel_h = np.abs(np.array(g_harm) / np.array(g_poly) - 1.0)
rel_p = np.abs(np.array(g_pm) / np.array(g_poly) - 1.0)
ax2.semilogy(radii / model.r0, rel_h, label="harmonics vs polyhedron")
ax2.semilogy(radii / model.r0, rel_p, label="point mass vs polyhedron")
ax2.set_xlabel("distance [circumscribing radii]")
ax2.set_ylabel("relative difference")
ax2.legend()
ax2.set_title("model agreement")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "gravity_models.png"), dpi=120)
print("wrote", os.path.join(OUT, "gravity_models.png"))

# interior detection via the solid-angle sum
for point in ([0.0, 0.0, 0.0], [0.0, 0.0, 90.0], [400.0, 0.0, 0.0]):
    omega = ok.polyhedron_laplacian(shape, point)
    print("solid angle at %-18s = %+9.5f sr  (interior: %s)"
          % (point, omega, ok.interior_point(shape, point)))
