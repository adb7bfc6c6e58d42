import numpy as np
import pytest

from orbitkeeping import (GravityField, HarmonicsModel, SurfacePointError,
                          point_mass_accel, point_mass_potential,
                          polyhedron_accel, polyhedron_potential,
                          polyhedron_laplacian, interior_point,
                          harmonics_accel, harmonics_potential,
                          harmonics_from_polyhedron, load_coefficients,
                          dump_coefficients, cube_shape, icosphere_shape,
                          box_shape)
from orbitkeeping.constants import GRAVITATIONAL_CONSTANT as G

RHO = 1000.0


def shape_mu(shape, rho=RHO):
    return G * rho * shape.signed_volume()


class TestPointMass:
    def test_unit_cases(self):
        assert np.allclose(point_mass_accel(1.0, [1, 0, 0]), [-1, 0, 0])
        assert np.allclose(point_mass_accel(8.0, [0, 0, 2.0]), [0, 0, -2.0])

    def test_bennu_magnitude(self):
        mu = G * 7.329e10
        g = point_mass_accel(mu, [450.0, 0, 0])
        assert np.linalg.norm(g) == pytest.approx(mu / 450.0 ** 2, rel=1e-14)
        assert np.linalg.norm(g) == pytest.approx(2.416e-5, rel=1e-3)

    def test_zero_radius(self):
        with pytest.raises(ValueError):
            point_mass_accel(1.0, [0, 0, 0])
        with pytest.raises(ValueError):
            point_mass_potential(1.0, [0, 0, 0])


class TestPolyhedron:
    def test_far_field_matches_point_mass(self, cube2):
        mu = shape_mu(cube2)
        r = 100.0 * np.array([1.0, 0.3, -0.2])
        g_poly, interior = polyhedron_accel(cube2, RHO, r)
        assert not interior
        g_pm = point_mass_accel(mu, r)
        assert np.linalg.norm(g_poly - g_pm) / np.linalg.norm(g_pm) < 1e-6

    def test_icosphere_matches_point_mass(self, icosphere):
        mu = shape_mu(icosphere)
        rng = np.random.default_rng(3)
        for _ in range(10):
            d = rng.standard_normal(3)
            r = (1.2 + 2.0 * rng.random()) * d / np.linalg.norm(d)
            g_poly, _ = polyhedron_accel(icosphere, RHO, r)
            g_pm = point_mass_accel(mu, r)
            assert np.linalg.norm(g_poly - g_pm) / np.linalg.norm(g_pm) < 1e-3

    def test_interior_flag_and_solid_angle(self, cube2):
        g, interior = polyhedron_accel(cube2, RHO, np.array([0.0, 0.1, 0.2]))
        assert interior
        total = polyhedron_laplacian(cube2, [0.05, 0.1, 0.2])
        assert total == pytest.approx(-4.0 * np.pi, abs=1e-9)

    def test_laplacian_exterior(self, cube2):
        assert abs(polyhedron_laplacian(cube2, [10.0, 2.0, -3.0])) < 1e-9
        # just outside a face center
        assert abs(polyhedron_laplacian(cube2, [1.001, 0.0, 0.0])) < 1e-6

    def test_laplace_property_randomized(self, icosphere):
        rng = np.random.default_rng(11)
        n_in = n_out = 0
        while n_in < 100 or n_out < 100:
            p = rng.uniform(-2.0, 2.0, 3)
            r = np.linalg.norm(p)
            if r < 0.9 and n_in < 100:
                assert abs(polyhedron_laplacian(icosphere, p)
                           + 4.0 * np.pi) < 1e-8
                n_in += 1
            elif r > 1.1 and n_out < 100:
                assert abs(polyhedron_laplacian(icosphere, p)) < 1e-8
                n_out += 1

    def test_far_field_shipped_test_shapes(self, cube2, icosphere):
        # quadrupole-free test shapes converge to a point mass below 1e-4
        # at 50 radii
        rng = np.random.default_rng(5)
        for shape in (cube2, icosphere):
            mu = shape_mu(shape)
            radius = shape.circumscribing_radius()
            for _ in range(8):
                d = rng.standard_normal(3)
                r = 50.0 * radius * d / np.linalg.norm(d)
                g_poly, _ = polyhedron_accel(shape, RHO, r)
                g_pm = point_mass_accel(mu, r)
                rel = np.linalg.norm(g_poly - g_pm) / np.linalg.norm(g_pm)
                assert rel < 1e-4

    def test_far_field_box_residual_is_quadrupole(self, box211):
        # For an elongated shape the 50-radius residual is the physical
        # quadrupole, bounded by ~3 (|C20| + 2 C22) (r0/r)^2.
        mu = shape_mu(box211)
        model = harmonics_from_polyhedron(box211, RHO, 2)
        r0 = model.r0
        rng = np.random.default_rng(5)
        worst = 0.0
        for _ in range(16):
            d = rng.standard_normal(3)
            r = 50.0 * r0 * d / np.linalg.norm(d)
            g_poly, _ = polyhedron_accel(box211, RHO, r)
            g_pm = point_mass_accel(mu, r)
            worst = max(worst, np.linalg.norm(g_poly - g_pm)
                        / np.linalg.norm(g_pm))
        bound = 3.0 * (abs(model.c[2, 0]) + 2.0 * model.c[2, 2]) / 50.0 ** 2
        assert 0.3 * bound < worst <= 1.05 * bound

    def test_far_field_bundled_bodies(self):
        # asteroid stand-ins carry a real quadrupole; at 50 circumscribing
        # radii the residual is that physical term (< 5e-4), not mesh error
        from orbitkeeping import bodies
        rng = np.random.default_rng(5)
        for name in bodies.body_names():
            shape = bodies.standin_shape(name, subdivisions=2)
            rho = bodies.standin_density(name, subdivisions=2)
            mu = G * rho * shape.signed_volume()
            radius = shape.circumscribing_radius()
            for _ in range(5):
                d = rng.standard_normal(3)
                r = 50.0 * radius * d / np.linalg.norm(d)
                g_poly, _ = polyhedron_accel(shape, rho, r)
                g_pm = point_mass_accel(mu, r)
                rel = np.linalg.norm(g_poly - g_pm) / np.linalg.norm(g_pm)
                assert rel < 5e-4, name

    def test_singular_points_reported(self, cube2):
        with pytest.raises(SurfacePointError):
            polyhedron_accel(cube2, RHO, np.array([1.0, 1.0, 0.0]))  # edge
        with pytest.raises(SurfacePointError):
            polyhedron_accel(cube2, RHO, np.array([1.0, 0.2, 0.1]))  # face

    def test_gradient_consistency(self, cube2):
        rng = np.random.default_rng(7)
        for _ in range(5):
            d = rng.standard_normal(3)
            r = (2.0 + 2.0 * rng.random()) * d / np.linalg.norm(d)
            g, _ = polyhedron_accel(cube2, RHO, r)
            fd = np.zeros(3)
            for ax in range(3):
                dr = np.zeros(3)
                dr[ax] = 1e-3
                fd[ax] = (polyhedron_potential(cube2, RHO, r + dr)
                          - polyhedron_potential(cube2, RHO, r - dr)) / 2e-3
            assert np.linalg.norm(g - fd) / np.linalg.norm(g) < 1e-5

    def test_potential_far_field(self, cube2):
        mu = shape_mu(cube2)
        r = np.array([80.0, -20.0, 15.0])
        assert polyhedron_potential(cube2, RHO, r) == pytest.approx(
            point_mass_potential(mu, r), rel=1e-5)

    def test_interior_point_helper(self, cube2):
        assert interior_point(cube2, [0, 0, 0])
        assert not interior_point(cube2, [3, 0, 0])


class TestHarmonicsFromPolyhedron:
    def test_centered_cube_degree_one_vanishes(self, cube2):
        model = harmonics_from_polyhedron(cube2, RHO, 3)
        assert model.c[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert abs(model.c[1, 0]) < 1e-9
        assert abs(model.c[1, 1]) < 1e-9
        assert abs(model.s[1, 1]) < 1e-9

    def test_cube_symmetry_zeros(self, cube2):
        model = harmonics_from_polyhedron(cube2, RHO, 3)
        assert abs(model.c[2, 1]) < 1e-9
        assert abs(model.s[2, 1]) < 1e-9
        assert abs(model.s[2, 2]) < 1e-9

    def test_box_degree_two_against_grid_quadrature(self, box211):
        # Brute-force volume quadrature of the degree-2 coefficient
        # integrals on a 200^3 midpoint grid over the box.
        model = harmonics_from_polyhedron(box211, RHO, 2)
        r0 = model.r0
        n = 200
        xs = (np.arange(n) + 0.5) / n * 2.0 - 1.0          # semi-extent 1
        ys = (np.arange(n) + 0.5) / n * 1.0 - 0.5          # semi-extent 0.5
        zs = ys.copy()
        x2 = np.mean(xs ** 2)
        y2 = np.mean(ys ** 2)
        z2 = np.mean(zs ** 2)
        c20_grid = (z2 - 0.5 * (x2 + y2)) / r0 ** 2
        c22_grid = 0.25 * (x2 - y2) / r0 ** 2
        assert model.c[2, 0] < 0.0
        assert model.c[2, 2] > 0.0
        assert model.c[2, 0] == pytest.approx(c20_grid, rel=1e-3)
        assert model.c[2, 2] == pytest.approx(c22_grid, rel=1e-3)

    def test_degree_cap(self, cube2):
        with pytest.raises(ValueError):
            harmonics_from_polyhedron(cube2, RHO, 17)

    def test_reference_radius_default(self, cube2):
        model = harmonics_from_polyhedron(cube2, RHO, 2)
        assert model.r0 == pytest.approx(cube2.circumscribing_radius())


class TestHarmonicsField:
    def test_degree_zero_is_point_mass(self, cube2):
        model = harmonics_from_polyhedron(cube2, RHO, 5).truncated(0)
        rng = np.random.default_rng(1)
        for _ in range(10):
            r = rng.uniform(-10, 10, 3)
            if np.linalg.norm(r) < 2.0:
                continue
            assert np.allclose(harmonics_accel(model, r),
                               point_mass_accel(model.mu, r), rtol=1e-14,
                               atol=1e-20)

    def test_degree5_matches_polyhedron_at_3_radii(self, cube2):
        model = harmonics_from_polyhedron(cube2, RHO, 5)
        rng = np.random.default_rng(2)
        for _ in range(10):
            d = rng.standard_normal(3)
            r = 3.0 * model.r0 * d / np.linalg.norm(d)
            g_p, _ = polyhedron_accel(cube2, RHO, r)
            g_h = harmonics_accel(model, r)
            assert np.linalg.norm(g_p - g_h) / np.linalg.norm(g_p) < 1e-3

    def test_brillouin_sphere_agreement(self, box211):
        # degree 5 against the generating polyhedron on 2x the
        # circumscribing sphere
        model = harmonics_from_polyhedron(box211, RHO, 5)
        rng = np.random.default_rng(4)
        for _ in range(30):
            d = rng.standard_normal(3)
            r = 2.0 * model.r0 * d / np.linalg.norm(d)
            g_p, _ = polyhedron_accel(box211, RHO, r)
            g_h = harmonics_accel(model, r)
            assert np.linalg.norm(g_p - g_h) / np.linalg.norm(g_p) < 1e-2

    def test_gradient_consistency(self, box211):
        model = harmonics_from_polyhedron(box211, RHO, 5)
        rng = np.random.default_rng(6)
        for _ in range(5):
            d = rng.standard_normal(3)
            r = (1.5 + 2.0 * rng.random()) * model.r0 * d / np.linalg.norm(d)
            g = harmonics_accel(model, r)
            fd = np.zeros(3)
            for ax in range(3):
                dr = np.zeros(3)
                dr[ax] = 1e-3
                fd[ax] = (harmonics_potential(model, r + dr)
                          - harmonics_potential(model, r - dr)) / 2e-3
            assert np.linalg.norm(g - fd) / np.linalg.norm(g) < 1e-6

    def test_zero_radius(self, cube2):
        model = harmonics_from_polyhedron(cube2, RHO, 2)
        with pytest.raises(ValueError):
            harmonics_accel(model, [0, 0, 0])

    def test_model_validation(self):
        c = np.zeros((3, 3))
        c[0, 0] = 1.0
        s = np.zeros((3, 3))
        HarmonicsModel(1.0, 1.0, c, s)
        s_bad = s.copy()
        s_bad[1, 0] = 0.1
        with pytest.raises(ValueError):
            HarmonicsModel(1.0, 1.0, c, s_bad)
        with pytest.raises(ValueError):
            HarmonicsModel(1.0, -1.0, c, s)
        with pytest.raises(ValueError):
            HarmonicsModel(1.0, 1.0, np.zeros((18, 18)), np.zeros((18, 18)))


class TestCoefficientFiles:
    def test_round_trip(self, box211, tmp_path):
        model = harmonics_from_polyhedron(box211, RHO, 4)
        path = tmp_path / "model.txt"
        dump_coefficients(model, path)
        back = load_coefficients(path)
        assert back.mu == pytest.approx(model.mu, rel=1e-15)
        assert back.r0 == pytest.approx(model.r0, rel=1e-15)
        assert np.allclose(back.c, model.c, rtol=1e-15, atol=1e-300)
        assert np.allclose(back.s, model.s, rtol=1e-15, atol=1e-300)

    def test_normalized_conversion(self, tmp_path):
        # A normalized file must convert through N_nm =
        # sqrt((2 - delta_m0)(2n+1)(n-m)!/(n+m)!)
        path = tmp_path / "norm.txt"
        path.write_text("mu 1.0\nr0 1.0\n0 0 1 0\n2 0 0.5 0\n2 2 0.25 0.1\n")
        model = load_coefficients(path, normalized=True)
        n20 = np.sqrt(5.0)
        n22 = np.sqrt(2 * 5.0 / 24.0)
        assert model.c[2, 0] == pytest.approx(0.5 * n20)
        assert model.c[2, 2] == pytest.approx(0.25 * n22)
        assert model.s[2, 2] == pytest.approx(0.1 * n22)

    def test_missing_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0 0 1 0\n")
        with pytest.raises(ValueError):
            load_coefficients(path)


class TestGravityFieldVariants:
    def test_exactly_one_variant(self, cube2):
        with pytest.raises(ValueError):
            GravityField("mascon", 1.0)

    def test_gradient_check_all_variants(self, box211):
        # acceleration equals the central finite-difference gradient of
        # the matching potential for every variant
        model = harmonics_from_polyhedron(box211, RHO, 5)
        fields = [GravityField.point_mass(model.mu),
                  GravityField.from_polyhedron(box211, RHO),
                  GravityField.from_harmonics(model)]
        rng = np.random.default_rng(9)
        for field in fields:
            for _ in range(5):
                d = rng.standard_normal(3)
                r = (2.0 + 2.0 * rng.random()) * d / np.linalg.norm(d)
                g = field.acceleration(r)
                fd = np.zeros(3)
                for ax in range(3):
                    dr = np.zeros(3)
                    dr[ax] = 1e-3
                    fd[ax] = (field.potential(r + dr)
                              - field.potential(r - dr)) / 2e-3
                assert np.linalg.norm(g - fd) / np.linalg.norm(g) < 1e-5

    def test_polyhedron_field_mu(self, cube2):
        field = GravityField.from_polyhedron(cube2, RHO)
        assert field.mu == pytest.approx(shape_mu(cube2), rel=1e-12)
