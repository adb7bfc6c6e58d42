import numpy as np
import pytest

from orbitkeeping import (Environment, SrpConfig, GravityField, ImpactError,
                          srp_accel, rotating_frame_terms,
                          higher_order_disturbance, eom_rhs, integrate_step,
                          propagate_period, onboard_propagate, StateVector,
                          OrbitGeometry, state_from_geometry, rotate_frame,
                          harmonics_from_polyhedron, cube_shape)
from orbitkeeping.constants import AU, GRAVITATIONAL_CONSTANT as G
from orbitkeeping import bodies

from conftest import BENNU_MU, kepler_propagate

ITOKAWA_MU = G * 3.51e10
BENNU_NU = 4.0684e-4


def point_env(mu=BENNU_MU, **kw):
    return Environment(GravityField.point_mass(mu), **kw)


def bennu_env(**kw):
    model = bodies.standin_harmonics("bennu", 5)
    return Environment(GravityField.from_harmonics(model), nu=BENNU_NU, **kw)


class TestSrp:
    def test_itokawa_magnitude(self):
        srp = SrpConfig(reflectivity=1.0, mass_to_area=20.0,
                        sun_distance=1.695 * AU)
        assert srp.magnitude == pytest.approx(1.5553e-7, rel=1e-3)

    def test_bennu_magnitude(self):
        srp = SrpConfig(reflectivity=1.0, mass_to_area=20.0,
                        sun_distance=0.8969 * AU)
        assert srp.magnitude == pytest.approx(5.5547e-7, rel=1e-3)

    def test_direction_body_frame(self):
        srp = SrpConfig(1.0, 20.0, AU)
        env = Environment(GravityField.point_mass(1.0), nu=1e-3, srp=srp,
                          frame="body")
        a0 = srp_accel(env, 0.0)
        assert np.allclose(a0 / np.linalg.norm(a0), [1.0, 0.0, 0.0])
        at = srp_accel(env, 500.0)
        assert np.linalg.norm(at) == pytest.approx(srp.magnitude)
        ang = env.nu * 500.0
        assert np.allclose(at / np.linalg.norm(at),
                           [np.cos(ang), -np.sin(ang), 0.0])

    def test_direction_inertial_constant(self):
        srp = SrpConfig(1.0, 20.0, AU)
        env = Environment(GravityField.point_mass(1.0), nu=1e-3, srp=srp,
                          frame="inertial")
        assert np.allclose(srp_accel(env, 0.0), srp_accel(env, 9999.0))
        assert srp_accel(env, 1.0)[0] > 0.0

    def test_none_is_zero(self):
        assert np.allclose(srp_accel(point_env(), 3.0), 0.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            SrpConfig(reflectivity=2.5, mass_to_area=20.0, sun_distance=AU)
        with pytest.raises(ValueError):
            SrpConfig(reflectivity=1.0, mass_to_area=0.0, sun_distance=AU)


class TestRotatingTerms:
    def test_static_point(self):
        st = StateVector([500.0, 0, 0], [0, 0, 0], frame="body")
        out = rotating_frame_terms(st, BENNU_NU)
        assert out[0] == pytest.approx(8.2759e-5, rel=1e-3)
        assert out[1] == 0.0 and out[2] == 0.0

    def test_zero_spin(self):
        st = StateVector([500.0, 100.0, 0], [0.1, -0.2, 0.3], frame="body")
        assert np.allclose(rotating_frame_terms(st, 0.0), 0.0)

    def test_pure_y_velocity_at_origin_offset(self):
        st = StateVector([1e-30, 0, 0], [0.0, 0.25, 0.0], frame="body")
        out = rotating_frame_terms(st, BENNU_NU)
        assert out[0] == pytest.approx(2.0 * BENNU_NU * 0.25, rel=1e-12)
        assert abs(out[1]) < 1e-12

    def test_frame_mismatch(self):
        st = StateVector([1, 0, 0], [0, 1, 0], frame="inertial")
        with pytest.raises(ValueError):
            rotating_frame_terms(st, BENNU_NU)


class TestHigherOrderDisturbance:
    def test_point_mass_is_zero(self):
        st = StateVector([450.0, 0, 0], [0, 0.1, 0])
        assert np.allclose(higher_order_disturbance(point_env(), st), 0.0)

    def test_far_field_small(self):
        env = bennu_env()
        r0 = env.gravity.harmonics.r0
        st = StateVector([50.0 * r0, 0, 0], [0, 0.01, 0])
        d = higher_order_disturbance(env, st)
        central = env.mu / (50.0 * r0) ** 2
        assert np.linalg.norm(d) < 1e-4 * central

    def test_bennu_450m_below_assumed_bound(self):
        env = bennu_env()
        st = StateVector([450.0, 0, 0], [0, 0.104, 0])
        d = higher_order_disturbance(env, st)
        assert 0.0 < np.linalg.norm(d) < 1e-2

    def test_interior_is_impact(self):
        env = bennu_env(impact_radius=266.0)
        st = StateVector([100.0, 0, 0], [0, 0.1, 0])
        with pytest.raises(ImpactError):
            higher_order_disturbance(env, st)


class TestEom:
    def test_unperturbed_circular(self):
        mu = BENNU_MU
        r = 450.0
        st = StateVector([r, 0, 0], [0, np.sqrt(mu / r), 0])
        deriv = eom_rhs(point_env(), st, np.zeros(3))
        assert np.allclose(deriv[:3], st.v)
        assert abs(deriv[3:] @ st.v) < 1e-18
        assert np.linalg.norm(deriv[3:]) == pytest.approx(mu / r ** 2,
                                                          rel=1e-12)

    def test_body_frame_terms_only(self):
        env = point_env(nu=BENNU_NU, frame="body")
        st = StateVector([400.0, 100.0, 50.0], [0.01, -0.02, 0.03],
                         frame="body")
        deriv = eom_rhs(env, st, np.zeros(3))
        r = np.linalg.norm(st.r)
        expect = (-env.mu * st.r / r ** 3
                  + rotating_frame_terms(st, BENNU_NU))
        assert np.allclose(deriv[3:], expect, rtol=1e-14)

    def test_control_added(self):
        st = StateVector([450.0, 0, 0], [0, 0.1, 0])
        u = np.array([1e-4, -2e-4, 3e-4])
        d0 = eom_rhs(point_env(), st, np.zeros(3))
        d1 = eom_rhs(point_env(), st, u)
        assert np.allclose(d1[3:] - d0[3:], u)

    def test_frame_mismatch_rejected(self):
        st = StateVector([450.0, 0, 0], [0, 0.1, 0], frame="body")
        with pytest.raises(ValueError):
            eom_rhs(point_env(frame="inertial"), st, np.zeros(3))

    def test_rk4_energy_drift_one_orbit(self):
        mu = ITOKAWA_MU
        geom = OrbitGeometry(350.0, 0.1, 1.0, 2.0, 3.0)
        st = state_from_geometry(geom, 0.0, mu)
        env = point_env(mu)
        period = 2.0 * np.pi * np.sqrt(350.0 ** 3 / mu)
        n = int(period / 4.0) + 1

        def energy(s):
            return 0.5 * s.v @ s.v - mu / np.linalg.norm(s.r)

        e0 = energy(st)
        out, event = propagate_period(env, st, np.zeros(3), n * 4.0, n)
        assert event is None
        assert abs((energy(out) - e0) / e0) < 1e-9


class TestIntegrateStep:
    def test_small_dt_matches_derivative(self):
        env = point_env()
        st = StateVector([450.0, 0, 0], [0, 0.1, 0])
        dt = 1e-6
        out = integrate_step(env, st, np.zeros(3), dt)
        deriv = eom_rhs(env, st, np.zeros(3))
        assert np.allclose((out.r - st.r) / dt, deriv[:3], rtol=1e-9)
        assert np.allclose((out.v - st.v) / dt, deriv[3:], rtol=1e-9)

    def test_richardson_order(self):
        # two half steps vs one full step differ at O(dt^5)
        env = bennu_env()
        st = StateVector([450.0, 30.0, 10.0], [0.01, 0.10, 0.02])
        errs = []
        for dt in (16.0, 8.0):
            full = integrate_step(env, st, np.zeros(3), dt)
            half = integrate_step(env, integrate_step(env, st, np.zeros(3),
                                                      dt / 2), np.zeros(3),
                                  dt / 2)
            errs.append(np.linalg.norm(full.r - half.r))
        order = np.log2(errs[0] / errs[1])
        assert 4.5 < order < 5.5

    def test_kernel_matches_numpy_eom(self):
        # the compiled propagation path must reproduce an RK4 step built
        # from the public eom_rhs to near machine precision
        srp = SrpConfig(1.0, 20.0, 0.8969 * AU)
        envs = [point_env(nu=BENNU_NU, srp=srp, frame="inertial"),
                point_env(nu=BENNU_NU, srp=srp, frame="body"),
                bennu_env(srp=srp, frame="inertial"),
                bennu_env(srp=srp, frame="body")]
        rng = np.random.default_rng(14)
        for env in envs:
            for _ in range(5):
                r = rng.uniform(350, 800, 3) * rng.choice([-1, 1], 3)
                v = rng.uniform(-0.1, 0.1, 3)
                t0 = rng.uniform(0.0, 5000.0)
                st = StateVector(r, v, t=t0, frame=env.frame)
                u = rng.uniform(-1e-4, 1e-4, 3)
                dt = 0.5
                got = integrate_step(env, st, u, dt)

                def rhs(x, t):
                    s = StateVector(x[:3], x[3:], t=t, frame=env.frame)
                    return eom_rhs(env, s, u, t)

                x = np.concatenate([st.r, st.v])
                k1 = rhs(x, t0)
                k2 = rhs(x + 0.5 * dt * k1, t0 + 0.5 * dt)
                k3 = rhs(x + 0.5 * dt * k2, t0 + 0.5 * dt)
                k4 = rhs(x + dt * k3, t0 + dt)
                ref = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
                assert np.allclose(got.r, ref[:3], rtol=1e-12, atol=1e-9)
                assert np.allclose(got.v, ref[3:], rtol=1e-12, atol=1e-13)

    def test_polyhedron_path(self):
        shape = cube_shape(400.0)
        rho = 1200.0
        env = Environment(GravityField.from_polyhedron(shape, rho))
        mu = env.mu
        st = StateVector([600.0, 0, 0], [0, np.sqrt(mu / 600.0), 0])
        out, event = propagate_period(env, st, np.zeros(3), 40.0, 10)
        assert event is None
        energy0 = 0.5 * st.v @ st.v - env.gravity.potential(st.r)
        energy1 = 0.5 * out.v @ out.v - env.gravity.potential(out.r)
        assert energy1 == pytest.approx(energy0, rel=1e-9)


class TestEvents:
    def test_impact_detected(self):
        env = point_env(impact_radius=300.0)
        st = StateVector([450.0, 0, 0], [-0.05, 0.0, 0.0])
        out, event = propagate_period(env, st, np.zeros(3), 20000.0, 2000)
        assert event == "impact"
        assert np.linalg.norm(out.r) <= 300.0 + 1.0

    def test_escape_detected(self):
        env = point_env()
        st = StateVector([450.0, 0, 0], [0.5, 0.0, 0.0])
        out, event = propagate_period(env, st, np.zeros(3), 5e5, 5000,
                                      escape_radius=5000.0)
        assert event == "escape"
        assert np.linalg.norm(out.r) >= 5000.0

    def test_polyhedron_interior_impact(self):
        shape = cube_shape(400.0)
        env = Environment(GravityField.from_polyhedron(shape, 1200.0))
        st = StateVector([450.0, 0, 0], [-0.2, 0.0, 0.0])
        out, event = propagate_period(env, st, np.zeros(3), 4000.0, 400)
        assert event == "impact"


class TestOnboardPropagate:
    def test_matches_kepler_oracle_one_orbit(self):
        mu = BENNU_MU
        geom = OrbitGeometry(450.0, 0.05, 0.8, 1.0, 0.5)
        st = state_from_geometry(geom, 0.3, mu)
        period = 2.0 * np.pi * np.sqrt(450.0 ** 3 / mu)
        cur = st
        steps = 2000
        dt = period / steps
        for _ in range(steps):
            cur = onboard_propagate(mu, cur, np.zeros(3), dt, substeps=1)
        ref = kepler_propagate(st, mu, period)
        rel = np.linalg.norm(cur.r - ref.r) / np.linalg.norm(ref.r)
        assert rel < 1e-6

    def test_matches_truth_in_point_mass_env(self):
        env = point_env()
        st = StateVector([450.0, 10.0, -5.0], [0.01, 0.10, 0.01])
        u = np.array([2e-5, -1e-5, 3e-5])
        truth, _ = propagate_period(env, st, u, 40.0, 80)
        est = onboard_propagate(env.mu, st, u, 40.0, substeps=80)
        assert np.allclose(est.r, truth.r, atol=1e-9)
        assert np.allclose(est.v, truth.v, atol=1e-12)

    def test_diverges_under_harmonics_truth(self):
        env = bennu_env()
        geom = OrbitGeometry(450.0, 0.0, np.radians(45), np.radians(320), 0.0)
        st = state_from_geometry(geom, 0.0, env.mu)
        truth = st
        est = st
        for _ in range(900):
            truth, _ = propagate_period(env, truth, np.zeros(3), 8.0, 16)
            est = onboard_propagate(env.mu, est, np.zeros(3), 8.0, 16)
        drift = np.linalg.norm(est.r - truth.r)
        assert drift > 0.1  # meters of navigation drift within two hours


class TestFrameEquivalence:
    def test_inertial_vs_body_simulation(self):
        # same physical scenario integrated in both frames agrees after
        # rotating the output back (point mass + SRP, one orbit)
        mu = ITOKAWA_MU
        nu = 1.4386e-4
        srp = SrpConfig(1.0, 20.0, 1.695 * AU)
        geom = OrbitGeometry(350.0, 0.1, np.radians(90), np.radians(90),
                             np.radians(90))
        st_i = state_from_geometry(geom, 0.3, mu, frame="inertial")
        env_i = point_env(mu, nu=nu, srp=srp, frame="inertial")
        env_b = point_env(mu, nu=nu, srp=srp, frame="body")
        st_b = rotate_frame(st_i, nu, "body")
        period = 2.0 * np.pi * np.sqrt(350.0 ** 3 / mu)
        n = int(period / 0.5) + 1
        out_i, _ = propagate_period(env_i, st_i, np.zeros(3), n * 0.5, n)
        out_b, _ = propagate_period(env_b, st_b, np.zeros(3), n * 0.5, n)
        back = rotate_frame(out_b, nu, "inertial")
        assert np.linalg.norm(back.r - out_i.r) < 1e-6
        assert np.linalg.norm(back.v - out_i.v) < 1e-9
