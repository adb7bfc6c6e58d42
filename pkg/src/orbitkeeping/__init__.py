"""Robust sliding-mode path-following orbit keeping around small bodies.

A numpy library covering the full loop: shape models and mass properties,
polyhedron/harmonics gravity, orbital-element machinery, the sliding-mode
path-following control law with its practical actuation layers, a
closed-loop simulator with navigation noise, and scenario/Monte Carlo
harnesses with bundled presets.
"""

from .constants import AU, GRAVITATIONAL_CONSTANT, SRP_P0
from .shapes import (PolyhedronShape, MassProperties, MeshError,
                     NonTriangularFaceError, VertexIndexError,
                     WatertightnessError, DegenerateShapeError,
                     parse_shape, mass_properties, normalize_to_body_frame,
                     cube_shape, box_shape, icosphere_shape, ellipsoid_shape)
from .gravity import (GravityField, HarmonicsModel, SurfacePointError,
                      point_mass_accel, point_mass_potential,
                      polyhedron_accel, polyhedron_potential,
                      polyhedron_laplacian, interior_point,
                      harmonics_accel, harmonics_potential,
                      harmonics_from_polyhedron, load_coefficients,
                      dump_coefficients)
from .frames import (StateVector, RtnBasis, OrbitGeometry, rtn_basis, to_rtn,
                     from_rtn, hd_from_angles, angular_momentum,
                     h_from_elements, eccentricity_vector, geometry_from_state,
                     state_from_geometry, rotate_frame, element_errors,
                     periapsis_direction)
from .control import (ControllerConfig, TargetOrbit, SwitchState, PwpfConfig,
                      PwpfState, BetaGuardError, sliding_surface, gain_matrix,
                      control_matrices, control_accel_rtn, saturation,
                      clamp_thrust, hysteresis_step, pwpf_step,
                      upper_triangular_inverse, intermediate_hd,
                      sample_surface_over_elements)
from .dynamics import (Environment, SrpConfig, ImpactError, srp_accel,
                       rotating_frame_terms, higher_order_disturbance,
                       eom_rhs, integrate_step, propagate_period,
                       onboard_propagate)
from .simulate import (NoiseConfig, DeltaVLedger, Telemetry, TELEMETRY_COLUMNS,
                       ClosedLoopSetup, RunResult, TimeTrigger,
                       PeriapsisTrigger, ZSignRule, measure,
                       apply_thruster_error, run_closed_loop, substreams)
from .scenarios import (Scenario, BodyConfig, InitialState, SimSettings,
                        MonteCarloSpec, ScenarioError, build_setup,
                        run_scenario, preset, preset_names, sweep_baseline,
                        run_transfer_sequencer, run_hyperbolic_patcher,
                        run_monte_carlo, run_parametric_sweep,
                        apply_sweep_value, load_scenario,
                        load_scenario_or_preset, save_scenario,
                        scenario_to_dict, scenario_from_dict)
from . import bodies

__version__ = "0.1.0"
