"""Command-line interface.

Exit codes: 0 success, 2 usage, 3 validation (bad config/shape), 4 runtime.
Impact/escape ends a run normally (the event is recorded in the summary)
unless --fail-on-event is given.
"""

import argparse
import json
import os
import sys

import numpy as np

from .gravity import (GravityField, harmonics_accel, harmonics_from_polyhedron,
                      point_mass_accel, polyhedron_accel, polyhedron_laplacian,
                      polyhedron_potential, SurfacePointError)
from .shapes import MeshError, mass_properties, normalize_to_body_frame, parse_shape
from .scenarios import (ScenarioError, load_scenario_or_preset, preset_names,
                        run_monte_carlo, run_parametric_sweep, run_scenario,
                        scenario_to_dict)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="orbitkeeping",
        description="Sliding-mode path-following orbit keeping around "
                    "small bodies")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one closed-loop scenario")
    _scenario_args(sim)
    sim.add_argument("--record", choices=("full", "series"), default="full")
    sim.add_argument("--fail-on-event", action="store_true",
                     help="exit nonzero when the run ends in impact/escape")

    mc = sub.add_parser("montecarlo", help="run a dispersed-insertion batch")
    _scenario_args(mc)
    mc.add_argument("--samples", type=int, default=None,
                    help="override the scenario's sample count")
    mc.add_argument("--jobs", type=int, default=1)

    sweep = sub.add_parser("sweep", help="sweep one control parameter")
    _scenario_args(sweep)
    sweep.add_argument("--axis", required=True,
                       choices=("d", "lambda", "n_phi", "control_period"))
    sweep.add_argument("--values", required=True,
                       help="comma-separated parameter values")

    grav = sub.add_parser("gravity-check",
                          help="run the gravity property oracles on a shape")
    grav.add_argument("--shape", required=True,
                      help="shape file path or bundled name "
                           "(itokawa, bennu, 67p)")
    grav.add_argument("--format", choices=("obj", "pds"), default="obj")
    grav.add_argument("--scale", type=float, default=1.0)
    grav.add_argument("--density", type=float, default=1000.0,
                      help="uniform density [kg/m^3]")
    grav.add_argument("--degree", type=int, default=5)
    grav.add_argument("--seed", type=int, default=0)

    sub.add_parser("list-presets", help="print the bundled preset names")
    return parser


def _scenario_args(cmd):
    cmd.add_argument("--scenario", required=True,
                     help="preset name or scenario file path")
    cmd.add_argument("--seed", type=int, default=None)
    cmd.add_argument("--out", default=None, help="output directory")
    cmd.add_argument("--override", action="append", default=[],
                     metavar="PATH=VALUE",
                     help="override one config field (repeatable), e.g. "
                          "--override sim.duration_h=12")


def _ensure_out(path):
    if path is not None:
        os.makedirs(path, exist_ok=True)
    return path


def _cmd_simulate(args):
    scenario = load_scenario_or_preset(args.scenario, args.override)
    result = run_scenario(scenario, seed=args.seed, record=args.record)
    out = _ensure_out(args.out)
    if out is not None:
        if args.record == "full":
            result.telemetry.to_csv(os.path.join(out, "telemetry.csv"))
        with open(os.path.join(out, "summary.json"), "w") as fh:
            json.dump(result.summary, fh, indent=2)
    json.dump(result.summary, sys.stdout, indent=2)
    print()
    event = result.summary["terminal_event"]
    if event is not None and args.fail_on_event:
        print("terminal event: %s at t=%.1f s" % (event["type"], event["t"]),
              file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_montecarlo(args):
    scenario = load_scenario_or_preset(args.scenario, args.override)
    spec = scenario.monte_carlo
    if spec is None:
        raise ScenarioError("scenario %r has no monte_carlo section"
                            % scenario.name)
    if args.samples is not None:
        from dataclasses import replace
        spec = replace(spec, samples=args.samples)
    out = _ensure_out(args.out)
    csv_path = None if out is None else os.path.join(out, "samples.csv")
    batch = run_monte_carlo(scenario, spec, n_jobs=args.jobs,
                            csv_path=csv_path)
    if out is not None:
        with open(os.path.join(out, "aggregate.json"), "w") as fh:
            json.dump(batch["aggregate"], fh, indent=2)
    json.dump(batch["aggregate"], sys.stdout, indent=2)
    print()
    return EXIT_OK


def _cmd_sweep(args):
    scenario = load_scenario_or_preset(args.scenario, args.override)
    values = [float(v) for v in args.values.split(",") if v]
    if not values:
        raise ScenarioError("no sweep values given")
    results = run_parametric_sweep(scenario, args.axis, values,
                                   seed=args.seed)
    out = _ensure_out(args.out)
    summaries = []
    for entry in results:
        summaries.append({"value": entry["value"], "summary": entry["summary"]})
        if out is not None:
            name = "sweep_%s_%g.csv" % (args.axis, entry["value"])
            data = np.column_stack([entry["t"], entry["r_mag"]])
            np.savetxt(os.path.join(out, name), data, delimiter=",",
                       header="t,r_mag", comments="")
    if out is not None:
        with open(os.path.join(out, "sweep_summaries.json"), "w") as fh:
            json.dump(summaries, fh, indent=2)
    json.dump(summaries, sys.stdout, indent=2)
    print()
    return EXIT_OK


def _load_cli_shape(args):
    from . import bodies
    if args.shape.lower() in bodies.body_names():
        shape = bodies.standin_shape(args.shape.lower())
        density = bodies.standin_density(args.shape.lower())
        return shape, density
    with open(args.shape, "rb") as fh:
        shape = parse_shape(fh.read(), args.format, args.scale)
    return normalize_to_body_frame(shape, density=args.density), args.density


def _cmd_gravity_check(args):
    shape, density = _load_cli_shape(args)
    rng = np.random.default_rng(args.seed)
    radius = shape.circumscribing_radius()
    mu = density * shape.signed_volume() * 6.6743e-11
    failures = 0

    def check(label, ok, detail):
        nonlocal failures
        print("%s  %s (%s)" % ("PASS" if ok else "FAIL", label, detail))
        failures += 0 if ok else 1

    # far-field convergence to a point mass
    worst = 0.0
    for _ in range(20):
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        r = 50.0 * radius * direction
        g_poly, _ = polyhedron_accel(shape, density, r)
        g_pm = point_mass_accel(mu, r)
        worst = max(worst, np.linalg.norm(g_poly - g_pm) / np.linalg.norm(g_pm))
    check("far-field point-mass convergence at 50 radii", worst < 1e-4,
          "max relative %.2e" % worst)

    # Laplacian: 0 outside, -4 pi inside
    worst_out = 0.0
    for _ in range(100):
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        r = radius * (1.5 + 3.0 * rng.random()) * direction
        worst_out = max(worst_out, abs(polyhedron_laplacian(shape, r)))
    check("exterior solid angle ~ 0", worst_out < 1e-8,
          "max |sum| %.2e" % worst_out)
    worst_in = 0.0
    count = 0
    while count < 100:
        r = radius * 0.2 * rng.standard_normal(3)
        from .gravity import interior_point
        if not interior_point(shape, r):
            continue
        worst_in = max(worst_in,
                       abs(polyhedron_laplacian(shape, r) + 4.0 * np.pi))
        count += 1
    check("interior solid angle ~ -4 pi", worst_in < 1e-8,
          "max |sum + 4 pi| %.2e" % worst_in)

    # acceleration equals the potential gradient
    worst = 0.0
    for _ in range(10):
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        r = radius * (2.0 + 2.0 * rng.random()) * direction
        g, _ = polyhedron_accel(shape, density, r)
        step = 1e-3
        fd = np.zeros(3)
        for axis in range(3):
            dr = np.zeros(3)
            dr[axis] = step
            fd[axis] = (polyhedron_potential(shape, density, r + dr)
                        - polyhedron_potential(shape, density, r - dr)) / (2 * step)
        worst = max(worst, np.linalg.norm(g - fd) / np.linalg.norm(g))
    check("acceleration = potential gradient", worst < 1e-5,
          "max relative %.2e" % worst)

    # harmonics reproduce the polyhedron outside the Brillouin sphere
    model = harmonics_from_polyhedron(shape, density, args.degree)
    worst = 0.0
    for _ in range(30):
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        r = 2.0 * radius * direction
        g_poly, _ = polyhedron_accel(shape, density, r)
        g_h = harmonics_accel(model, r)
        worst = max(worst, np.linalg.norm(g_poly - g_h) / np.linalg.norm(g_poly))
    check("degree-%d harmonics at 2x circumscribing radius" % args.degree,
          worst < 1e-2, "max relative %.2e" % worst)

    return EXIT_OK if failures == 0 else EXIT_RUNTIME


def _cmd_list_presets(_args):
    for name in preset_names():
        print(name)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "montecarlo": _cmd_montecarlo,
        "sweep": _cmd_sweep,
        "gravity-check": _cmd_gravity_check,
        "list-presets": _cmd_list_presets,
    }
    try:
        return handlers[args.command](args)
    except (ScenarioError, MeshError, SurfacePointError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # runtime failure
        print("runtime error: %r" % exc, file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
