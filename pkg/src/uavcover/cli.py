"""Command-line front end.

Exit codes: 0 success / verdict ok, 1 violation or infeasible, 2 usage error,
3 I/O or scenario-file error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import milp, oracle, planner, plots, simulator, sweep
from .energy import EnergyError
from .scenario import ENERGY_UNITS, TIME_UNITS, ScenarioError, load_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _quantity(text: str, units: dict[str, Fraction], default_unit: str) -> Fraction:
    m = re.fullmatch(r"\s*([0-9./]+)\s*([A-Za-z]*)\s*", text)
    if not m:
        raise UsageError(f"cannot parse quantity {text!r}")
    unit = m.group(2) or default_unit
    if unit not in units:
        raise UsageError(f"unknown unit {unit!r} in {text!r}")
    try:
        return Fraction(m.group(1)) * units[unit]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse quantity {text!r}") from None


def parse_sweep_value(param: str, text: str):
    if param == "grid_size":
        m = re.fullmatch(r"(\d+)(?:x(\d+))?", text.strip())
        if not m or (m.group(2) and m.group(2) != m.group(1)):
            raise UsageError(f"grid sweep values must be square sizes like 4 or 4x4, got {text!r}")
        return int(m.group(1))
    if param == "battery_capacity":
        return _quantity(text, ENERGY_UNITS, "J")
    return _quantity(text, TIME_UNITS, "s")


def parse_horizon(text: str, s, plan) -> Fraction:
    m = re.fullmatch(r"\s*([0-9./]+)\s*laps?\s*", text)
    if m:
        return simulator.horizon_for_laps(s, plan, Fraction(m.group(1)))
    return _quantity(text, TIME_UNITS, "s")


def _scenario(args):
    path = getattr(args, "scenario_pos", None) or args.scenario
    if not path:
        raise UsageError("a scenario file is required (--scenario PATH)")
    return load_scenario(path)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_plan(args) -> int:
    s = _scenario(args)
    try:
        plan = planner.PLANNERS[args.method](s)
    except (planner.InfeasibleError, EnergyError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.out:
        planner.save_plan(plan, args.out)
    if args.svg:
        Path(args.svg).write_text(plots.plan_svg(s, plan))
    print(plan.summary())
    return EXIT_OK


def cmd_sweep(args) -> int:
    base = _scenario(args)
    methods = tuple(m.strip().lower() for m in args.methods.split(","))
    if args.values:
        values = tuple(parse_sweep_value(args.param, v) for v in args.values.split(","))
    else:
        values = sweep.default_values(args.param, base)
    try:
        spec = sweep.SweepSpec(args.param, values, base, methods)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = sweep.run_sweep(spec)
    _emit(sweep.to_json(result) if args.format == "json" else sweep.to_csv(result), args.out)
    if args.svg:
        Path(args.svg).write_text(plots.sweep_svg(result))
    return EXIT_OK


def cmd_simulate(args) -> int:
    s = _scenario(args)
    if args.plan:
        plan = planner.load_plan(args.plan)
    else:
        try:
            plan = planner.PLANNERS[args.method](s)
        except (planner.InfeasibleError, EnergyError) as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_FAIL
    horizon = parse_horizon(args.horizon, s, plan)
    sch = simulator.build_schedule(s, plan, horizon, strict=False)
    verdict = simulator.verify(s, sch)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        simulator.save_schedule(sch, out / "schedule.json")
        simulator.save_verdict(verdict, out / "verdict.json")
    for w in sch.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if verdict.ok:
        print(f"ok: {len(sch.uavs)} UAVs, horizon {horizon} s, no violations")
        return EXIT_OK
    ids = sorted(verdict.constraint_ids, key=simulator.CONSTRAINTS.index)
    print(f"violations: {len(verdict.violations)} ({', '.join(ids)})")
    for v in verdict.violations[:10]:
        print(f"  {v.constraint} at {v.time_s} s: {v.description}")
    return EXIT_FAIL


def cmd_oracle(args) -> int:
    s = _scenario(args)
    try:
        res = oracle.optimal_by_partition(s)
    except oracle.OracleRefused as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (planner.InfeasibleError, EnergyError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(json.dumps(res.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_export_milp(args) -> int:
    s = _scenario(args)
    try:
        model = milp.build_model(s, args.budget, args.slots)
    except milp.ModelTooLarge as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        milp.export_lp(model, args.out)
    else:
        sys.stdout.write(milp.lp_text(model))
    print(f"{len(model.variables)} variables, {len(model.rows)} rows", file=sys.stderr)
    return EXIT_OK


def _common(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--scenario", default=default, help="scenario JSON file")
    parser.add_argument("--out", default=default, help="output file (directory for simulate)")
    parser.add_argument("--format", choices=("csv", "json"), default=default)
    parser.add_argument("--svg", default=default, help="also write an SVG rendering here")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uavcover", description="Continuous UAV coverage planning")
    _common(p, None)
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, argparse.SUPPRESS)

    sp = sub.add_parser("plan", parents=[common], help="compute a coverage plan")
    sp.add_argument("scenario_pos", nargs="?", metavar="SCENARIO")
    sp.add_argument("--method", choices=sorted(planner.PLANNERS), default="cle")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("sweep", parents=[common], help="sweep one parameter")
    sp.add_argument("scenario_pos", nargs="?", metavar="SCENARIO")
    sp.add_argument("--param", choices=sweep.PARAMS, required=True)
    sp.add_argument("--values", help="comma separated, e.g. 0.88kWh,1.76kWh or 5min,10min or 2,3,4")
    sp.add_argument("--methods", default="cle,sm", help="subset of cle,sm,oracle")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("simulate", parents=[common], help="build and verify a rotation schedule")
    sp.add_argument("scenario_pos", nargs="?", metavar="SCENARIO")
    sp.add_argument("--plan", help="plan JSON (default: plan the scenario with --method)")
    sp.add_argument("--method", choices=sorted(planner.PLANNERS), default="cle")
    sp.add_argument("--horizon", default="4laps", help="seconds, 90min, or 4laps")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("oracle", parents=[common], help="exact optimum on small instances")
    sp.add_argument("scenario_pos", nargs="?", metavar="SCENARIO")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("export-milp", parents=[common], help="write the time-expanded MILP in LP format")
    sp.add_argument("scenario_pos", nargs="?", metavar="SCENARIO")
    sp.add_argument("--budget", type=int, required=True, help="UAV budget M")
    sp.add_argument("--slots", type=int, required=True, help="horizon in slots")
    sp.set_defaults(func=cmd_export_milp)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ScenarioError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
