from __future__ import annotations

import argparse
import logging
import pathlib
import sys
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from src.cli.compare import compare_runs, load_runs
from src.cli.experiment import (
    ExperimentSpec,
    SweepPointError,
    expand,
    parse_list,
    parse_powers,
    parse_seeds,
    run_sweep,
)
from src.core.config import load_config, parse_override
from src.core.errors import (
    ConfigError,
    ContractViolation,
    DomainError,
    SimulationError,
    TraceParseError,
)
from src.core.storage import write_json, write_rows_csv
from src.core.types import EventRow
from src.engine import REPORT_COLUMNS, build_workload, run_simulation, throughput_or_zero
from src.observability import event_rows
from src.traces import constant_trace, daylight_preset, rf_obstacle_trace, save_trace
from src.workload import dump_workload

log = logging.getLogger("pearlsim")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

# ambient levels of the constant-power comparison grid
DEFAULT_POWERS_MW = (0.02, 0.5, 5.0, 10.0, 20.0, 25.0)

# user-fixable problems: bad files, bad values, infeasible physics
_USAGE_ERRORS = (ConfigError, FileNotFoundError, TraceParseError, DomainError, ContractViolation)


def _overrides(items: Sequence[str]) -> dict[str, Any]:
    return dict(parse_override(item) for item in items)


def cmd_simulate(args: argparse.Namespace) -> int:
    overrides = _overrides(args.set)
    if args.policy:
        overrides["policy.name"] = args.policy
    if args.mode:
        overrides["policy.mode"] = args.mode
    if args.power is not None:
        overrides["trace.kind"] = "constant"
        overrides["trace.power_mw"] = args.power
    if args.trace:
        overrides["trace.kind"] = "file"
        overrides["trace.path"] = str(args.trace)
    if args.seed is not None:
        overrides["workload.seed"] = args.seed
    config = load_config(args.config, overrides)
    log.debug("config digest %s", config.digest)
    workload = build_workload(config)
    if args.dump_workload:
        dump_workload(workload, args.dump_workload)
    report = run_simulation(
        config,
        workload=workload,
        record_events=bool(args.events) or None,
        events_log=args.events_log,
    )
    write_json(args.out, report.to_dict(include_events=config.record_events))
    if args.events:
        rows = event_rows(report.events)
        write_rows_csv(args.events, rows, list(EventRow.__annotations__))
    status = "truncated" if report.truncated else "complete"
    print(
        f"{config.policy.label} on {report.trace}: {status}, "
        f"wall clock {report.wall_clock:.3f} s, "
        f"{throughput_or_zero(report):.1f} instr/s -> {args.out}"
    )
    return EXIT_OK


def _spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    if args.manifest is not None:
        spec = ExperimentSpec.from_file(args.manifest)
        updates: dict[str, Any] = {}
        if args.jobs is not None:
            updates["jobs"] = args.jobs
        if args.out is not None:
            updates["out"] = str(args.out)
        return spec.model_copy(update=updates)
    fields: dict[str, Any] = {
        "config": str(args.config) if args.config else None,
        "policies": parse_list(args.policies),
        "modes": parse_list(args.modes),
        "seeds": parse_seeds(args.seeds),
        "overrides": _overrides(args.set),
        "jobs": args.jobs or 1,
        "out": str(args.out) if args.out else None,
    }
    if args.trace:
        fields["traces"] = list(args.trace)
    if args.powers is not None:
        fields["powers_mw"] = parse_powers(args.powers)
    elif not args.trace:
        fields["powers_mw"] = list(DEFAULT_POWERS_MW)
    try:
        return ExperimentSpec.model_validate(fields)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or None
        raise ConfigError(first["msg"], field=where) from exc


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    points = expand(spec)
    rows = run_sweep(points, jobs=spec.jobs)
    out = pathlib.Path(spec.out or "sweep.csv")
    write_rows_csv(out, rows, REPORT_COLUMNS)
    print(f"wrote {len(rows)} rows to {out}")
    return EXIT_OK


def cmd_gen_trace(args: argparse.Namespace) -> int:
    if args.kind == "constant":
        trace = constant_trace(args.power * 1e-3)
    elif args.kind == "daylight":
        trace = daylight_preset(
            args.variant,
            base_day_length=args.day_length,
            base_peak=args.peak * 1e-3,
            step=args.step,
        )
    else:
        trace = rf_obstacle_trace(
            args.base * 1e-3, args.attenuated * 1e-3, args.period, args.hold, args.total
        )
    out = args.out or pathlib.Path(f"{trace.name}.csv")
    save_trace(trace, out)
    print(f"wrote {len(trace.segments)} segments to {out}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    summary = compare_runs(load_runs(args.inputs), baseline=args.baseline)
    print(summary.to_string(index=False))
    if args.out:
        write_rows_csv(args.out, summary.to_dict(orient="records"), list(summary.columns))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pearlsim", description="Intermittent-computing runtime simulator"
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Run one simulation and write a JSON report")
    sim.add_argument("--config", type=pathlib.Path, help="YAML/JSON config merged over defaults")
    sim.add_argument("--policy", choices=["pearl", "adamica", "rockclimb"])
    sim.add_argument("--mode", choices=["1c", "2c", "adaptive"])
    sim.add_argument("--power", type=float, help="Constant ambient power in mW")
    sim.add_argument("--trace", type=pathlib.Path, help="Trace CSV (time_s,power_mW)")
    sim.add_argument("--seed", type=int, help="Workload seed")
    sim.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="Dotted config override, e.g. platform.p_lpm_mw=0.05")
    sim.add_argument("--out", type=pathlib.Path, default=pathlib.Path("report.json"))
    sim.add_argument("--events", type=pathlib.Path, help="Write the event log as CSV")
    sim.add_argument("--events-log", type=pathlib.Path, help="Append key=value event lines")
    sim.add_argument("--dump-workload", type=pathlib.Path, help="Write the block list as CSV")
    sim.set_defaults(func=cmd_simulate)

    sweep = sub.add_parser("sweep", help="Cartesian sweep written as one CSV")
    sweep.add_argument("--config", type=pathlib.Path)
    sweep.add_argument("--manifest", type=pathlib.Path, help="YAML/JSON experiment spec")
    sweep.add_argument("--powers", help="Comma-separated constant powers in mW")
    sweep.add_argument("--trace", action="append", default=[],
                       help="Trace CSV, daylight:<variant> or rf-obstacle (repeatable)")
    sweep.add_argument("--policies", default="pearl,adamica,rockclimb")
    sweep.add_argument("--modes", default="1c,2c")
    sweep.add_argument("--seeds", default="1", help="e.g. 1..100 or 1,3,5")
    sweep.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    sweep.add_argument("--jobs", type=int, help="Parallel worker processes")
    sweep.add_argument("--out", type=pathlib.Path, help="CSV path (default sweep.csv)")
    sweep.set_defaults(func=cmd_sweep)

    gen = sub.add_parser("gen-trace", help="Write a generated power trace")
    gen.add_argument("--kind", choices=["constant", "daylight", "rf-obstacle"], required=True)
    gen.add_argument("--power", type=float, default=5.0, help="mW (constant)")
    gen.add_argument("--variant", choices=["short", "middle", "long"], default="long")
    gen.add_argument("--day-length", type=float, default=30.0, help="Base day length in s")
    gen.add_argument("--peak", type=float, default=20.0, help="Base peak power in mW")
    gen.add_argument("--step", type=float, default=0.1, help="Segment width in s")
    gen.add_argument("--base", type=float, default=5.0, help="Unobstructed power in mW")
    gen.add_argument("--attenuated", type=float, default=0.5, help="Obstructed power in mW")
    gen.add_argument("--period", type=float, default=15.0, help="s")
    gen.add_argument("--hold", type=float, default=5.0, help="Obstacle duration in s")
    gen.add_argument("--total", type=float, default=60.0, help="s")
    gen.add_argument("--out", type=pathlib.Path)
    gen.set_defaults(func=cmd_gen_trace)

    cmp_ = sub.add_parser("compare", help="Ratio table over reports or a sweep CSV")
    cmp_.add_argument("inputs", nargs="+", type=pathlib.Path)
    cmp_.add_argument("--baseline", help="Label such as rockclimb-1c (default: first seen)")
    cmp_.add_argument("--out", type=pathlib.Path, help="Also write the table as CSV")
    cmp_.set_defaults(func=cmd_compare)
    return parser


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, SweepPointError):
        return _exit_code(exc.cause)
    if isinstance(exc, _USAGE_ERRORS):
        return EXIT_USAGE
    return EXIT_RUNTIME


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate" and args.trace and args.power is not None:
        parser.error("--trace and --power are mutually exclusive")
    if args.command == "sweep" and args.trace and args.powers is not None:
        parser.error("--trace and --powers are mutually exclusive")
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    try:
        return int(args.func(args))
    except (SimulationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
