import json

import pandas as pd
import pytest

from src.cli.experiment import ExperimentSpec, SweepPointError, expand, parse_seeds
from src.cli.main import EXIT_RUNTIME, EXIT_USAGE, _exit_code, main
from src.core.errors import ConfigError, SimulatorBug
from src.engine import REPORT_COLUMNS

SMALL = ["--set", "workload.instructions=20000"]


def test_simulate_writes_a_json_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["simulate", "--power", "25", "--mode", "2c", *SMALL, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["policy"] == "pearl" and report["mode"] == "2c"
    assert report["instructions_completed"] == 20000
    assert report["counts"]["checkpoint"] == 0
    assert "events" not in report
    assert "complete" in capsys.readouterr().out


def test_simulate_event_outputs(tmp_path):
    events = tmp_path / "events.csv"
    log = tmp_path / "events.log"
    args = ["simulate", "--power", "5", *SMALL, "--out", str(tmp_path / "r.json"),
            "--events", str(events), "--events-log", str(log)]
    assert main(args) == 0
    frame = pd.read_csv(events)
    assert list(frame.columns) == ["time_ms", "phase_from", "event", "phase_to", "energy_mJ",
                                   "actions"]
    assert frame["event"].iloc[0] == "HitHigh"
    assert len(log.read_text().splitlines()) == len(frame)


def test_simulate_dumps_the_workload_it_ran(tmp_path):
    dump = tmp_path / "workload.csv"
    out = tmp_path / "r.json"
    args = ["simulate", "--power", "25", "--seed", "7", *SMALL, "--out", str(out),
            "--dump-workload", str(dump)]
    assert main(args) == 0
    frame = pd.read_csv(dump)
    assert list(frame.columns) == ["id", "parallelizable", "count"]
    assert list(frame["id"]) == list(range(len(frame)))
    assert set(frame["parallelizable"]) <= {0, 1}
    assert frame["count"].sum() == json.loads(out.read_text())["instructions_completed"] == 20000


def test_simulate_reads_a_trace_file(tmp_path):
    trace = tmp_path / "t.csv"
    trace.write_text("time_s,power_mW\n0,25\n")
    out = tmp_path / "r.json"
    assert main(["simulate", "--trace", str(trace), *SMALL, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["power_mW"] == pytest.approx(25.0)


def test_trace_and_power_are_exclusive(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["simulate", "--power", "5", "--trace", str(tmp_path / "t.csv")])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["sweep", "--powers", "5", "--trace", "daylight:long"])
    assert err.value.code == 2


@pytest.mark.parametrize(
    "args",
    [
        ["--set", "platform.p_lpm_mw=-1"],
        ["--set", "policy.mode"],
        ["--policy", "rockclimb", "--mode", "adaptive"],
        ["--trace", "missing.csv"],
        ["--config", "missing.yaml"],
    ],
)
def test_user_errors_exit_with_usage_code(tmp_path, capsys, args):
    assert main(["simulate", *args, "--out", str(tmp_path / "r.json")]) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("error:")


def test_malformed_trace_reports_its_line(tmp_path, capsys):
    trace = tmp_path / "bad.csv"
    trace.write_text("0,1\n1,x\n")
    assert main(["simulate", "--trace", str(trace), "--out", str(tmp_path / "r.json")]) == 2
    assert "line 2" in capsys.readouterr().err


def test_exit_codes():
    assert _exit_code(SimulatorBug("stuck")) == EXIT_RUNTIME
    assert _exit_code(ConfigError("bad", field="x")) == EXIT_USAGE
    assert _exit_code(SweepPointError("#0", ConfigError("bad"))) == EXIT_USAGE
    assert _exit_code(SweepPointError("#0", SimulatorBug("stuck"))) == EXIT_RUNTIME


def test_gen_trace(tmp_path):
    out = tmp_path / "rf.csv"
    assert main(["gen-trace", "--kind", "rf-obstacle", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "time_s,power_mW"
    assert len(lines) == 9
    day = tmp_path / "day.csv"
    assert main(["gen-trace", "--kind", "daylight", "--variant", "short", "--out", str(day)]) == 0
    assert len(day.read_text().splitlines()) == 100


def test_default_sweep_covers_policies_modes_and_powers(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", *SMALL, "--out", str(out)]) == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == list(REPORT_COLUMNS)
    assert len(frame) == 36
    assert list(frame["policy"].unique()) == ["pearl", "adamica", "rockclimb"]
    assert frame["power_mW"].tolist()[:6] == pytest.approx([0.02] * 6)


def test_sweep_skips_adaptive_rockclimb(tmp_path):
    out = tmp_path / "sweep.csv"
    args = ["sweep", "--powers", "25", "--policies", "rockclimb,pearl", "--modes", "adaptive,1c",
            "--seeds", "1..2", *SMALL, "--out", str(out)]
    assert main(args) == 0
    frame = pd.read_csv(out)
    labels = list(frame["policy"] + "-" + frame["mode"])
    assert labels == ["rockclimb-1c"] * 2 + ["pearl-adaptive"] * 2 + ["pearl-1c"] * 2
    assert frame["seed"].tolist() == [1, 2] * 3


def test_parallel_sweep_keeps_point_order(tmp_path):
    serial, parallel = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--powers", "5,25", "--policies", "pearl,adamica", *SMALL]
    assert main([*args, "--out", str(serial)]) == 0
    assert main([*args, "--jobs", "2", "--out", str(parallel)]) == 0
    pd.testing.assert_frame_equal(pd.read_csv(serial), pd.read_csv(parallel))


def test_sweep_manifest(tmp_path):
    manifest = tmp_path / "exp.yaml"
    manifest.write_text(
        "policies: [pearl]\n"
        "modes: [adaptive]\n"
        "traces: [daylight:short, rf-obstacle]\n"
        "seeds: [1, 2]\n"
        "overrides: {workload.instructions: 20000}\n"
    )
    out = tmp_path / "m.csv"
    assert main(["sweep", "--manifest", str(manifest), "--out", str(out)]) == 0
    frame = pd.read_csv(out)
    assert frame["trace"].tolist() == ["daylight_short"] * 2 + ["rf_obstacle"] * 2


def test_bad_manifest_is_a_usage_error(tmp_path):
    manifest = tmp_path / "exp.yaml"
    manifest.write_text("policies: [pearl]\npowers_mw: [5]\ntraces: [rf-obstacle]\n")
    assert main(["sweep", "--manifest", str(manifest)]) == EXIT_USAGE
    manifest.write_text("policies: [pearl]\npowers_mw: [5]\nrepeat: 3\n")
    assert main(["sweep", "--manifest", str(manifest)]) == EXIT_USAGE


def test_sweep_validates_every_point_before_running():
    spec = ExperimentSpec(
        policies=["rockclimb"],
        modes=["1c"],
        powers_mw=[5.0],
        overrides={"rockclimb.region_instructions": 50_000},
    )
    with pytest.raises(SweepPointError) as err:
        expand(spec)
    assert "rockclimb-1c" in str(err.value)
    assert isinstance(err.value.cause, ConfigError)
    with pytest.raises(ConfigError):
        expand(ExperimentSpec(policies=["rockclimb"], modes=["adaptive"], powers_mw=[5.0]))


def test_parse_seeds():
    assert parse_seeds("1,4..6") == [1, 4, 5, 6]
    assert parse_seeds("1..100")[-1] == 100
    for bad in ("5..3", "x", ""):
        with pytest.raises(ConfigError):
            parse_seeds(bad)


def test_compare_reports(tmp_path, capsys):
    paths = []
    for policy in ("rockclimb", "pearl"):
        path = tmp_path / f"{policy}.json"
        args = ["simulate", "--policy", policy, "--mode", "2c", "--power", "5", *SMALL,
                "--out", str(path)]
        assert main(args) == 0
        paths.append(str(path))
    capsys.readouterr()
    table = tmp_path / "cmp.csv"
    assert main(["compare", *paths, "--out", str(table)]) == 0
    assert "energy_ratio" in capsys.readouterr().out
    frame = pd.read_csv(table)
    assert frame["baseline"].tolist() == ["rockclimb-2c"] * 2
    assert frame["energy_ratio"].iloc[0] == pytest.approx(1.0)
    assert frame["energy_ratio"].iloc[1] < 1.0


def test_compare_sweep_csv_against_a_named_baseline(tmp_path, capsys):
    sweep = tmp_path / "sweep.csv"
    args = ["sweep", "--powers", "0.02", "--policies", "pearl,rockclimb", "--modes", "1c",
            *SMALL, "--out", str(sweep)]
    assert main(args) == 0
    capsys.readouterr()
    assert main(["compare", str(sweep), "--baseline", "pearl-1c"]) == 0
    out = capsys.readouterr().out
    assert "rockclimb-1c" in out and "pearl-1c" in out


def test_compare_needs_enough_inputs(tmp_path):
    single = tmp_path / "one.json"
    single.write_text("{}")
    assert main(["compare", str(single)]) == EXIT_USAGE
    assert main(["compare", str(tmp_path / "a.json"), str(tmp_path / "b.json")]) == EXIT_USAGE
