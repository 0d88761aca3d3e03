import pytest

from tests.helpers import run

POWERS_MW = (0.02, 0.5, 5.0, 10.0, 20.0, 25.0)
FIXED = [(p, m) for p in ("pearl", "adamica", "rockclimb") for m in ("1c", "2c")]


def _at(policy, mode, power_mw, **extra):
    return run({"policy.name": policy, "policy.mode": mode, "trace.power_mw": power_mw, **extra})


def test_saturating_power_costs_nothing_beyond_compute():
    report = _at("pearl", "2c", 25.0)
    e = report.energy
    assert report.checkpoint_count == 0
    assert report.restore_count == 0
    assert report.off_charging_time == 0
    assert e["checkpoint"] == e["restore"] == e["sleep"] == e["off_drain"] == 0
    assert report.total_consumed == pytest.approx(
        e["compute"] + e["msg"] + e["boot"] + e["reconfig"] + e["overhead"], rel=1e-12
    )
    assert e["msg"] > 0


def test_very_low_power_pearl_behaves_like_jit_backup():
    # both runtimes back up the full SRAM
    extra = {"platform.single_core_backup_fraction": 1.0}
    pearl = run({"policy.mode": "1c", "trace.power_mw": 0.02, **extra})
    adamica = run({"policy.name": "adamica", "policy.mode": "1c", "trace.power_mw": 0.02, **extra})
    assert pearl.checkpoint_count == adamica.checkpoint_count
    assert pearl.total_consumed == pytest.approx(adamica.total_consumed, rel=0.01)


@pytest.mark.parametrize("mode, margin", [("1c", 1.20), ("2c", 1.35)])
def test_region_checkpointing_costs_more_at_low_power(mode, margin):
    pearl = _at("pearl", mode, 0.02)
    rockclimb = _at("rockclimb", mode, 0.02)
    assert rockclimb.total_consumed >= margin * pearl.total_consumed


@pytest.mark.parametrize("mode", ["1c", "2c"])
def test_region_checkpoint_energy_ignores_ambient_power(mode):
    reports = [_at("rockclimb", mode, p) for p in (0.5, 5.0, 10.0, 20.0, 25.0)]
    energies = {r.energy["checkpoint"] for r in reports}
    counts = {r.checkpoint_count for r in reports}
    assert len(energies) == 1 and len(counts) == 1
    # at least one region per 5000 instructions; block ends cut regions short
    assert counts.pop() >= 200


@pytest.mark.parametrize("policy, mode", FIXED)
def test_charging_time_falls_with_power(policy, mode):
    times = [_at(policy, mode, p).charging_time for p in POWERS_MW]
    assert all(later <= earlier for earlier, later in zip(times, times[1:]))
    assert times[0] > 0


def test_single_core_pearl_never_charges_at_or_above_its_draw():
    for power in (10.0, 20.0, 25.0):
        assert _at("pearl", "1c", power).charging_time == 0


@pytest.mark.parametrize("policy, mode", FIXED + [("pearl", "adaptive"), ("adamica", "adaptive")])
@pytest.mark.parametrize("power_mw", [0.02, 25.0])
def test_completed_runs_execute_every_instruction(policy, mode, power_mw):
    report = _at(policy, mode, power_mw)
    assert report.completed
    assert report.instructions_completed == report.total_instructions == 1_000_000
    assert report.ledger_error() <= 1e-9
