import pytest

from src.core.errors import ConfigError, SimulatorBug
from src.core.types import Mode
from src.energy.capacitor import ThresholdConfig
from src.policies import (
    AdamicaPolicy,
    Event,
    EventKind,
    PearlPolicy,
    RockClimbPolicy,
    RuntimePhase,
    Spend,
    build_policy,
    checkpoint_cost,
    configure_thresholds,
    history_mode,
    jit_thresholds,
    restore_cost,
)
from src.policies.base import (
    ArmTimer,
    EnterBlock,
    PolicyKind,
    PowerOff,
    RecordSample,
    SetMode,
    SetPredictor,
    SetThresholds,
)
from src.policies.checkpoint import CheckpointModel
from src.policies.phases import ADAMICA_EDGES, PEARL_EDGES, ROCKCLIMB_EDGES, check_edge
from src.predictor.power import PredictorState
from src.workload.program import Block
from tests.helpers import COST, MJ, MW, config_with, context

P = RuntimePhase
K = EventKind

PARALLEL = Block(0, True, 10_000, COST)
SERIAL = Block(1, False, 10_000, COST)


def _spends(transition, category):
    return [a for a in transition.actions if isinstance(a, Spend) and a.category == category]


def _of(transition, kind):
    return [a for a in transition.actions if isinstance(a, kind)]


# -- checkpoint model ------------------------------------------------------


def test_checkpoint_cost_examples():
    model = config_with().checkpoint
    assert checkpoint_cost(Mode.DUAL, model) == pytest.approx((96.35e-3, 0.82961 * MJ))
    assert checkpoint_cost(Mode.SINGLE, model) == pytest.approx((64.2333e-3, 0.5530733 * MJ))
    full = CheckpointModel(96.35e-3, 0.82961e-3, 96.35e-3, 0.82961e-3, single_core_fraction=1.0)
    assert checkpoint_cost(Mode.SINGLE, full) == checkpoint_cost(Mode.DUAL, full)
    assert restore_cost(Mode.SINGLE, model) == checkpoint_cost(Mode.SINGLE, model)


def test_single_core_thresholds_sit_below_dual_core():
    config = config_with()
    single, dual = config.thresholds[Mode.SINGLE], config.thresholds[Mode.DUAL]
    assert single.v_low < dual.v_low
    assert single.v_mid < dual.v_mid
    assert single.e_high == dual.e_high
    assert single.e_low == pytest.approx(1.723463 * MJ, abs=1e-9)
    assert single.e_ml == pytest.approx(dual.e_ml)
    assert dual.e_low >= checkpoint_cost(Mode.DUAL, config.checkpoint)[1]


def test_threshold_override_must_fund_the_checkpoint():
    config = config_with()
    low = ThresholdConfig.from_voltages(config.capacitor, 2.9, 1.5, 1.0)
    with pytest.raises(ConfigError) as err:
        configure_thresholds(
            Mode.DUAL, config.base_thresholds, config.checkpoint, config.capacitor, override=low
        )
    assert err.value.field == "thresholds.2c"


def test_jit_thresholds_pull_mid_down_to_guard():
    config = config_with()
    base = config.thresholds[Mode.SINGLE]
    jit = jit_thresholds(base, 1e-6, config.capacitor)
    assert jit.e_mid == pytest.approx(base.e_low + 1e-6)
    assert jit.e_high == base.e_high and jit.e_low == base.e_low
    with pytest.raises(ConfigError):
        jit_thresholds(base, base.e_ml, config.capacitor)


def test_rockclimb_cannot_be_adaptive():
    with pytest.raises(ConfigError):
        PolicyKind("rockclimb", "adaptive")
    with pytest.raises(ConfigError):
        config_with({"policy.name": "rockclimb", "policy.mode": "adaptive"})


def test_registry_builds_each_policy():
    assert isinstance(build_policy(config_with()), PearlPolicy)
    adamica = build_policy(config_with({"policy.name": "adamica"}))
    assert isinstance(adamica, AdamicaPolicy)
    assert adamica.region_instructions is None
    rock = build_policy(config_with({"policy.name": "rockclimb", "policy.mode": "2c"}))
    assert isinstance(rock, RockClimbPolicy)
    assert rock.region_instructions == 5000
    assert rock.kind.label == "rockclimb-2c"


def test_edge_sets_reject_unknown_transitions():
    check_edge(PEARL_EDGES, (P.LPMRM, K.HIT_LOW, P.BACKING_UP))
    with pytest.raises(SimulatorBug):
        check_edge(PEARL_EDGES, (P.ACTIVE, K.HIT_LOW, P.BACKING_UP))
    with pytest.raises(SimulatorBug):
        check_edge(ADAMICA_EDGES, (P.ACTIVE, K.HIT_MEDIUM, P.LPMRM))
    check_edge(ROCKCLIMB_EDGES, (P.ACTIVE, K.REGION_BOUNDARY, P.BACKING_UP))


# -- PEARL -----------------------------------------------------------------


def test_pearl_sleeps_at_mid_without_checkpoint():
    config = config_with()
    policy = build_policy(config)
    ctx = context(config, energy=config.thresholds[Mode.SINGLE].e_mid, now=0.3)
    out = policy.transition(P.ACTIVE, Event(K.HIT_MEDIUM, 0.3), ctx)
    assert out.phase is P.LPMRM
    assert not _spends(out, "checkpoint")
    assert len(_spends(out, "overhead")) == 1
    state = _of(out, SetPredictor)[0].state
    assert state.t_mid_hit == 0.3


def test_pearl_backs_up_at_low_with_single_core_cost():
    config = config_with()
    policy = build_policy(config)
    ctx = context(config, energy=config.thresholds[Mode.SINGLE].e_low)
    out = policy.transition(P.LPMRM, Event(K.HIT_LOW, 1.0), ctx)
    assert out.phase is P.BACKING_UP
    (ckpt,) = _spends(out, "checkpoint")
    assert ckpt.energy == pytest.approx(checkpoint_cost(Mode.SINGLE, config.checkpoint)[1])
    done = policy.transition(P.BACKING_UP, Event(K.BACKUP_DONE, 1.1), ctx)
    assert done.phase is P.OFF_CHARGING
    assert _of(done, PowerOff)


def test_pearl_switches_to_dual_core_when_prediction_is_high():
    config = config_with()
    policy = build_policy(config)
    ctx = context(config, block=PARALLEL, predictor=PredictorState(p_hat=15 * MW))
    out = policy.transition(P.ACTIVE, Event(K.BLOCK_BOUNDARY, 0.0), ctx)
    assert out.phase is P.ACTIVE
    assert _of(out, SetMode)[0].mode is Mode.DUAL
    assert _of(out, SetThresholds)[0].thresholds == config.thresholds[Mode.DUAL]
    assert len(_spends(out, "reconfig")) == 1
    assert len(_spends(out, "msg")) == 1
    assert isinstance(out.actions[-1], EnterBlock)


def test_pearl_stays_single_core_when_prediction_is_low():
    config = config_with()
    policy = build_policy(config)
    ctx = context(config, block=PARALLEL, predictor=PredictorState(p_hat=5 * MW))
    out = policy.transition(P.ACTIVE, Event(K.BLOCK_BOUNDARY, 0.0), ctx)
    assert not _of(out, SetMode)
    assert not _spends(out, "msg")
    assert len(_spends(out, "overhead")) == 1


def test_pearl_serial_block_forces_single_core():
    config = config_with()
    policy = build_policy(config)
    ctx = context(
        config,
        mode=Mode.DUAL,
        block=SERIAL,
        predictor=PredictorState(p_hat=30 * MW),
    )
    out = policy.transition(P.ACTIVE, Event(K.BLOCK_BOUNDARY, 0.0), ctx)
    assert _of(out, SetMode)[0].mode is Mode.SINGLE
    assert not _spends(out, "overhead")


def test_pearl_fixed_mode_skips_the_decision():
    config = config_with({"policy.mode": "2c"})
    policy = build_policy(config)
    ctx = context(config, block=PARALLEL, predictor=PredictorState(p_hat=0.0))
    out = policy.transition(P.ACTIVE, Event(K.BLOCK_BOUNDARY, 0.0), ctx)
    assert _of(out, SetMode)[0].mode is Mode.DUAL
    assert not _spends(out, "overhead")


def test_pearl_wake_updates_prediction():
    config = config_with()
    policy = build_policy(config)
    th = config.thresholds[Mode.SINGLE]
    before = PredictorState(p_hat=10 * MW, t_mid_hit=1.0, pending_estimate=4 * MW)
    charge = th.e_hm / (2 * MW)
    ctx = context(config, now=1.0 + charge, predictor=before)
    out = policy.transition(P.LPMRM, Event(K.HIT_HIGH, 1.0 + charge), ctx)
    assert out.phase is P.ACTIVE
    state = _of(out, SetPredictor)[-1].state
    assert state.p_hat == pytest.approx(0.8 * 10 * MW + 0.2 * 3 * MW)
    assert state.anchored
    assert _of(out, ArmTimer)[-1].deadline == pytest.approx(1.0 + charge + th.e_hm / (10 * MW))


def test_pearl_timer_bumps_toward_single_core_power():
    config = config_with()
    policy = build_policy(config)
    ctx = context(config, predictor=PredictorState(p_hat=5 * MW, timer_deadline=0.1))
    out = policy.transition(P.ACTIVE, Event(K.TIMER_EXPIRY, 0.1), ctx)
    assert out.phase is P.ACTIVE
    assert _of(out, SetPredictor)[0].state.p_hat == pytest.approx(6 * MW)
    assert _of(out, ArmTimer)[0].deadline == pytest.approx(
        0.1 + config.thresholds[Mode.SINGLE].e_hm / (10 * MW)
    )


def test_pearl_timer_leaves_single_core_power_alone():
    config = config_with()
    policy = build_policy(config)
    ctx = context(config, predictor=PredictorState(p_hat=10 * MW, timer_deadline=0.1))
    out = policy.transition(P.ACTIVE, Event(K.TIMER_EXPIRY, 0.1), ctx)
    assert _of(out, SetPredictor)[0].state.p_hat == 10 * MW


def test_pearl_boot_restores_only_after_a_checkpoint():
    config = config_with()
    policy = build_policy(config)
    cold = policy.transition(P.BOOTING, Event(K.BOOT_DONE, 0.0), context(config))
    assert cold.phase is P.ACTIVE
    warm = policy.transition(
        P.BOOTING, Event(K.BOOT_DONE, 0.0), context(config, has_checkpoint=True)
    )
    assert warm.phase is P.RESTORING
    (restore,) = _spends(warm, "restore")
    assert restore.energy == pytest.approx(restore_cost(Mode.SINGLE, config.checkpoint)[1])


def test_pearl_rejects_illegal_events():
    config = config_with()
    policy = build_policy(config)
    with pytest.raises(SimulatorBug):
        policy.transition(P.OFF_CHARGING, Event(K.HIT_MEDIUM, 0.0), context(config))
    with pytest.raises(SimulatorBug):
        policy.transition(P.ACTIVE, Event(K.HIT_LOW, 0.0), context(config))


def test_pearl_watches_per_phase():
    config = config_with()
    policy = build_policy(config)
    th = config.thresholds[Mode.SINGLE]
    assert [w.kind for w in policy.watches(P.ACTIVE, th)] == [K.HIT_MEDIUM]
    assert {w.kind for w in policy.watches(P.LPMRM, th)} == {K.HIT_HIGH, K.HIT_LOW}
    assert policy.watches(P.BOOTING, th) == ()


# -- AdaMICA ---------------------------------------------------------------


def test_adamica_backs_up_with_full_cost_in_single_core():
    config = config_with({"policy.name": "adamica", "policy.mode": "1c"})
    policy = build_policy(config)
    out = policy.transition(P.ACTIVE, Event(K.HIT_LOW, 1.0), context(config))
    assert out.phase is P.BACKING_UP
    (ckpt,) = _spends(out, "checkpoint")
    assert ckpt.energy == pytest.approx(0.82961 * MJ)
    done = policy.transition(P.BACKING_UP, Event(K.BACKUP_DONE, 1.1), context(config))
    assert done.phase is P.OFF_CHARGING


def test_adamica_samples_ambient_power():
    config = config_with({"policy.name": "adamica"})
    policy = build_policy(config)
    ctx = context(config, now=0.5, ambient=7 * MW)
    out = policy.transition(P.ACTIVE, Event(K.SAMPLE_TICK, 0.5), ctx)
    assert _of(out, RecordSample)[0].power == 7 * MW
    (adc,) = _spends(out, "adc")
    assert adc.energy == pytest.approx(0.69 * MW * 0.13e-3)
    assert _of(out, ArmTimer)[0].deadline == pytest.approx(0.51)


@pytest.mark.parametrize("samples, expected", [((25 * MW,) * 4, Mode.DUAL), ((5 * MW,), None)])
def test_adamica_block_mode_follows_history_mean(samples, expected):
    config = config_with({"policy.name": "adamica"})
    policy = build_policy(config)
    ctx = context(config, block=PARALLEL, samples=samples)
    out = policy.transition(P.ACTIVE, Event(K.BLOCK_BOUNDARY, 0.0), ctx)
    modes = [a.mode for a in _of(out, SetMode)]
    assert modes == ([] if expected is None else [expected])


def test_history_mode():
    assert history_mode((), 20 * MW) is Mode.SINGLE
    assert history_mode((10 * MW, 30 * MW), 20 * MW) is Mode.DUAL
    assert history_mode((10 * MW, 29 * MW), 20 * MW) is Mode.SINGLE


def test_adamica_has_no_sleep():
    config = config_with({"policy.name": "adamica"})
    policy = build_policy(config)
    with pytest.raises(SimulatorBug):
        policy.transition(P.ACTIVE, Event(K.HIT_MEDIUM, 0.0), context(config))
    watched = policy.watches(P.ACTIVE, config.base_thresholds)
    assert [w.level for w in watched] == [config.adamica.backup_threshold_energy]


# -- RockClimb -------------------------------------------------------------


def _rock(mode="1c"):
    config = config_with({"policy.name": "rockclimb", "policy.mode": mode})
    return config, build_policy(config)


def test_rockclimb_checkpoints_every_region_even_when_full():
    config, policy = _rock()
    ctx = context(config, energy=config.capacitor.e_max, block=PARALLEL, remaining_in_block=5000)
    out = policy.transition(P.ACTIVE, Event(K.REGION_BOUNDARY, 0.5), ctx)
    assert out.phase is P.BACKING_UP
    (ckpt,) = _spends(out, "checkpoint")
    assert ckpt.energy == pytest.approx(checkpoint_cost(Mode.SINGLE, config.checkpoint)[1])


def test_rockclimb_runs_next_region_only_if_it_fits():
    config, policy = _rock()
    th = config.thresholds[Mode.SINGLE]
    full = context(config, energy=th.e_high, block=PARALLEL, remaining_in_block=5000)
    assert policy.transition(P.BACKING_UP, Event(K.BACKUP_DONE, 0.0), full).phase is P.ACTIVE
    short = context(config, energy=th.e_low + 0.5 * MJ, block=PARALLEL, remaining_in_block=5000)
    out = policy.transition(P.BACKING_UP, Event(K.BACKUP_DONE, 0.0), short)
    assert out.phase is P.LPMRM
    assert len(_spends(out, "overhead")) == 1


def test_rockclimb_wakes_without_restore():
    config, policy = _rock()
    out = policy.transition(P.LPMRM, Event(K.HIT_HIGH, 3.0), context(config))
    assert out.phase is P.ACTIVE
    assert not out.actions
    off = policy.transition(P.LPMRM, Event(K.HIT_LOW, 3.0), context(config))
    assert off.phase is P.OFF_CHARGING
    assert not _spends(off, "checkpoint")


def test_rockclimb_dual_core_parallel_block():
    config, policy = _rock("2c")
    ctx = context(config, block=PARALLEL, remaining_in_block=10_000)
    out = policy.transition(P.ACTIVE, Event(K.BLOCK_BOUNDARY, 0.0), ctx)
    assert out.phase is P.ACTIVE
    assert _of(out, SetMode)[0].mode is Mode.DUAL
    assert len(_spends(out, "msg")) == 1
