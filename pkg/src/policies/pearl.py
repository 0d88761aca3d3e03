"""Three-threshold runtime: sleep with memory retention at V_M, back up at V_L."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from src.core.errors import SimulatorBug
from src.core.types import Mode, ModeSetting
from src.decision.scaling import DecisionInputs, select_mode
from src.energy.capacitor import CapacitorSpec, ThresholdConfig
from src.policies.base import (
    Action,
    ArmTimer,
    EnterBlock,
    Policy,
    PolicyContext,
    PowerOff,
    SetJitCollapse,
    SetMode,
    SetPredictor,
    Spend,
    Transition,
    Watch,
    block_target_mode,
    boot_spend,
    fork_message,
    reprogram,
    sleep_transition,
)
from src.policies.checkpoint import checkpoint_cost, jit_thresholds, restore_cost
from src.policies.phases import PEARL_EDGES, Event, EventKind, RuntimePhase, illegal
from src.predictor.power import (
    PredictorState,
    estimate_active_power,
    estimate_charging_power,
    estimate_off_charging_power,
    ewma_update,
    optimistic_bump,
    timer_period,
)

P = RuntimePhase
K = EventKind


@dataclass(frozen=True)
class PearlConfig:
    setting: ModeSetting
    thresholds: Mapping[Mode, ThresholdConfig] = field(compare=False)
    spec: CapacitorSpec
    jit_guard: float = 1e-6
    jit_collapse: bool = True

    @property
    def adaptive(self) -> bool:
        return self.setting == "adaptive"

    def programmed(self, mode: Mode, collapsed: bool) -> ThresholdConfig:
        base = self.thresholds[mode]
        if collapsed and self.jit_collapse:
            return jit_thresholds(base, self.jit_guard, self.spec)
        return base


def _predictor_spend(ctx: PolicyContext) -> Spend:
    costs = ctx.costs
    return Spend("overhead", costs.predictor_update_time, costs.predictor_update_energy)


def _arm(ctx: PolicyContext, cfg: PearlConfig, state: PredictorState, mode: Mode) -> list[Action]:
    """Restart the optimistic timer; it only runs below the most performant mode."""
    if not cfg.adaptive:
        return [ArmTimer(K.TIMER_EXPIRY, None)]
    if mode.higher() is None:
        return [SetPredictor(state), ArmTimer(K.TIMER_EXPIRY, None)]
    deadline = ctx.now + timer_period(mode, cfg.thresholds[mode].e_hm, ctx.costs)
    armed = replace(state, timer_deadline=deadline)
    return [SetPredictor(armed), ArmTimer(K.TIMER_EXPIRY, deadline)]


def _resume(ctx: PolicyContext, cfg: PearlConfig) -> Transition:
    # the discharge after boot/restore does not start at V_H
    state = replace(ctx.predictor, anchored=False, t_mid_hit=None, dt_1c=0.0, dt_2c=0.0)
    actions = reprogram(ctx, cfg.programmed(ctx.mode, ctx.jit_collapsed))
    actions += _arm(ctx, cfg, state, ctx.mode)
    return Transition(P.ACTIVE, tuple(actions))


def _observe_off_charge(ctx: PolicyContext, cfg: PearlConfig) -> list[Action]:
    if ctx.off_charge is None:
        return []
    gained, duration = ctx.off_charge
    if gained <= 0 or duration <= 0:
        return []
    est_off = estimate_off_charging_power(gained, duration)
    actions: list[Action] = []
    if cfg.jit_collapse:
        actions.append(SetJitCollapse(est_off <= ctx.costs.p_lpm))
    if cfg.adaptive and not ctx.cold_start:
        state = ctx.predictor
        est_1 = state.pending_estimate if state.pending_estimate is not None else est_off
        state = replace(ewma_update(state, est_1, est_off, ctx.predictor_cfg), pending_estimate=None)
        actions += [SetPredictor(state), _predictor_spend(ctx)]
    return actions


def _hit_medium(ctx: PolicyContext, cfg: PearlConfig) -> Transition:
    actions: list[Action] = [ArmTimer(K.TIMER_EXPIRY, None)]
    if cfg.adaptive:
        state = ctx.predictor
        est_1 = None
        if state.anchored and state.dt_1c + state.dt_2c > 0:
            est_1 = estimate_active_power(
                state.dt_1c,
                state.dt_2c,
                ctx.costs.p_active_1c,
                ctx.costs.p_active_2c,
                ctx.thresholds.e_hm,
            )
        state = replace(
            state,
            pending_estimate=est_1,
            t_mid_hit=ctx.now,
            anchored=False,
            dt_1c=0.0,
            dt_2c=0.0,
        )
        actions.append(SetPredictor(state))
    # no checkpoint: SRAM is retained in LPMRM
    actions.append(sleep_transition(ctx))
    return Transition(P.LPMRM, tuple(actions))


def _wake(ctx: PolicyContext, cfg: PearlConfig) -> Transition:
    actions: list[Action] = []
    state = ctx.predictor
    if cfg.adaptive and state.t_mid_hit is not None and ctx.now > state.t_mid_hit:
        est_2 = estimate_charging_power(ctx.now - state.t_mid_hit, ctx.thresholds.e_hm)
        est_1 = state.pending_estimate if state.pending_estimate is not None else est_2
        state = ewma_update(state, est_1, est_2, ctx.predictor_cfg)
        actions.append(_predictor_spend(ctx))
    state = replace(
        state, anchored=True, pending_estimate=None, t_mid_hit=None, dt_1c=0.0, dt_2c=0.0
    )
    if ctx.jit_collapsed:
        actions.append(SetJitCollapse(False))
    actions += reprogram(ctx, cfg.programmed(ctx.mode, False))
    actions += _arm(ctx, cfg, state, ctx.mode)
    return Transition(P.ACTIVE, tuple(actions))


def _block_boundary(ctx: PolicyContext, cfg: PearlConfig) -> Transition:
    if ctx.block is None:
        raise SimulatorBug("block boundary without a block at the cursor")
    actions: list[Action] = []
    target = block_target_mode(cfg.setting, ctx.block)
    if target is None:
        inputs = DecisionInputs(
            p_hat=ctx.predictor.p_hat,
            p_1c=ctx.costs.p_active_1c,
            p_2c=ctx.costs.p_active_2c,
            e_hm=ctx.thresholds.e_hm,
        )
        target = select_mode(inputs)
        actions.append(Spend("overhead", ctx.costs.decision_time, ctx.costs.decision_energy))
    if target is not ctx.mode:
        actions.append(SetMode(target))
        actions += reprogram(ctx, cfg.programmed(target, ctx.jit_collapsed))
        actions += _arm(ctx, cfg, ctx.predictor, target)
    if target is Mode.DUAL:
        actions.append(fork_message(ctx))
    actions.append(EnterBlock())
    return Transition(P.ACTIVE, tuple(actions))


def _timer_expiry(ctx: PolicyContext, cfg: PearlConfig) -> Transition:
    if ctx.mode.higher() is None:
        raise SimulatorBug("optimistic timer fired in the highest mode")
    state = optimistic_bump(
        ctx.predictor,
        ctx.mode,
        ctx.costs,
        ctx.predictor_cfg,
        e_hm=cfg.thresholds[ctx.mode].e_hm,
    )
    actions = (SetPredictor(state), ArmTimer(K.TIMER_EXPIRY, state.timer_deadline))
    return Transition(P.ACTIVE, actions)


def pearl_transition(
    phase: RuntimePhase, event: Event, ctx: PolicyContext, cfg: PearlConfig
) -> Transition:
    kind = event.kind
    if phase is P.OFF_CHARGING and kind is K.HIT_HIGH:
        return Transition(P.BOOTING, (*_observe_off_charge(ctx, cfg), boot_spend(ctx)))
    if phase is P.BOOTING and kind is K.BOOT_DONE:
        if ctx.has_checkpoint:
            restore = Spend("restore", *restore_cost(ctx.mode, ctx.checkpoint))
            return Transition(P.RESTORING, (restore,))
        return _resume(ctx, cfg)
    if phase is P.RESTORING and kind is K.RESTORE_DONE:
        return _resume(ctx, cfg)
    if phase is P.ACTIVE:
        if kind is K.HIT_MEDIUM:
            return _hit_medium(ctx, cfg)
        if kind is K.BLOCK_BOUNDARY:
            return _block_boundary(ctx, cfg)
        if kind is K.TIMER_EXPIRY and cfg.adaptive:
            return _timer_expiry(ctx, cfg)
        if kind is K.WORKLOAD_COMPLETE:
            return Transition(P.DONE, (ArmTimer(K.TIMER_EXPIRY, None),))
    if phase is P.LPMRM:
        if kind is K.HIT_HIGH:
            return _wake(ctx, cfg)
        if kind is K.HIT_LOW:
            actions: list[Action] = []
            if cfg.jit_collapse:
                # sleep could not outlast the drain: next time skip it
                actions.append(SetJitCollapse(True))
            actions.append(Spend("checkpoint", *checkpoint_cost(ctx.mode, ctx.checkpoint)))
            return Transition(P.BACKING_UP, tuple(actions))
    if phase is P.BACKING_UP and kind is K.BACKUP_DONE:
        return Transition(P.OFF_CHARGING, (PowerOff(),))
    raise illegal(phase, event, "pearl")


class PearlPolicy(Policy):
    name = "pearl"
    edges = PEARL_EDGES

    def __init__(self, cfg: PearlConfig) -> None:
        super().__init__(cfg.setting)
        self.cfg = cfg

    def initial_thresholds(self) -> ThresholdConfig:
        return self.cfg.thresholds[Mode.SINGLE]

    def watches(self, phase: RuntimePhase, programmed: ThresholdConfig) -> tuple[Watch, ...]:
        if phase is P.ACTIVE:
            return (Watch(K.HIT_MEDIUM, programmed.e_mid, rising=False),)
        if phase is P.LPMRM:
            return (
                Watch(K.HIT_HIGH, programmed.e_high, rising=True),
                Watch(K.HIT_LOW, programmed.e_low, rising=False),
            )
        if phase is P.OFF_CHARGING:
            return (Watch(K.HIT_HIGH, programmed.e_high, rising=True),)
        return ()

    def transition(self, phase: RuntimePhase, event: Event, ctx: PolicyContext) -> Transition:
        return pearl_transition(phase, event, ctx, self.cfg)
