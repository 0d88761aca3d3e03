"""Two-threshold JIT baseline: full backup at one low threshold, input-power history for scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.core.errors import SimulatorBug
from src.core.types import Mode, ModeSetting
from src.energy.capacitor import ThresholdConfig
from src.policies.base import (
    Action,
    ArmTimer,
    EnterBlock,
    Policy,
    PolicyContext,
    PowerOff,
    RecordSample,
    SetMode,
    Spend,
    Transition,
    Watch,
    block_target_mode,
    boot_spend,
    fork_message,
)
from src.policies.checkpoint import AdamicaConfig, checkpoint_cost, restore_cost
from src.policies.phases import ADAMICA_EDGES, Event, EventKind, RuntimePhase, illegal

P = RuntimePhase
K = EventKind


@dataclass(frozen=True)
class AdamicaSetup:
    setting: ModeSetting
    params: AdamicaConfig
    thresholds: ThresholdConfig

    @property
    def adaptive(self) -> bool:
        return self.setting == "adaptive"


def history_mode(samples: tuple[float, ...], p_2c: float) -> Mode:
    """Dual core iff the mean of the sampled input power covers its draw."""
    if not samples:
        return Mode.SINGLE
    return Mode.DUAL if float(np.mean(samples)) >= p_2c else Mode.SINGLE


def _resume(ctx: PolicyContext, setup: AdamicaSetup) -> Transition:
    return Transition(P.ACTIVE, (ArmTimer(K.SAMPLE_TICK, ctx.now + setup.params.sample_period),))


def _block_boundary(ctx: PolicyContext, setup: AdamicaSetup) -> Transition:
    if ctx.block is None:
        raise SimulatorBug("block boundary without a block at the cursor")
    actions: list[Action] = []
    target = block_target_mode(setup.setting, ctx.block)
    if target is None:
        target = history_mode(ctx.samples, ctx.costs.p_active_2c)
        actions.append(Spend("overhead", ctx.costs.decision_time, ctx.costs.decision_energy))
    if target is not ctx.mode:
        actions.append(SetMode(target))
    if target is Mode.DUAL:
        actions.append(fork_message(ctx))
    actions.append(EnterBlock())
    return Transition(P.ACTIVE, tuple(actions))


def adamica_transition(
    phase: RuntimePhase, event: Event, ctx: PolicyContext, setup: AdamicaSetup
) -> Transition:
    kind = event.kind
    params = setup.params
    if phase is P.OFF_CHARGING and kind is K.HIT_HIGH:
        return Transition(P.BOOTING, (boot_spend(ctx),))
    if phase is P.BOOTING and kind is K.BOOT_DONE:
        if ctx.has_checkpoint:
            # the whole SRAM comes back regardless of mode
            return Transition(
                P.RESTORING, (Spend("restore", *restore_cost(Mode.DUAL, ctx.checkpoint)),)
            )
        return _resume(ctx, setup)
    if phase is P.RESTORING and kind is K.RESTORE_DONE:
        return _resume(ctx, setup)
    if phase is P.ACTIVE:
        if kind is K.SAMPLE_TICK:
            return Transition(
                P.ACTIVE,
                (
                    RecordSample(ctx.ambient_power),
                    Spend("adc", params.adc_sample_time, params.adc_sample_energy),
                    ArmTimer(K.SAMPLE_TICK, ctx.now + params.sample_period),
                ),
            )
        if kind is K.HIT_LOW:
            return Transition(
                P.BACKING_UP,
                (
                    ArmTimer(K.SAMPLE_TICK, None),
                    Spend("checkpoint", *checkpoint_cost(Mode.DUAL, ctx.checkpoint)),
                ),
            )
        if kind is K.BLOCK_BOUNDARY:
            return _block_boundary(ctx, setup)
        if kind is K.WORKLOAD_COMPLETE:
            return Transition(P.DONE, (ArmTimer(K.SAMPLE_TICK, None),))
    if phase is P.BACKING_UP and kind is K.BACKUP_DONE:
        return Transition(P.OFF_CHARGING, (PowerOff(),))
    raise illegal(phase, event, "adamica")


class AdamicaPolicy(Policy):
    name = "adamica"
    edges = ADAMICA_EDGES

    def __init__(self, setup: AdamicaSetup) -> None:
        super().__init__(setup.setting)
        self.setup = setup

    def initial_thresholds(self) -> ThresholdConfig:
        return self.setup.thresholds

    def watches(self, phase: RuntimePhase, programmed: ThresholdConfig) -> tuple[Watch, ...]:
        if phase is P.ACTIVE:
            return (Watch(K.HIT_LOW, self.setup.params.backup_threshold_energy, rising=False),)
        if phase is P.OFF_CHARGING:
            return (Watch(K.HIT_HIGH, programmed.e_high, rising=True),)
        return ()

    def transition(self, phase: RuntimePhase, event: Event, ctx: PolicyContext) -> Transition:
        return adamica_transition(phase, event, ctx, self.setup)
