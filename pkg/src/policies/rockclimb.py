"""Region baseline: a checkpoint at every region end, a region runs only if it fits."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from src.core.errors import SimulatorBug
from src.core.types import Mode
from src.energy.capacitor import ThresholdConfig
from src.policies.base import (
    Action,
    EnterBlock,
    Policy,
    PolicyContext,
    PowerOff,
    SetMode,
    Spend,
    Transition,
    Watch,
    boot_spend,
    fork_message,
    reprogram,
    sleep_transition,
)
from src.policies.checkpoint import RockClimbConfig, checkpoint_cost, restore_cost
from src.policies.phases import ROCKCLIMB_EDGES, Event, EventKind, RuntimePhase, illegal
from src.workload.program import block_cost

P = RuntimePhase
K = EventKind


@dataclass(frozen=True)
class RockClimbSetup:
    mode: Mode
    params: RockClimbConfig
    thresholds: Mapping[Mode, ThresholdConfig] = field(compare=False)


def region_checkpoint(
    mode: Mode, ctx: PolicyContext, params: RockClimbConfig
) -> tuple[float, float]:
    time, energy = checkpoint_cost(mode, ctx.checkpoint)
    return time * params.lightness, energy * params.lightness


def next_region_cost(mode: Mode, ctx: PolicyContext, params: RockClimbConfig) -> float:
    if ctx.block is None:
        return 0.0
    instructions = min(params.region_instructions, ctx.remaining_in_block)
    return block_cost(instructions, mode, ctx.block.cost, ctx.costs)[1]


def _gate(
    ctx: PolicyContext,
    setup: RockClimbSetup,
    mode: Mode,
    actions: list[Action],
) -> Transition:
    """Run the next region only if it and its checkpoint fit above V_L."""
    spent = sum(a.energy for a in actions if isinstance(a, Spend))
    usable = ctx.energy - spent - setup.thresholds[mode].e_low
    region = next_region_cost(mode, ctx, setup.params)
    needed = region + region_checkpoint(mode, ctx, setup.params)[1]
    if usable >= needed:
        return Transition(P.ACTIVE, tuple(actions))
    return Transition(P.LPMRM, (*actions, sleep_transition(ctx)))


def _continue(ctx: PolicyContext, setup: RockClimbSetup) -> Transition:
    actions = reprogram(ctx, setup.thresholds[ctx.mode])
    if ctx.at_block_start:
        # the block boundary that follows runs the check
        return Transition(P.ACTIVE, tuple(actions))
    return _gate(ctx, setup, ctx.mode, actions)


def _block_boundary(ctx: PolicyContext, setup: RockClimbSetup) -> Transition:
    if ctx.block is None:
        raise SimulatorBug("block boundary without a block at the cursor")
    target = setup.mode if ctx.block.parallelizable else Mode.SINGLE
    actions: list[Action] = []
    if target is not ctx.mode:
        actions.append(SetMode(target))
        actions += reprogram(ctx, setup.thresholds[target])
    if target is Mode.DUAL:
        actions.append(fork_message(ctx))
    actions.append(EnterBlock())
    return _gate(ctx, setup, target, actions)


def rockclimb_transition(
    phase: RuntimePhase, event: Event, ctx: PolicyContext, setup: RockClimbSetup
) -> Transition:
    kind = event.kind
    if phase is P.OFF_CHARGING and kind is K.HIT_HIGH:
        return Transition(P.BOOTING, (boot_spend(ctx),))
    if phase is P.BOOTING and kind is K.BOOT_DONE:
        if ctx.has_checkpoint:
            restore = Spend("restore", *restore_cost(ctx.mode, ctx.checkpoint))
            return Transition(P.RESTORING, (restore,))
        return Transition(P.ACTIVE, tuple(reprogram(ctx, setup.thresholds[ctx.mode])))
    if phase is P.RESTORING and kind is K.RESTORE_DONE:
        return _continue(ctx, setup)
    if phase is P.ACTIVE:
        if kind is K.REGION_BOUNDARY:
            # never skipped, whatever the stored energy
            spend = Spend("checkpoint", *region_checkpoint(ctx.mode, ctx, setup.params))
            return Transition(P.BACKING_UP, (spend,))
        if kind is K.BLOCK_BOUNDARY:
            return _block_boundary(ctx, setup)
        if kind is K.WORKLOAD_COMPLETE:
            return Transition(P.DONE)
    if phase is P.BACKING_UP and kind is K.BACKUP_DONE:
        return _continue(ctx, setup)
    if phase is P.LPMRM:
        if kind is K.HIT_HIGH:
            # memory retained: no restore
            return Transition(P.ACTIVE)
        if kind is K.HIT_LOW:
            # the last region checkpoint is the resume point
            return Transition(P.OFF_CHARGING, (PowerOff(),))
    raise illegal(phase, event, "rockclimb")


class RockClimbPolicy(Policy):
    name = "rockclimb"
    edges = ROCKCLIMB_EDGES

    def __init__(self, setup: RockClimbSetup) -> None:
        super().__init__("2c" if setup.mode is Mode.DUAL else "1c")
        self.setup = setup

    @property
    def region_instructions(self) -> int:
        return self.setup.params.region_instructions

    def initial_thresholds(self) -> ThresholdConfig:
        return self.setup.thresholds[Mode.SINGLE]

    def watches(self, phase: RuntimePhase, programmed: ThresholdConfig) -> tuple[Watch, ...]:
        if phase is P.LPMRM:
            return (
                Watch(K.HIT_HIGH, programmed.e_high, rising=True),
                Watch(K.HIT_LOW, programmed.e_low, rising=False),
            )
        if phase is P.OFF_CHARGING:
            return (Watch(K.HIT_HIGH, programmed.e_high, rising=True),)
        return ()

    def transition(self, phase: RuntimePhase, event: Event, ctx: PolicyContext) -> Transition:
        return rockclimb_transition(phase, event, ctx, self.setup)
