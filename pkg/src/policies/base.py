"""Actions, the read-only context handed to a policy, and the policy interface.

A transition function never mutates anything: it looks at a
``PolicyContext`` snapshot and returns the next phase plus a list of
actions. The engine applies the actions in order.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar, NamedTuple, Optional, Union

from src.core.errors import ConfigError
from src.core.types import Mode, ModeSetting, PolicyName
from src.energy.capacitor import PlatformCosts, ThresholdConfig
from src.policies.checkpoint import CheckpointModel
from src.policies.phases import Edge, Event, EventKind, RuntimePhase
from src.predictor.power import PredictorConfig, PredictorState
from src.workload.program import Block


@dataclass(frozen=True)
class Spend:
    """Atomic action: ``time`` seconds drawing ``energy`` joules, booked to ``category``."""

    category: str
    time: float
    energy: float


@dataclass(frozen=True)
class SetMode:
    mode: Mode


@dataclass(frozen=True)
class SetThresholds:
    thresholds: ThresholdConfig


@dataclass(frozen=True)
class SetPredictor:
    state: PredictorState


@dataclass(frozen=True)
class SetJitCollapse:
    collapsed: bool


@dataclass(frozen=True)
class ArmTimer:
    kind: EventKind
    deadline: Optional[float]  # None disarms


@dataclass(frozen=True)
class RecordSample:
    power: float


@dataclass(frozen=True)
class EnterBlock:
    pass


@dataclass(frozen=True)
class PowerOff:
    pass


Action = Union[
    Spend,
    SetMode,
    SetThresholds,
    SetPredictor,
    SetJitCollapse,
    ArmTimer,
    RecordSample,
    EnterBlock,
    PowerOff,
]


@dataclass(frozen=True)
class Transition:
    phase: RuntimePhase
    actions: tuple[Action, ...] = ()


class Watch(NamedTuple):
    kind: EventKind
    level: float
    rising: bool


@dataclass(frozen=True)
class PolicyContext:
    now: float
    energy: float
    mode: Mode
    thresholds: ThresholdConfig
    ambient_power: float
    costs: PlatformCosts
    checkpoint: CheckpointModel
    predictor: PredictorState
    predictor_cfg: PredictorConfig
    block: Optional[Block] = None
    remaining_in_block: int = 0
    # cursor sits on a block not entered yet, or past the last block
    at_block_start: bool = False
    has_checkpoint: bool = False
    jit_collapsed: bool = False
    # (energy gained, seconds) of the off period that just ended
    off_charge: Optional[tuple[float, float]] = None
    cold_start: bool = False
    samples: tuple[float, ...] = ()


@dataclass(frozen=True)
class PolicyKind:
    name: PolicyName
    setting: ModeSetting

    def __post_init__(self) -> None:
        if self.name not in ("pearl", "adamica", "rockclimb"):
            raise ConfigError(f"unknown policy {self.name!r}", field="policy.name")
        if self.setting not in ("1c", "2c", "adaptive"):
            raise ConfigError(f"unknown mode setting {self.setting!r}", field="policy.mode")
        if self.name == "rockclimb" and self.setting == "adaptive":
            raise ConfigError("rockclimb runs in a fixed mode only", field="policy.mode")

    @property
    def adaptive(self) -> bool:
        return self.setting == "adaptive"

    @property
    def label(self) -> str:
        return f"{self.name}-{self.setting}"


class Policy(ABC):
    name: ClassVar[PolicyName]
    edges: ClassVar[frozenset[Edge]]

    def __init__(self, setting: ModeSetting) -> None:
        self.kind = PolicyKind(self.name, setting)

    @property
    def adaptive(self) -> bool:
        return self.kind.adaptive

    @property
    def region_instructions(self) -> Optional[int]:
        """Instructions per checkpointed region; None when blocks run unsplit."""
        return None

    @abstractmethod
    def initial_thresholds(self) -> ThresholdConfig: ...

    @abstractmethod
    def watches(self, phase: RuntimePhase, programmed: ThresholdConfig) -> tuple[Watch, ...]:
        """Energy levels the voltage monitor reports in ``phase``."""

    @abstractmethod
    def transition(self, phase: RuntimePhase, event: Event, ctx: PolicyContext) -> Transition: ...


def block_target_mode(setting: ModeSetting, block: Block) -> Optional[Mode]:
    """Mode a block runs in under a fixed setting; None when a decision is needed."""
    if not block.parallelizable:
        return Mode.SINGLE
    if setting == "adaptive":
        return None
    return Mode.parse(setting)


def reprogram(ctx: PolicyContext, target: ThresholdConfig) -> list[Action]:
    if target == ctx.thresholds:
        return []
    costs = ctx.costs
    return [
        SetThresholds(target),
        Spend("reconfig", costs.threshold_reconfig_time, costs.threshold_reconfig_energy),
    ]


def fork_message(ctx: PolicyContext) -> Spend:
    return Spend("msg", ctx.costs.core_msg_time, ctx.costs.core_msg_energy)


def boot_spend(ctx: PolicyContext) -> Spend:
    return Spend("boot", ctx.costs.boot_time, ctx.costs.boot_energy)


def sleep_transition(ctx: PolicyContext) -> Spend:
    costs = ctx.costs
    return Spend("overhead", costs.sleep_transition_time, costs.sleep_transition_energy)
