from __future__ import annotations

from .adamica import AdamicaPolicy, adamica_transition, history_mode
from .base import Action, Policy, PolicyContext, PolicyKind, Spend, Transition, Watch
from .checkpoint import (
    AdamicaConfig,
    CheckpointModel,
    RockClimbConfig,
    checkpoint_cost,
    configure_thresholds,
    jit_thresholds,
    restore_cost,
)
from .pearl import PearlConfig, PearlPolicy, pearl_transition
from .phases import Event, EventKind, RuntimePhase
from .registry import build_policy
from .rockclimb import RockClimbPolicy, rockclimb_transition

__all__ = [
    "Action",
    "AdamicaConfig",
    "AdamicaPolicy",
    "CheckpointModel",
    "Event",
    "EventKind",
    "PearlConfig",
    "PearlPolicy",
    "Policy",
    "PolicyContext",
    "PolicyKind",
    "RockClimbConfig",
    "RockClimbPolicy",
    "RuntimePhase",
    "Spend",
    "Transition",
    "Watch",
    "adamica_transition",
    "build_policy",
    "checkpoint_cost",
    "configure_thresholds",
    "history_mode",
    "jit_thresholds",
    "pearl_transition",
    "restore_cost",
    "rockclimb_transition",
]
