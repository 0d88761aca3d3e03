from __future__ import annotations

from .capacitor import (
    NEVER,
    CapacitorSpec,
    CapacitorState,
    PlatformCosts,
    ThresholdConfig,
    advance_capacitor,
    energy_between,
    time_to_cross,
    time_to_reach_high,
    time_to_reach_low,
)

__all__ = [
    "NEVER",
    "CapacitorSpec",
    "CapacitorState",
    "PlatformCosts",
    "ThresholdConfig",
    "advance_capacitor",
    "energy_between",
    "time_to_cross",
    "time_to_reach_high",
    "time_to_reach_low",
]
