from __future__ import annotations

from .power import (
    PredictorConfig,
    PredictorState,
    estimate_active_power,
    estimate_charging_power,
    estimate_off_charging_power,
    ewma_update,
    optimistic_bump,
    timer_period,
)

__all__ = [
    "PredictorConfig",
    "PredictorState",
    "estimate_active_power",
    "estimate_charging_power",
    "estimate_off_charging_power",
    "ewma_update",
    "optimistic_bump",
    "timer_period",
]
