from __future__ import annotations

from .generators import (
    DAYLIGHT_KINDS,
    constant_trace,
    daylight_preset,
    daylight_trace,
    rf_obstacle_trace,
)
from .io import load_trace, parse_trace, save_trace
from .model import PowerTrace

__all__ = [
    "DAYLIGHT_KINDS",
    "PowerTrace",
    "constant_trace",
    "daylight_preset",
    "daylight_trace",
    "load_trace",
    "parse_trace",
    "rf_obstacle_trace",
    "save_trace",
]
