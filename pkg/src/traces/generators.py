from __future__ import annotations

from typing import Literal

import numpy as np

from src.core.errors import DomainError
from src.traces.model import PowerTrace

DaylightKind = Literal["short", "middle", "long"]

# (day_length scale, peak scale) relative to the base day
DAYLIGHT_KINDS: dict[str, tuple[float, float]] = {
    "short": (0.33, 0.8),
    "middle": (0.66, 1.0),
    "long": (1.0, 1.2),
}

BASE_DAY_LENGTH = 30.0
BASE_PEAK = 20e-3
DEFAULT_STEP = 0.1


def constant_trace(power: float) -> PowerTrace:
    if power < 0:
        raise DomainError(f"power must be non-negative, got {power}")
    return PowerTrace(segments=((0.0, float(power)),), name=f"constant_{power * 1e3:g}mW")


def daylight_trace(
    kind: DaylightKind,
    peak_power: float,
    day_length: float,
    step: float,
) -> PowerTrace:
    """Half-sine day sampled into ``step``-wide constant segments."""
    if day_length <= 0 or step <= 0:
        raise DomainError("day_length and step must be positive")
    if peak_power < 0:
        raise DomainError("peak_power must be non-negative")
    n = max(1, int(round(day_length / step)))
    starts = np.arange(n, dtype=float) * step
    powers = peak_power * np.sin(np.pi * starts / day_length)
    powers = np.clip(powers, 0.0, None)
    segments = tuple((float(t), float(p)) for t, p in zip(starts, powers))
    return PowerTrace(segments=segments, total_duration=n * step, name=f"daylight_{kind}")


def daylight_preset(
    kind: DaylightKind,
    base_day_length: float = BASE_DAY_LENGTH,
    base_peak: float = BASE_PEAK,
    step: float = DEFAULT_STEP,
) -> PowerTrace:
    if kind not in DAYLIGHT_KINDS:
        raise DomainError(f"unknown daylight kind {kind!r}")
    length_scale, peak_scale = DAYLIGHT_KINDS[kind]
    return daylight_trace(kind, base_peak * peak_scale, base_day_length * length_scale, step)


def rf_obstacle_trace(
    base_power: float,
    attenuated_power: float,
    period: float,
    obstacle_duration: float,
    total: float,
) -> PowerTrace:
    if not 0 < obstacle_duration < period:
        raise DomainError("obstacle_duration must lie in (0, period)")
    if not 0 <= attenuated_power <= base_power:
        raise DomainError("attenuated_power must lie in [0, base_power]")
    if total <= 0:
        raise DomainError("total must be positive")
    if attenuated_power == base_power:
        trace = constant_trace(base_power)
        return PowerTrace(trace.segments, total_duration=total, name="rf_obstacle")
    clear = period - obstacle_duration
    segments: list[tuple[float, float]] = []
    t = 0.0
    k = 0
    while t < total:
        segments.append((t, base_power))
        if t + clear < total:
            segments.append((t + clear, attenuated_power))
        k += 1
        t = k * period
    return PowerTrace(tuple(segments), total_duration=total, name="rf_obstacle")
