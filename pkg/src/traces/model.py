from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Optional

from src.core.errors import DomainError


@dataclass(frozen=True)
class PowerTrace:
    """Piecewise-constant ambient power; the last segment holds forever."""

    segments: tuple[tuple[float, float], ...]
    total_duration: Optional[float] = field(default=None, compare=False)
    name: str = field(default="trace", compare=False)
    _starts: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.segments:
            raise DomainError("a trace needs at least one segment")
        starts = tuple(s for s, _ in self.segments)
        if starts[0] != 0.0:
            raise DomainError(f"trace must start at t=0, got {starts[0]}")
        for prev, cur in zip(starts, starts[1:]):
            if cur <= prev:
                raise DomainError(f"segment start times must increase: {prev} then {cur}")
        for start, power in self.segments:
            if power < 0 or math.isnan(power):
                raise DomainError(f"negative power {power} at t={start}")
        object.__setattr__(self, "_starts", starts)

    def index_at(self, t: float) -> int:
        return max(0, bisect.bisect_right(self._starts, t) - 1)

    def power_at(self, t: float) -> float:
        return self.segments[self.index_at(t)][1]

    def segment_end(self, t: float) -> float:
        """Start of the segment after the one covering ``t``; inf for the last."""
        idx = self.index_at(t)
        if idx + 1 < len(self._starts):
            return self._starts[idx + 1]
        return math.inf

    def energy_between(self, t0: float, t1: float) -> float:
        if t1 < t0:
            raise DomainError("energy_between needs t0 <= t1")
        total = 0.0
        t = t0
        while t < t1:
            end = min(self.segment_end(t), t1)
            total += self.power_at(t) * (end - t)
            t = end
        return total

    @property
    def peak(self) -> float:
        return max(p for _, p in self.segments)
