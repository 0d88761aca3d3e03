from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from src.core.errors import DomainError
from src.core.types import CATEGORIES, EventRow, ReportRow


@dataclass(frozen=True)
class EventRecord:
    time: float
    phase_from: str
    event: str
    phase_to: str
    energy: float
    actions: tuple[str, ...] = ()

    def to_row(self) -> EventRow:
        return EventRow(
            time_ms=self.time * 1e3,
            phase_from=self.phase_from,
            event=self.event,
            phase_to=self.phase_to,
            energy_mJ=self.energy * 1e3,
            actions=";".join(self.actions),
        )


@dataclass
class SimulationReport:
    policy: str
    mode: str
    trace: str
    power: Optional[float]
    seed: int
    wall_clock: float
    latency: Optional[float]
    truncated: bool
    instructions_completed: int
    total_instructions: int
    instructions_by_mode: dict[str, int]
    energy: dict[str, float]
    time: dict[str, float]
    checkpoint_count: int
    restore_count: int
    boot_count: int
    mode_switch_count: int
    hit_high: int
    hit_medium: int
    hit_low: int
    off_charging_time: float
    sleep_time: float
    cold_start_time: float
    initial_energy: float
    final_energy: float
    harvested: float
    overflow: float
    config_digest: str
    p_hat_trajectory: list[tuple[float, float]] = field(default_factory=list)
    events: list[EventRecord] = field(default_factory=list)

    @property
    def total_consumed(self) -> float:
        return sum(self.energy[c] for c in CATEGORIES)

    @property
    def charging_time(self) -> float:
        return self.off_charging_time + self.sleep_time

    @property
    def completed(self) -> bool:
        return self.latency is not None

    def ledger_error(self) -> float:
        """Relative imbalance of initial + harvested = consumed + final + overflow."""
        inflow = self.initial_energy + self.harvested
        outflow = self.total_consumed + self.final_energy + self.overflow
        scale = max(inflow, outflow, 1e-30)
        return abs(inflow - outflow) / scale

    def to_dict(self, include_events: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {
            "policy": self.policy,
            "mode": self.mode,
            "trace": self.trace,
            "power_mW": None if self.power is None else self.power * 1e3,
            "seed": self.seed,
            "truncated": self.truncated,
            "wall_clock_ms": self.wall_clock * 1e3,
            "latency_ms": None if self.latency is None else self.latency * 1e3,
            "instructions_completed": self.instructions_completed,
            "total_instructions": self.total_instructions,
            "instructions_by_mode": dict(self.instructions_by_mode),
            "throughput_ips": throughput_or_zero(self),
            "energy_mJ": {c: self.energy[c] * 1e3 for c in CATEGORIES},
            "time_ms": {c: self.time[c] * 1e3 for c in CATEGORIES},
            "total_energy_mJ": self.total_consumed * 1e3,
            "counts": {
                "checkpoint": self.checkpoint_count,
                "restore": self.restore_count,
                "boot": self.boot_count,
                "mode_switch": self.mode_switch_count,
                "hit_high": self.hit_high,
                "hit_medium": self.hit_medium,
                "hit_low": self.hit_low,
            },
            "charging_time_ms": self.charging_time * 1e3,
            "off_charging_time_ms": self.off_charging_time * 1e3,
            "sleep_time_ms": self.sleep_time * 1e3,
            "cold_start_time_ms": self.cold_start_time * 1e3,
            "ledger": {
                "initial_mJ": self.initial_energy * 1e3,
                "harvested_mJ": self.harvested * 1e3,
                "consumed_mJ": self.total_consumed * 1e3,
                "final_mJ": self.final_energy * 1e3,
                "overflow_mJ": self.overflow * 1e3,
            },
            "config_digest": self.config_digest,
            "p_hat_trajectory": [[t * 1e3, p * 1e3] for t, p in self.p_hat_trajectory],
        }
        if include_events:
            out["events"] = [dict(e.to_row()) for e in self.events]
        return out

    def to_row(self) -> ReportRow:
        e = self.energy
        return ReportRow(
            policy=self.policy,
            mode=self.mode,
            trace=self.trace,
            power_mW=float("nan") if self.power is None else self.power * 1e3,
            seed=self.seed,
            truncated=self.truncated,
            wall_clock_ms=self.wall_clock * 1e3,
            latency_ms=float("nan") if self.latency is None else self.latency * 1e3,
            instructions_completed=self.instructions_completed,
            throughput_ips=throughput_or_zero(self),
            total_energy_mJ=self.total_consumed * 1e3,
            compute_energy_mJ=e["compute"] * 1e3,
            checkpoint_energy_mJ=e["checkpoint"] * 1e3,
            restore_energy_mJ=e["restore"] * 1e3,
            boot_energy_mJ=e["boot"] * 1e3,
            sleep_energy_mJ=e["sleep"] * 1e3,
            adc_energy_mJ=e["adc"] * 1e3,
            msg_energy_mJ=e["msg"] * 1e3,
            reconfig_energy_mJ=e["reconfig"] * 1e3,
            overhead_energy_mJ=e["overhead"] * 1e3,
            off_drain_energy_mJ=e["off_drain"] * 1e3,
            charging_time_ms=self.charging_time * 1e3,
            off_charging_time_ms=self.off_charging_time * 1e3,
            sleep_time_ms=self.sleep_time * 1e3,
            cold_start_time_ms=self.cold_start_time * 1e3,
            checkpoint_count=self.checkpoint_count,
            restore_count=self.restore_count,
            boot_count=self.boot_count,
            mode_switch_count=self.mode_switch_count,
            hit_high=self.hit_high,
            hit_medium=self.hit_medium,
            hit_low=self.hit_low,
            harvested_mJ=self.harvested * 1e3,
            overflow_mJ=self.overflow * 1e3,
            config_digest=self.config_digest,
        )


REPORT_COLUMNS: tuple[str, ...] = tuple(ReportRow.__annotations__)


def compute_throughput(report: SimulationReport) -> float:
    """Instructions per second of wall clock, charging and sleep included."""
    if report.wall_clock <= 0:
        raise DomainError("throughput needs a positive wall clock")
    return report.instructions_completed / report.wall_clock


def throughput_or_zero(report: SimulationReport) -> float:
    if report.wall_clock <= 0:
        return 0.0
    return compute_throughput(report)
