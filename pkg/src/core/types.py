from __future__ import annotations

from enum import Enum
from typing import Literal, TypedDict


class Mode(str, Enum):
    SINGLE = "1c"
    DUAL = "2c"

    @property
    def cores(self) -> int:
        return 1 if self is Mode.SINGLE else 2

    def higher(self) -> "Mode | None":
        return Mode.DUAL if self is Mode.SINGLE else None

    @classmethod
    def parse(cls, value: str) -> "Mode":
        try:
            return cls(value.strip().lower())
        except ValueError as exc:
            raise ValueError(f"unknown mode {value!r}; expected '1c' or '2c'") from exc


PolicyName = Literal["pearl", "adamica", "rockclimb"]
ModeSetting = Literal["1c", "2c", "adaptive"]

# consumption categories of the energy ledger, in report order
CATEGORIES: tuple[str, ...] = (
    "compute",
    "checkpoint",
    "restore",
    "boot",
    "sleep",
    "adc",
    "msg",
    "reconfig",
    "overhead",
    "off_drain",
)


class ReportRow(TypedDict):
    policy: str
    mode: str
    trace: str
    power_mW: float
    seed: int
    truncated: bool
    wall_clock_ms: float
    latency_ms: float
    instructions_completed: int
    throughput_ips: float
    total_energy_mJ: float
    compute_energy_mJ: float
    checkpoint_energy_mJ: float
    restore_energy_mJ: float
    boot_energy_mJ: float
    sleep_energy_mJ: float
    adc_energy_mJ: float
    msg_energy_mJ: float
    reconfig_energy_mJ: float
    overhead_energy_mJ: float
    off_drain_energy_mJ: float
    charging_time_ms: float
    off_charging_time_ms: float
    sleep_time_ms: float
    cold_start_time_ms: float
    checkpoint_count: int
    restore_count: int
    boot_count: int
    mode_switch_count: int
    hit_high: int
    hit_medium: int
    hit_low: int
    harvested_mJ: float
    overflow_mJ: float
    config_digest: str


class EventRow(TypedDict):
    time_ms: float
    phase_from: str
    event: str
    phase_to: str
    energy_mJ: float
    actions: str
