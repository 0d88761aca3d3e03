"""Ideal storage capacitor and threshold arithmetic.

All runtime logic works in the energy domain; voltages are converted once,
when a ``ThresholdConfig`` is built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from src.core.errors import ConfigError, DomainError
from src.core.types import Mode

# "never reaches" signal for the timing functions below
NEVER: float = math.inf


@dataclass(frozen=True)
class CapacitorSpec:
    capacitance: float
    v_max: float

    def __post_init__(self) -> None:
        if self.capacitance <= 0:
            raise ConfigError("capacitance must be positive", field="capacitor.capacitance_mf")
        if self.v_max <= 0:
            raise ConfigError("v_max must be positive", field="capacitor.v_max")

    @property
    def e_max(self) -> float:
        return 0.5 * self.capacitance * self.v_max**2

    def energy_at(self, voltage: float) -> float:
        return 0.5 * self.capacitance * voltage**2

    def voltage_at(self, energy: float) -> float:
        return math.sqrt(2.0 * max(energy, 0.0) / self.capacitance)


@dataclass(frozen=True)
class CapacitorState:
    energy: float


@dataclass(frozen=True)
class ThresholdConfig:
    v_high: float
    v_mid: float
    v_low: float
    e_high: float
    e_mid: float
    e_low: float

    @classmethod
    def from_voltages(
        cls, spec: CapacitorSpec, v_high: float, v_mid: float, v_low: float
    ) -> "ThresholdConfig":
        if not 0 <= v_low < v_mid < v_high:
            raise ConfigError(
                f"thresholds must satisfy v_low < v_mid < v_high, got "
                f"v_low={v_low} v_mid={v_mid} v_high={v_high}",
                field="thresholds",
            )
        return cls(
            v_high=v_high,
            v_mid=v_mid,
            v_low=v_low,
            e_high=spec.energy_at(v_high),
            e_mid=spec.energy_at(v_mid),
            e_low=spec.energy_at(v_low),
        )

    @classmethod
    def from_energies(
        cls, spec: CapacitorSpec, e_high: float, e_mid: float, e_low: float
    ) -> "ThresholdConfig":
        if not 0 <= e_low < e_mid < e_high:
            raise ConfigError(
                f"threshold energies must satisfy e_low < e_mid < e_high, got "
                f"e_low={e_low} e_mid={e_mid} e_high={e_high}",
                field="thresholds",
            )
        return cls(
            v_high=spec.voltage_at(e_high),
            v_mid=spec.voltage_at(e_mid),
            v_low=spec.voltage_at(e_low),
            e_high=e_high,
            e_mid=e_mid,
            e_low=e_low,
        )

    @property
    def e_hm(self) -> float:
        return self.e_high - self.e_mid

    @property
    def e_ml(self) -> float:
        return self.e_mid - self.e_low


@dataclass(frozen=True)
class PlatformCosts:
    p_active_1c: float
    p_active_2c: float
    p_lpm: float
    boot_time: float
    boot_energy: float
    checkpoint_time_2c: float
    checkpoint_energy_2c: float
    restore_time_2c: float
    restore_energy_2c: float
    single_core_backup_fraction: float
    core_msg_time: float
    core_msg_energy: float
    threshold_reconfig_time: float
    threshold_reconfig_energy: float
    sleep_transition_time: float = 14e-6
    sleep_transition_energy: float = 0.112e-9
    predictor_update_time: float = 3 * 0.31e-6
    predictor_update_energy: float = 3 * 3.112e-9
    decision_time: float = 0.34e-6
    decision_energy: float = 3.423e-9

    def __post_init__(self) -> None:
        if not 0 < self.p_lpm < self.p_active_1c < self.p_active_2c:
            raise ConfigError(
                "powers must satisfy 0 < p_lpm < p_active_1c < p_active_2c", field="platform"
            )
        if not 0 < self.single_core_backup_fraction <= 1:
            raise ConfigError(
                "must lie in (0, 1]", field="platform.single_core_backup_fraction"
            )
        for name in (
            "boot_time",
            "boot_energy",
            "checkpoint_time_2c",
            "checkpoint_energy_2c",
            "restore_time_2c",
            "restore_energy_2c",
            "core_msg_time",
            "core_msg_energy",
            "threshold_reconfig_time",
            "threshold_reconfig_energy",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError("must be positive", field=f"platform.{name}")

    def p_active(self, mode: Mode) -> float:
        return self.p_active_1c if mode is Mode.SINGLE else self.p_active_2c


def energy_between(spec: CapacitorSpec, v_hi: float, v_lo: float) -> float:
    if not v_hi >= v_lo >= 0:
        raise DomainError(f"energy_between needs v_hi >= v_lo >= 0, got {v_hi} and {v_lo}")
    return 0.5 * spec.capacitance * (v_hi**2 - v_lo**2)


def time_to_reach_high(e_hm: float, p_amb: float, p_lpm: float) -> float:
    if p_amb <= p_lpm:
        return NEVER
    return e_hm / (p_amb - p_lpm)


def time_to_reach_low(e_ml: float, p_amb: float, p_lpm: float) -> float:
    if p_amb >= p_lpm:
        return NEVER
    return e_ml / (p_lpm - p_amb)


def advance_capacitor(
    state: CapacitorState, net_power: float, duration: float, spec: CapacitorSpec
) -> tuple[CapacitorState, float]:
    """Integrate a constant net power; returns the new state and the discarded overflow."""
    if duration < 0:
        raise DomainError(f"duration must be non-negative, got {duration}")
    target = state.energy + net_power * duration
    e_max = spec.e_max
    if target > e_max:
        return CapacitorState(e_max), target - e_max
    return CapacitorState(max(target, 0.0)), 0.0


def time_to_cross(state: CapacitorState, net_power: float, target_energy: float) -> float:
    gap = target_energy - state.energy
    if gap == 0:
        return 0.0
    if net_power == 0 or (gap > 0) != (net_power > 0):
        return NEVER
    return gap / net_power
