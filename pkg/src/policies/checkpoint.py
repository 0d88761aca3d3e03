"""Backup cost model and per-mode voltage-monitor settings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from src.core.errors import ConfigError
from src.core.types import Mode
from src.energy.capacitor import CapacitorSpec, PlatformCosts, ThresholdConfig


@dataclass(frozen=True)
class CheckpointModel:
    """Dual-core figures are the full-SRAM cost; single core backs up a fraction."""

    time_2c: float
    energy_2c: float
    restore_time_2c: float
    restore_energy_2c: float
    single_core_fraction: float = 2 / 3

    def __post_init__(self) -> None:
        for name in ("time_2c", "energy_2c", "restore_time_2c", "restore_energy_2c"):
            if getattr(self, name) <= 0:
                raise ConfigError("must be positive", field=f"checkpoint.{name}")
        if not 0 < self.single_core_fraction <= 1:
            raise ConfigError("must lie in (0, 1]", field="checkpoint.single_core_fraction")

    @classmethod
    def from_platform(cls, costs: PlatformCosts) -> "CheckpointModel":
        return cls(
            time_2c=costs.checkpoint_time_2c,
            energy_2c=costs.checkpoint_energy_2c,
            restore_time_2c=costs.restore_time_2c,
            restore_energy_2c=costs.restore_energy_2c,
            single_core_fraction=costs.single_core_backup_fraction,
        )

    def _scale(self, mode: Mode) -> float:
        return 1.0 if mode is Mode.DUAL else self.single_core_fraction


def checkpoint_cost(mode: Mode, model: CheckpointModel) -> tuple[float, float]:
    scale = model._scale(mode)
    return model.time_2c * scale, model.energy_2c * scale


def restore_cost(mode: Mode, model: CheckpointModel) -> tuple[float, float]:
    scale = model._scale(mode)
    return model.restore_time_2c * scale, model.restore_energy_2c * scale


def configure_thresholds(
    mode: Mode,
    base: ThresholdConfig,
    model: CheckpointModel,
    spec: CapacitorSpec,
    *,
    override: Optional[ThresholdConfig] = None,
    sleep_transition_energy: float = 0.0,
) -> ThresholdConfig:
    """Threshold set for ``mode``.

    ``base`` is the dual-core set. Without an override, V_L drops by the
    checkpoint saving of ``mode`` (same margin above the backup cost) and
    V_M keeps the base V_M-V_L gap.
    """
    if override is not None:
        thresholds = override
    else:
        saving = model.energy_2c - checkpoint_cost(mode, model)[1]
        e_low = base.e_low - saving
        thresholds = ThresholdConfig.from_energies(
            spec, base.e_high, e_low + base.e_ml, e_low
        )
    field = f"thresholds.{mode.value}"
    ckpt_energy = checkpoint_cost(mode, model)[1]
    if thresholds.e_low < ckpt_energy:
        raise ConfigError(
            f"V_L energy {thresholds.e_low * 1e3:.4f} mJ cannot fund a "
            f"{ckpt_energy * 1e3:.4f} mJ checkpoint",
            field=field,
        )
    if thresholds.e_ml < sleep_transition_energy:
        raise ConfigError("V_M - V_L gap cannot fund the sleep transition", field=field)
    if thresholds.e_high > spec.e_max:
        raise ConfigError("V_H lies above the capacitor ceiling", field=field)
    return thresholds


def jit_thresholds(
    thresholds: ThresholdConfig, guard: float, spec: CapacitorSpec
) -> ThresholdConfig:
    """V_M pulled down to just above V_L: sleep is skipped when it cannot end at V_H."""
    if not 0 < guard < thresholds.e_ml:
        raise ConfigError("jit guard must lie in (0, e_mid - e_low)", field="pearl.jit_guard_uj")
    return ThresholdConfig.from_energies(
        spec, thresholds.e_high, thresholds.e_low + guard, thresholds.e_low
    )


@dataclass(frozen=True)
class AdamicaConfig:
    backup_threshold_energy: float
    history_len: int = 16
    sample_period: float = 10e-3
    adc_sample_time: float = 130e-6
    adc_sample_energy: float = 0.69e-3 * 130e-6

    def __post_init__(self) -> None:
        if self.history_len < 1:
            raise ConfigError("must be at least 1", field="adamica.history_len")
        if self.sample_period <= 0:
            raise ConfigError("must be positive", field="adamica.sample_period_ms")
        if self.adc_sample_time < 0 or self.adc_sample_energy < 0:
            raise ConfigError("must be non-negative", field="adamica.adc_sample")
        if self.adc_sample_time >= self.sample_period:
            raise ConfigError("conversion outlasts the sampling period", field="adamica.adc_sample")


@dataclass(frozen=True)
class RockClimbConfig:
    region_instructions: int = 5000
    lightness: float = 1.0

    def __post_init__(self) -> None:
        if self.region_instructions < 1:
            raise ConfigError("must be at least 1", field="rockclimb.region_instructions")
        if not 0 < self.lightness <= 1:
            raise ConfigError("must lie in (0, 1]", field="rockclimb.lightness")
