"""On-disk config schema. File units: mW, mJ, ms, V, mF."""

from __future__ import annotations

from typing import Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

SCHEMA_VERSION = 1

TraceKind = Literal["constant", "daylight", "rf-obstacle", "file"]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CapacitorModel(_Section):
    capacitance_mf: float = Field(default=1.0, gt=0)
    # defaults to thresholds.v_high
    v_max: Optional[float] = Field(default=None, gt=0)
    initial_voltage: float = Field(default=0.0, ge=0)
    off_floor_mj: float = Field(default=0.0, ge=0)


class ModeThresholdsModel(_Section):
    v_mid: float = Field(gt=0)
    v_low: float = Field(ge=0)


class ThresholdsModel(_Section):
    v_high: float = Field(default=2.9, gt=0)
    v_mid: float = Field(default=2.5, gt=0)
    v_low: float = Field(default=2.0, ge=0)
    overrides: Dict[Literal["1c", "2c"], ModeThresholdsModel] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _ordered(self) -> "ThresholdsModel":
        if not self.v_low < self.v_mid < self.v_high:
            raise ValueError(
                f"need v_low < v_mid < v_high, got {self.v_low}, {self.v_mid}, {self.v_high}"
            )
        for mode, over in self.overrides.items():
            if not over.v_low < over.v_mid < self.v_high:
                raise ValueError(f"overrides.{mode}: need v_low < v_mid < v_high")
        return self


class PlatformModel(_Section):
    p_active_1c_mw: float = Field(default=10.0, gt=0)
    p_active_2c_mw: float = Field(default=20.0, gt=0)
    p_lpm_mw: float = Field(default=0.033, gt=0)
    monitor_power_mw: float = Field(default=0.0, ge=0)
    boot_time_ms: float = Field(default=0.5, gt=0)
    boot_energy_mj: float = Field(default=5.45e-3, gt=0)
    checkpoint_time_ms: float = Field(default=96.35, gt=0)
    checkpoint_energy_mj: float = Field(default=0.82961, gt=0)
    restore_time_ms: float = Field(default=96.35, gt=0)
    restore_energy_mj: float = Field(default=0.82961, gt=0)
    single_core_backup_fraction: float = Field(default=2 / 3, gt=0, le=1)
    core_msg_time_ms: float = Field(default=0.052e-3, gt=0)
    core_msg_energy_mj: float = Field(default=0.576e-6, gt=0)
    threshold_reconfig_time_ms: float = Field(default=0.0624e-3, gt=0)
    threshold_reconfig_energy_mj: float = Field(default=0.68e-6, gt=0)
    sleep_transition_time_ms: float = Field(default=0.014, ge=0)
    sleep_transition_energy_mj: float = Field(default=0.112e-6, ge=0)
    predictor_update_time_ms: float = Field(default=0.93e-3, ge=0)
    predictor_update_energy_mj: float = Field(default=9.336e-6, ge=0)
    decision_time_ms: float = Field(default=0.34e-3, ge=0)
    decision_energy_mj: float = Field(default=3.423e-6, ge=0)


class WorkloadModel(_Section):
    instructions: int = Field(default=1_000_000, gt=0)
    parallel_fraction: float = Field(default=1.0, ge=0, le=1)
    parallel_by: Literal["instructions", "blocks"] = "instructions"
    mean_block_size: int = Field(default=10_000, ge=1)
    instruction_time_ms: float = Field(default=0.01, gt=0)
    seed: int = 1


class PredictorModel(_Section):
    alpha: float = Field(default=0.2, gt=0, le=1)
    p_clamp_max_mw: float = Field(default=100.0, gt=0)


class PolicyModel(_Section):
    name: Literal["pearl", "adamica", "rockclimb"] = "pearl"
    mode: Literal["1c", "2c", "adaptive"] = "adaptive"


class PearlModel(_Section):
    jit_collapse: bool = True
    jit_guard_uj: float = Field(default=1.0, gt=0)


class AdamicaModel(_Section):
    history_len: int = Field(default=16, ge=1)
    sample_period_ms: float = Field(default=10.0, gt=0)
    adc_sample_time_ms: float = Field(default=0.13, ge=0)
    adc_power_mw: float = Field(default=0.69, ge=0)
    # defaults to the dual-core V_L
    backup_voltage: Optional[float] = Field(default=None, gt=0)


class RockClimbModel(_Section):
    region_instructions: int = Field(default=5000, ge=1)
    lightness: float = Field(default=1.0, gt=0, le=1)


class TraceModel(_Section):
    kind: TraceKind = "constant"
    power_mw: float = Field(default=5.0, ge=0)
    path: Optional[str] = None
    variant: Literal["short", "middle", "long"] = "long"
    base_day_length_s: float = Field(default=30.0, gt=0)
    base_peak_mw: float = Field(default=20.0, ge=0)
    step_s: float = Field(default=0.1, gt=0)
    base_mw: float = Field(default=5.0, ge=0)
    attenuated_mw: float = Field(default=0.5, ge=0)
    period_s: float = Field(default=15.0, gt=0)
    hold_s: float = Field(default=5.0, gt=0)
    total_s: float = Field(default=60.0, gt=0)
    offset_s: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def _file_needs_path(self) -> "TraceModel":
        if self.kind == "file" and not self.path:
            raise ValueError("kind 'file' needs a path")
        return self


class SimulationModel(_Section):
    max_sim_time_s: float = Field(default=1e6, gt=0)
    record_events: bool = False


class ConfigFileModel(_Section):
    schema_version: Literal[1] = SCHEMA_VERSION
    capacitor: CapacitorModel = Field(default_factory=CapacitorModel)
    thresholds: ThresholdsModel = Field(default_factory=ThresholdsModel)
    platform: PlatformModel = Field(default_factory=PlatformModel)
    workload: WorkloadModel = Field(default_factory=WorkloadModel)
    predictor: PredictorModel = Field(default_factory=PredictorModel)
    policy: PolicyModel = Field(default_factory=PolicyModel)
    pearl: PearlModel = Field(default_factory=PearlModel)
    adamica: AdamicaModel = Field(default_factory=AdamicaModel)
    rockclimb: RockClimbModel = Field(default_factory=RockClimbModel)
    trace: TraceModel = Field(default_factory=TraceModel)
    simulation: SimulationModel = Field(default_factory=SimulationModel)
