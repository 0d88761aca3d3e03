from __future__ import annotations

import copy
import hashlib
import json
import logging
import os
import pathlib
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import yaml
from pydantic import ValidationError

from src.core.errors import ConfigError
from src.core.schema import ConfigFileModel
from src.core.types import Mode
from src.energy.capacitor import CapacitorSpec, PlatformCosts, ThresholdConfig
from src.policies.base import PolicyKind
from src.policies.checkpoint import (
    AdamicaConfig,
    CheckpointModel,
    RockClimbConfig,
    checkpoint_cost,
    configure_thresholds,
    restore_cost,
)
from src.predictor.power import PredictorConfig
from src.workload.program import InstructionCost, ParallelBy, block_cost

log = logging.getLogger(__name__)

DEFAULTS_ENV = "PEARLSIM_DEFAULTS"
DEFAULTS_PATH = pathlib.Path(__file__).resolve().parents[2] / "configs" / "default.yaml"

MW, MJ, MS, MF, UJ = 1e-3, 1e-3, 1e-3, 1e-3, 1e-6


@dataclass(frozen=True)
class WorkloadParams:
    total_instructions: int
    parallel_fraction: float
    parallel_by: ParallelBy
    mean_block_size: int
    instruction_time: float
    seed: int


@dataclass(frozen=True)
class TraceParams:
    kind: str
    power: float
    path: Optional[str]
    variant: str
    base_day_length: float
    base_peak: float
    step: float
    base_power: float
    attenuated_power: float
    period: float
    hold: float
    total: float
    offset: float


@dataclass(frozen=True)
class SimulationConfig:
    """Validated run configuration in SI units."""

    capacitor: CapacitorSpec
    base_thresholds: ThresholdConfig
    thresholds: Mapping[Mode, ThresholdConfig] = field(compare=False)
    costs: PlatformCosts
    checkpoint: CheckpointModel
    predictor: PredictorConfig
    policy: PolicyKind
    jit_collapse: bool
    jit_guard: float
    adamica: AdamicaConfig
    rockclimb: RockClimbConfig
    workload: WorkloadParams
    trace: TraceParams
    initial_energy: float
    off_floor: float
    monitor_power: float
    max_sim_time: float
    record_events: bool
    # canonical file-unit mapping the config was built from
    raw: Mapping[str, Any] = field(compare=False, repr=False)

    @property
    def digest(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @property
    def instruction_cost(self) -> InstructionCost:
        return InstructionCost.from_platform(self.workload.instruction_time, self.costs)


def deep_merge(base: Mapping[str, Any], extra: Mapping[str, Any]) -> dict[str, Any]:
    merged = copy.deepcopy(dict(base))
    for key, value in extra.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def parse_override(item: str) -> tuple[str, Any]:
    """``section.key=value``; the value is read as YAML so numbers stay numbers."""
    if "=" not in item:
        raise ConfigError(f"override {item!r} is not key=value", field=item)
    key, text = item.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigError(f"override {item!r} has an empty key")
    return key, yaml.safe_load(text)


def apply_overrides(raw: Mapping[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    merged = copy.deepcopy(dict(raw))
    for dotted, value in overrides.items():
        node = merged
        *parents, leaf = dotted.split(".")
        for part in parents:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"{part} is not a section", field=dotted)
            node = child
        node[leaf] = value
    return merged


def read_config_file(path: pathlib.Path) -> dict[str, Any]:
    if not path.exists():
        raise FileNotFoundError(
            f"Configuration file not found: {path}\n"
            "Pass an existing .yaml/.yml/.json file, or omit --config to run the shipped "
            "defaults (configs/default.yaml)."
        )
    with path.open("r", encoding="utf-8") as f:
        if path.suffix == ".json":
            try:
                raw = json.load(f)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        else:
            try:
                raw = yaml.safe_load(f)
            except yaml.YAMLError as exc:
                raise ConfigError(f"{path}: invalid YAML ({exc})") from exc
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(
            f"Invalid configuration {path}: expected a mapping, got {type(raw).__name__}"
        )
    return raw


def default_raw() -> dict[str, Any]:
    env_path = os.getenv(DEFAULTS_ENV)
    if env_path:
        return read_config_file(pathlib.Path(env_path))
    if DEFAULTS_PATH.exists():
        return read_config_file(DEFAULTS_PATH)
    log.debug("no %s; using built-in defaults", DEFAULTS_PATH)
    return {}


def load_raw(
    path: Optional[pathlib.Path] = None, overrides: Optional[Mapping[str, Any]] = None
) -> dict[str, Any]:
    raw = default_raw()
    if path is not None:
        raw = deep_merge(raw, read_config_file(path))
    if overrides:
        raw = apply_overrides(raw, overrides)
    return raw


def load_config(
    path: Optional[pathlib.Path] = None, overrides: Optional[Mapping[str, Any]] = None
) -> SimulationConfig:
    return build_config(load_raw(path, overrides))


def _validation_error(exc: ValidationError) -> ConfigError:
    first = exc.errors()[0]
    where = ".".join(str(p) for p in first["loc"]) or None
    return ConfigError(first["msg"], field=where)


def build_config(raw: Mapping[str, Any]) -> SimulationConfig:
    try:
        model = ConfigFileModel.model_validate(raw)
    except ValidationError as exc:
        raise _validation_error(exc) from exc
    canonical = model.model_dump(mode="json")

    th = model.thresholds
    cap = model.capacitor
    v_max = cap.v_max if cap.v_max is not None else th.v_high
    if v_max < th.v_high:
        raise ConfigError("v_max must be at least thresholds.v_high", field="capacitor.v_max")
    spec = CapacitorSpec(capacitance=cap.capacitance_mf * MF, v_max=v_max)

    pl = model.platform
    costs = PlatformCosts(
        p_active_1c=pl.p_active_1c_mw * MW,
        p_active_2c=pl.p_active_2c_mw * MW,
        p_lpm=pl.p_lpm_mw * MW,
        boot_time=pl.boot_time_ms * MS,
        boot_energy=pl.boot_energy_mj * MJ,
        checkpoint_time_2c=pl.checkpoint_time_ms * MS,
        checkpoint_energy_2c=pl.checkpoint_energy_mj * MJ,
        restore_time_2c=pl.restore_time_ms * MS,
        restore_energy_2c=pl.restore_energy_mj * MJ,
        single_core_backup_fraction=pl.single_core_backup_fraction,
        core_msg_time=pl.core_msg_time_ms * MS,
        core_msg_energy=pl.core_msg_energy_mj * MJ,
        threshold_reconfig_time=pl.threshold_reconfig_time_ms * MS,
        threshold_reconfig_energy=pl.threshold_reconfig_energy_mj * MJ,
        sleep_transition_time=pl.sleep_transition_time_ms * MS,
        sleep_transition_energy=pl.sleep_transition_energy_mj * MJ,
        predictor_update_time=pl.predictor_update_time_ms * MS,
        predictor_update_energy=pl.predictor_update_energy_mj * MJ,
        decision_time=pl.decision_time_ms * MS,
        decision_energy=pl.decision_energy_mj * MJ,
    )
    ckpt = CheckpointModel.from_platform(costs)
    base = ThresholdConfig.from_voltages(spec, th.v_high, th.v_mid, th.v_low)
    per_mode: dict[Mode, ThresholdConfig] = {}
    for mode in Mode:
        over = th.overrides.get(mode.value)
        override = (
            ThresholdConfig.from_voltages(spec, th.v_high, over.v_mid, over.v_low) if over else None
        )
        per_mode[mode] = configure_thresholds(
            mode,
            base,
            ckpt,
            spec,
            override=override,
            sleep_transition_energy=costs.sleep_transition_energy,
        )

    ad = model.adamica
    backup_voltage = ad.backup_voltage if ad.backup_voltage is not None else th.v_low
    adamica = AdamicaConfig(
        backup_threshold_energy=spec.energy_at(backup_voltage),
        history_len=ad.history_len,
        sample_period=ad.sample_period_ms * MS,
        adc_sample_time=ad.adc_sample_time_ms * MS,
        adc_sample_energy=ad.adc_power_mw * MW * ad.adc_sample_time_ms * MS,
    )
    rockclimb = RockClimbConfig(
        region_instructions=model.rockclimb.region_instructions,
        lightness=model.rockclimb.lightness,
    )
    wl = model.workload
    tr = model.trace
    config = SimulationConfig(
        capacitor=spec,
        base_thresholds=base,
        thresholds=per_mode,
        costs=costs,
        checkpoint=ckpt,
        predictor=PredictorConfig(
            alpha=model.predictor.alpha, p_clamp_max=model.predictor.p_clamp_max_mw * MW
        ),
        policy=PolicyKind(model.policy.name, model.policy.mode),
        jit_collapse=model.pearl.jit_collapse,
        jit_guard=model.pearl.jit_guard_uj * UJ,
        adamica=adamica,
        rockclimb=rockclimb,
        workload=WorkloadParams(
            total_instructions=wl.instructions,
            parallel_fraction=wl.parallel_fraction,
            parallel_by=wl.parallel_by,
            mean_block_size=wl.mean_block_size,
            instruction_time=wl.instruction_time_ms * MS,
            seed=wl.seed,
        ),
        trace=TraceParams(
            kind=tr.kind,
            power=tr.power_mw * MW,
            path=tr.path,
            variant=tr.variant,
            base_day_length=tr.base_day_length_s,
            base_peak=tr.base_peak_mw * MW,
            step=tr.step_s,
            base_power=tr.base_mw * MW,
            attenuated_power=tr.attenuated_mw * MW,
            period=tr.period_s,
            hold=tr.hold_s,
            total=tr.total_s,
            offset=tr.offset_s,
        ),
        initial_energy=spec.energy_at(cap.initial_voltage),
        off_floor=cap.off_floor_mj * MJ,
        monitor_power=pl.monitor_power_mw * MW,
        max_sim_time=model.simulation.max_sim_time_s,
        record_events=model.simulation.record_events,
        raw=canonical,
    )
    check_feasible(config)
    return config


def check_feasible(cfg: SimulationConfig) -> None:
    """Cross-module physics checks; each failure names the offending field."""
    spec, costs = cfg.capacitor, cfg.costs
    if cfg.initial_energy > spec.e_max:
        raise ConfigError("initial_voltage lies above v_max", field="capacitor.initial_voltage")
    lowest = min(t.e_low for t in cfg.thresholds.values())
    if cfg.off_floor >= lowest:
        raise ConfigError("off floor must sit below V_L", field="capacitor.off_floor_mj")
    cost = cfg.instruction_cost
    for mode, th in cfg.thresholds.items():
        _, step = block_cost(mode.cores, mode, cost, costs)
        if step > th.e_high - th.e_low:
            raise ConfigError(
                f"one {mode.value} instruction step needs more than the usable capacitor energy",
                field="workload.instruction_time_ms",
            )
    if cfg.jit_collapse and cfg.policy.name == "pearl":
        if cfg.jit_guard >= min(t.e_ml for t in cfg.thresholds.values()):
            raise ConfigError(
                "guard must be smaller than the V_M - V_L gap", field="pearl.jit_guard_uj"
            )

    name = cfg.policy.name
    if name == "adamica":
        backup = cfg.adamica.backup_threshold_energy
        full_ckpt = checkpoint_cost(Mode.DUAL, cfg.checkpoint)[1]
        if not full_ckpt <= backup < cfg.base_thresholds.e_high:
            raise ConfigError(
                "backup threshold must fund a full checkpoint and sit below V_H",
                field="adamica.backup_voltage",
            )
        full_restore = restore_cost(Mode.DUAL, cfg.checkpoint)[1]
        after = cfg.base_thresholds.e_high - costs.boot_energy - full_restore
        if after <= backup:
            raise ConfigError(
                "boot and restore from V_H end below the backup threshold",
                field="platform.restore_energy_mj",
            )
        return
    for mode, th in cfg.thresholds.items():
        after = th.e_high - costs.boot_energy - restore_cost(mode, cfg.checkpoint)[1]
        if name == "pearl" and after <= th.e_mid:
            raise ConfigError(
                f"boot and restore from V_H end below V_M in {mode.value}",
                field="platform.restore_energy_mj",
            )
        if name == "rockclimb":
            regions = cfg.rockclimb
            ckpt_e = checkpoint_cost(mode, cfg.checkpoint)[1] * regions.lightness
            region_e = block_cost(regions.region_instructions, mode, cost, costs)[1]
            if region_e + ckpt_e > after - th.e_low:
                raise ConfigError(
                    f"a {mode.value} region and its checkpoint do not fit between V_H "
                    "(after boot and restore) and V_L",
                    field="rockclimb.region_instructions",
                )
