"""Shared builders for the test suite."""

from __future__ import annotations

from typing import Any, Mapping, Optional

from src.core.config import SimulationConfig, apply_overrides, build_config, default_raw
from src.core.types import Mode
from src.engine import SimulationReport, run_simulation
from src.policies.base import PolicyContext
from src.predictor.power import PredictorConfig, PredictorState
from src.traces import PowerTrace
from src.workload.program import Block, InstructionCost, Workload

MW = 1e-3
MJ = 1e-3

COST = InstructionCost(time=10e-6, energy=100e-9)


def config_with(overrides: Optional[Mapping[str, Any]] = None) -> SimulationConfig:
    """Shipped defaults plus dotted overrides, e.g. ``{"policy.name": "adamica"}``."""
    return build_config(apply_overrides(default_raw(), dict(overrides or {})))


def run(
    overrides: Optional[Mapping[str, Any]] = None,
    *,
    trace: Optional[PowerTrace] = None,
    workload: Optional[Workload] = None,
    record_events: bool = False,
) -> SimulationReport:
    return run_simulation(
        config_with(overrides), trace=trace, workload=workload, record_events=record_events
    )


def blocks(*spec: tuple[int, bool]) -> Workload:
    """Workload from ``(instruction_count, parallelizable)`` pairs."""
    return Workload.of(
        [Block(i, parallel, count, COST) for i, (count, parallel) in enumerate(spec)]
    )


def context(
    config: SimulationConfig,
    *,
    mode: Mode = Mode.SINGLE,
    energy: Optional[float] = None,
    now: float = 0.0,
    ambient: float = 5 * MW,
    predictor: Optional[PredictorState] = None,
    **extra: Any,
) -> PolicyContext:
    """A policy snapshot built from ``config``; ``extra`` sets the remaining fields."""
    thresholds = extra.pop("thresholds", config.thresholds[mode])
    return PolicyContext(
        now=now,
        energy=thresholds.e_high if energy is None else energy,
        mode=mode,
        thresholds=thresholds,
        ambient_power=ambient,
        costs=config.costs,
        checkpoint=config.checkpoint,
        predictor=predictor or PredictorState.initial(config.costs),
        predictor_cfg=extra.pop("predictor_cfg", PredictorConfig()),
        **extra,
    )
