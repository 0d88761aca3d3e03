"""Sweep plans: a cartesian product of policies, modes, power sources and seeds."""

from __future__ import annotations

import logging
import pathlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, List, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.core.config import apply_overrides, build_config, load_raw, read_config_file
from src.core.errors import ConfigError, SimulationError
from src.core.types import ModeSetting, PolicyName, ReportRow
from src.engine import run_simulation
from src.traces import load_trace

log = logging.getLogger(__name__)


class SweepPointError(SimulationError):
    """A single sweep run failed; carries the combination and the original error."""

    def __init__(self, label: str, cause: Exception) -> None:
        self.label = label
        self.cause = cause
        super().__init__(f"{label}: {cause}")

    def __reduce__(self) -> tuple[Any, ...]:
        # crosses process boundaries in parallel sweeps
        return (type(self), (self.label, self.cause))


def parse_seeds(text: str) -> list[int]:
    """``"1..100"``, ``"3"`` or comma-separated mixes such as ``"1,4..6"``."""
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo_text, hi_text = part.split("..", 1)
                lo, hi = int(lo_text), int(hi_text)
                if hi < lo:
                    raise ConfigError(f"empty seed range {part!r}", field="seeds")
                seeds.extend(range(lo, hi + 1))
            else:
                seeds.append(int(part))
        except ValueError as exc:
            raise ConfigError(f"bad seed spec {part!r}", field="seeds") from exc
    if not seeds:
        raise ConfigError("no seeds given", field="seeds")
    return seeds


def parse_list(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def parse_powers(text: str) -> list[float]:
    try:
        return [float(p) for p in parse_list(text)]
    except ValueError as exc:
        raise ConfigError(f"bad power list {text!r}", field="powers") from exc


def trace_section(source: str) -> dict[str, Any]:
    """Config ``trace`` section for a sweep source.

    ``daylight:<variant>`` and ``rf-obstacle`` select a generator; anything
    else is read as a trace file path.
    """
    if source.startswith("daylight:"):
        return {"kind": "daylight", "variant": source.split(":", 1)[1]}
    if source == "daylight":
        return {"kind": "daylight"}
    if source == "rf-obstacle":
        return {"kind": "rf-obstacle"}
    return {"kind": "file", "path": source}


class ExperimentSpec(BaseModel):
    """One sweep: every policy x mode x power-or-trace x seed combination."""

    model_config = ConfigDict(extra="forbid")

    config: Optional[str] = None
    policies: List[PolicyName]
    modes: List[ModeSetting] = Field(default_factory=lambda: ["1c", "2c"])
    powers_mw: List[float] = Field(default_factory=list)
    traces: List[str] = Field(default_factory=list)
    seeds: List[int] = Field(default_factory=lambda: [1])
    overrides: dict[str, Any] = Field(default_factory=dict)
    jobs: int = Field(default=1, ge=1)
    out: Optional[str] = None

    @field_validator("policies", "modes", "seeds")
    @classmethod
    def _non_empty(cls, value: list[Any]) -> list[Any]:
        if not value:
            raise ValueError("must not be empty")
        return value

    @field_validator("powers_mw")
    @classmethod
    def _non_negative(cls, value: list[float]) -> list[float]:
        if any(p < 0 for p in value):
            raise ValueError("powers must be non-negative")
        return value

    @model_validator(mode="after")
    def _one_source(self) -> "ExperimentSpec":
        if bool(self.powers_mw) == bool(self.traces):
            raise ValueError("give either powers_mw or traces (mutually exclusive)")
        return self

    @classmethod
    def from_file(cls, path: pathlib.Path) -> "ExperimentSpec":
        try:
            return cls.model_validate(read_config_file(path))
        except ValidationError as exc:
            first = exc.errors()[0]
            where = ".".join(str(p) for p in first["loc"]) or None
            raise ConfigError(f"{path}: {first['msg']}", field=where) from exc

    @property
    def sources(self) -> list[dict[str, Any]]:
        if self.powers_mw:
            return [{"kind": "constant", "power_mw": p} for p in self.powers_mw]
        return [trace_section(t) for t in self.traces]


@dataclass(frozen=True)
class RunPoint:
    index: int
    policy: str
    mode: str
    source: str
    seed: int
    raw: Mapping[str, Any]

    @property
    def label(self) -> str:
        return f"#{self.index} {self.policy}-{self.mode} {self.source} seed={self.seed}"


def _source_label(section: Mapping[str, Any]) -> str:
    kind = section["kind"]
    if kind == "constant":
        return f"{section['power_mw']:g}mW"
    if kind == "file":
        return str(section["path"])
    if "variant" in section:
        return f"{kind}:{section['variant']}"
    return str(kind)


def expand(spec: ExperimentSpec) -> list[RunPoint]:
    """Every run of ``spec`` in deterministic order, each config validated up front."""
    base = load_raw(pathlib.Path(spec.config) if spec.config else None, spec.overrides or None)
    for section in spec.sources:
        if section["kind"] == "file":
            # parse errors surface before any run starts
            load_trace(pathlib.Path(section["path"]))
    points: list[RunPoint] = []
    for section in spec.sources:
        for policy in spec.policies:
            for mode in spec.modes:
                if policy == "rockclimb" and mode == "adaptive":
                    log.info("skipping rockclimb-adaptive: rockclimb runs in fixed modes only")
                    continue
                for seed in spec.seeds:
                    trace = {**base.get("trace", {}), **section}
                    raw = apply_overrides(
                        {**base, "trace": trace},
                        {"policy.name": policy, "policy.mode": mode, "workload.seed": seed},
                    )
                    point = RunPoint(len(points), policy, mode, _source_label(section), seed, raw)
                    try:
                        build_config(raw)
                    except (ConfigError, FileNotFoundError) as exc:
                        raise SweepPointError(point.label, exc) from exc
                    points.append(point)
    if not points:
        raise ConfigError("the sweep expands to no runs", field="modes")
    return points


def run_point(raw: Mapping[str, Any]) -> ReportRow:
    return run_simulation(build_config(raw)).to_row()


def _run_labelled(point: RunPoint) -> ReportRow:
    try:
        return run_point(point.raw)
    except (SimulationError, FileNotFoundError) as exc:
        raise SweepPointError(point.label, exc) from exc


def run_sweep(points: list[RunPoint], jobs: int = 1) -> list[ReportRow]:
    """Rows in point order, whatever order the workers finish in."""
    log.info("sweep: %d runs, %d job(s)", len(points), jobs)
    if jobs <= 1:
        return [_run_labelled(p) for p in points]
    rows: list[ReportRow] = []
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        for row in executor.map(_run_labelled, points):
            rows.append(row)
    return rows
