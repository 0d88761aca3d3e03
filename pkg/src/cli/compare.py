from __future__ import annotations

import logging
import math
import pathlib
from typing import Any, Mapping, Optional, Sequence

import pandas as pd

from src.core.errors import ConfigError
from src.core.storage import read_json, read_rows_csv
from src.core.types import CATEGORIES
from src.engine.report import REPORT_COLUMNS

log = logging.getLogger(__name__)

SUMMARY_COLUMNS: tuple[str, ...] = (
    "trace",
    "power_mW",
    "label",
    "baseline",
    "runs",
    "comparable",
    "truncated",
    "total_energy_mJ",
    "energy_ratio",
    "wall_clock_ms",
    "time_ratio",
    "latency_ms",
    "latency_pct",
    "throughput_ips",
    "throughput_ratio",
    "checkpoint_count",
    "checkpoint_ratio",
)

_MEANS = (
    "total_energy_mJ",
    "wall_clock_ms",
    "latency_ms",
    "throughput_ips",
    "checkpoint_count",
)


def row_from_report(report: Mapping[str, Any]) -> dict[str, Any]:
    """Flatten a JSON report into the sweep CSV row layout."""
    energy = report["energy_mJ"]
    counts = report["counts"]
    ledger = report["ledger"]
    row: dict[str, Any] = {
        "policy": report["policy"],
        "mode": report["mode"],
        "trace": report["trace"],
        "power_mW": math.nan if report["power_mW"] is None else report["power_mW"],
        "seed": report["seed"],
        "truncated": report["truncated"],
        "wall_clock_ms": report["wall_clock_ms"],
        "latency_ms": math.nan if report["latency_ms"] is None else report["latency_ms"],
        "instructions_completed": report["instructions_completed"],
        "throughput_ips": report["throughput_ips"],
        "total_energy_mJ": report["total_energy_mJ"],
        "charging_time_ms": report["charging_time_ms"],
        "off_charging_time_ms": report["off_charging_time_ms"],
        "sleep_time_ms": report["sleep_time_ms"],
        "cold_start_time_ms": report["cold_start_time_ms"],
        "checkpoint_count": counts["checkpoint"],
        "restore_count": counts["restore"],
        "boot_count": counts["boot"],
        "mode_switch_count": counts["mode_switch"],
        "hit_high": counts["hit_high"],
        "hit_medium": counts["hit_medium"],
        "hit_low": counts["hit_low"],
        "harvested_mJ": ledger["harvested_mJ"],
        "overflow_mJ": ledger["overflow_mJ"],
        "config_digest": report["config_digest"],
    }
    for category in CATEGORIES:
        row[f"{category}_energy_mJ"] = energy[category]
    return {c: row[c] for c in REPORT_COLUMNS}


def load_runs(paths: Sequence[pathlib.Path]) -> pd.DataFrame:
    """Runs from two or more JSON reports, or from one sweep CSV."""
    if len(paths) == 1 and paths[0].suffix == ".csv":
        rows = read_rows_csv(paths[0])
    elif len(paths) >= 2 and all(p.suffix == ".json" for p in paths):
        rows = []
        for path in paths:
            if not path.exists():
                raise FileNotFoundError(f"Report not found: {path}")
            rows.append(row_from_report(read_json(path)))
    else:
        raise ConfigError("compare needs two or more JSON reports or one sweep CSV", field="inputs")
    frame = pd.DataFrame(rows, columns=list(REPORT_COLUMNS))
    if frame.empty:
        raise ConfigError("no runs to compare", field="inputs")
    frame["label"] = frame["policy"].astype(str) + "-" + frame["mode"].astype(str)
    return frame


def _ratio(value: float, base: float) -> float:
    if base == 0 or math.isnan(base) or math.isnan(value):
        return math.nan
    return value / base


def compare_runs(frame: pd.DataFrame, baseline: Optional[str] = None) -> pd.DataFrame:
    """Seed-averaged metrics per label and their ratios against ``baseline``.

    Ratios are candidate / baseline; ``latency_pct`` is the relative latency
    change in percent. Labels whose seed sets differ from the baseline's are
    flagged as not comparable.
    """
    labels = list(dict.fromkeys(frame["label"]))
    if len(frame) < 2:
        raise ConfigError("compare needs at least two runs", field="inputs")
    base_label = baseline or labels[0]
    if base_label not in labels:
        raise ConfigError(f"baseline {base_label!r} not among {labels}", field="baseline")

    out: list[dict[str, Any]] = []
    for (trace, power), group in frame.groupby(["trace", "power_mW"], sort=False, dropna=False):
        base_rows = group[group["label"] == base_label]
        if base_rows.empty:
            log.warning("no %s run for %s; skipped", base_label, trace)
            continue
        base_seeds = set(base_rows["seed"])
        base_means = base_rows[list(_MEANS)].mean()
        for label in dict.fromkeys(group["label"]):
            rows = group[group["label"] == label]
            means = rows[list(_MEANS)].mean()
            comparable = set(rows["seed"]) == base_seeds
            if not comparable:
                log.warning("%s vs %s on %s: workload seeds differ", label, base_label, trace)
            base_latency = float(base_means["latency_ms"])
            latency = float(means["latency_ms"])
            out.append(
                {
                    "trace": trace,
                    "power_mW": power,
                    "label": label,
                    "baseline": base_label,
                    "runs": len(rows),
                    "comparable": comparable,
                    "truncated": bool(rows["truncated"].astype(bool).any()),
                    "total_energy_mJ": float(means["total_energy_mJ"]),
                    "energy_ratio": _ratio(means["total_energy_mJ"], base_means["total_energy_mJ"]),
                    "wall_clock_ms": float(means["wall_clock_ms"]),
                    "time_ratio": _ratio(means["wall_clock_ms"], base_means["wall_clock_ms"]),
                    "latency_ms": latency,
                    "latency_pct": 100.0 * (_ratio(latency, base_latency) - 1.0),
                    "throughput_ips": float(means["throughput_ips"]),
                    "throughput_ratio": _ratio(
                        means["throughput_ips"], base_means["throughput_ips"]
                    ),
                    "checkpoint_count": float(means["checkpoint_count"]),
                    "checkpoint_ratio": _ratio(
                        means["checkpoint_count"], base_means["checkpoint_count"]
                    ),
                }
            )
    return pd.DataFrame(out, columns=list(SUMMARY_COLUMNS))
