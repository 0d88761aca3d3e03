from src.engine.report import (
    REPORT_COLUMNS,
    EventRecord,
    SimulationReport,
    compute_throughput,
    throughput_or_zero,
)
from src.engine.simulator import Simulator, build_trace, build_workload, next_event, run_simulation

__all__ = [
    "REPORT_COLUMNS",
    "EventRecord",
    "SimulationReport",
    "Simulator",
    "build_trace",
    "build_workload",
    "compute_throughput",
    "next_event",
    "run_simulation",
    "throughput_or_zero",
]
