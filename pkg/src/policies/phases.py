from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from src.core.errors import SimulatorBug
from src.core.types import Mode


class RuntimePhase(str, Enum):
    OFF_CHARGING = "OffCharging"
    BOOTING = "Booting"
    RESTORING = "Restoring"
    ACTIVE = "Active"
    LPMRM = "Lpmrm"
    BACKING_UP = "BackingUp"
    DONE = "Done"

    def label(self, mode: Mode) -> str:
        if self is RuntimePhase.ACTIVE:
            return f"Active({mode.value.upper()})"
        return self.value


class EventKind(str, Enum):
    TRACE_CHANGE = "TraceChange"
    HIT_HIGH = "HitHigh"
    HIT_MEDIUM = "HitMedium"
    HIT_LOW = "HitLow"
    BLOCK_BOUNDARY = "BlockBoundary"
    REGION_BOUNDARY = "RegionBoundary"
    TIMER_EXPIRY = "TimerExpiry"
    SAMPLE_TICK = "SampleTick"
    WORKLOAD_COMPLETE = "WorkloadComplete"
    BOOT_DONE = "BootDone"
    RESTORE_DONE = "RestoreDone"
    BACKUP_DONE = "BackupDone"
    WATCHDOG = "Watchdog"


# lower sorts first when two events share a timestamp
TIE_ORDER: dict[EventKind, int] = {
    EventKind.TRACE_CHANGE: 0,
    EventKind.HIT_HIGH: 1,
    EventKind.HIT_MEDIUM: 1,
    EventKind.HIT_LOW: 1,
    EventKind.BLOCK_BOUNDARY: 2,
    EventKind.REGION_BOUNDARY: 2,
    EventKind.TIMER_EXPIRY: 3,
    EventKind.SAMPLE_TICK: 3,
    EventKind.WORKLOAD_COMPLETE: 4,
    EventKind.BOOT_DONE: 4,
    EventKind.RESTORE_DONE: 4,
    EventKind.BACKUP_DONE: 4,
    EventKind.WATCHDOG: 5,
}

# atomic phases and the completion event that ends each one
COMPLETIONS: dict[RuntimePhase, EventKind] = {
    RuntimePhase.BOOTING: EventKind.BOOT_DONE,
    RuntimePhase.RESTORING: EventKind.RESTORE_DONE,
    RuntimePhase.BACKING_UP: EventKind.BACKUP_DONE,
}


@dataclass(frozen=True)
class Event:
    kind: EventKind
    time: float


Edge = tuple[RuntimePhase, EventKind, RuntimePhase]

P = RuntimePhase
K = EventKind

_COMMON: frozenset[Edge] = frozenset(
    {
        (P.OFF_CHARGING, K.HIT_HIGH, P.BOOTING),
        (P.BOOTING, K.BOOT_DONE, P.RESTORING),
        (P.BOOTING, K.BOOT_DONE, P.ACTIVE),
        (P.RESTORING, K.RESTORE_DONE, P.ACTIVE),
        (P.ACTIVE, K.BLOCK_BOUNDARY, P.ACTIVE),
        (P.ACTIVE, K.WORKLOAD_COMPLETE, P.DONE),
    }
)

PEARL_EDGES: frozenset[Edge] = _COMMON | {
    (P.ACTIVE, K.HIT_MEDIUM, P.LPMRM),
    (P.ACTIVE, K.TIMER_EXPIRY, P.ACTIVE),
    (P.LPMRM, K.HIT_HIGH, P.ACTIVE),
    (P.LPMRM, K.HIT_LOW, P.BACKING_UP),
    (P.BACKING_UP, K.BACKUP_DONE, P.OFF_CHARGING),
}

ADAMICA_EDGES: frozenset[Edge] = _COMMON | {
    (P.ACTIVE, K.HIT_LOW, P.BACKING_UP),
    (P.ACTIVE, K.SAMPLE_TICK, P.ACTIVE),
    (P.BACKING_UP, K.BACKUP_DONE, P.OFF_CHARGING),
}

ROCKCLIMB_EDGES: frozenset[Edge] = _COMMON | {
    (P.ACTIVE, K.BLOCK_BOUNDARY, P.LPMRM),
    (P.ACTIVE, K.REGION_BOUNDARY, P.BACKING_UP),
    (P.BACKING_UP, K.BACKUP_DONE, P.ACTIVE),
    (P.BACKING_UP, K.BACKUP_DONE, P.LPMRM),
    (P.RESTORING, K.RESTORE_DONE, P.LPMRM),
    (P.LPMRM, K.HIT_HIGH, P.ACTIVE),
    (P.LPMRM, K.HIT_LOW, P.OFF_CHARGING),
}

del P, K


def check_edge(edges: frozenset[Edge], edge: Edge) -> None:
    if edge not in edges:
        src, kind, dst = edge
        raise SimulatorBug(f"illegal transition {src.value} --{kind.value}--> {dst.value}")


def illegal(phase: RuntimePhase, event: Event, policy: str) -> SimulatorBug:
    return SimulatorBug(f"{policy}: event {event.kind.value} is illegal in phase {phase.value}")
