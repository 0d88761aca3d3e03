"""Event-driven executor.

Ambient power is piecewise constant and every draw is constant within a
phase, so the stored energy is piecewise linear between events and each
threshold crossing has a closed-form time. The loop jumps from event to
event; nothing is integrated with a fixed step.
"""

from __future__ import annotations

import logging
import math
import pathlib
from collections import Counter, deque
from dataclasses import dataclass, replace
from typing import Optional, Union, cast

from src.core.config import SimulationConfig, TraceParams
from src.core.errors import ConfigError, SimulatorBug
from src.core.types import CATEGORIES, Mode
from src.energy.capacitor import NEVER, CapacitorState, advance_capacitor, time_to_cross
from src.engine.report import EventRecord, SimulationReport
from src.observability.events import append_event
from src.policies.base import (
    Action,
    ArmTimer,
    EnterBlock,
    PolicyContext,
    PowerOff,
    RecordSample,
    SetJitCollapse,
    SetMode,
    SetPredictor,
    SetThresholds,
    Spend,
)
from src.policies.phases import COMPLETIONS, TIE_ORDER, Event, EventKind, RuntimePhase, check_edge
from src.policies.registry import build_policy
from src.predictor.power import PredictorState
from src.traces import PowerTrace, constant_trace, daylight_preset, load_trace, rf_obstacle_trace
from src.traces.generators import DaylightKind
from src.workload.program import ExecutionCursor, Workload, block_cost, generate_workload

log = logging.getLogger(__name__)

P = RuntimePhase
K = EventKind

# engine-internal stop: the unit of work at the cursor ran to its end
UNIT_END = "UnitEnd"
Tag = Union[EventKind, str]

# consecutive zero-length steps tolerated before the run is declared stuck
ZERO_STEP_LIMIT = 100_000
# rounding slack when checking that an atomic action kept energy non-negative
ENERGY_TOL = 1e-15


def build_trace(params: TraceParams) -> PowerTrace:
    if params.kind == "constant":
        return constant_trace(params.power)
    if params.kind == "daylight":
        if params.variant not in ("short", "middle", "long"):
            raise ConfigError(f"unknown daylight variant {params.variant!r}", field="trace.variant")
        return daylight_preset(
            cast(DaylightKind, params.variant),
            base_day_length=params.base_day_length,
            base_peak=params.base_peak,
            step=params.step,
        )
    if params.kind == "rf-obstacle":
        return rf_obstacle_trace(
            params.base_power, params.attenuated_power, params.period, params.hold, params.total
        )
    if params.path is None:
        raise ConfigError("kind 'file' needs a path", field="trace.path")
    return load_trace(pathlib.Path(params.path))


def build_workload(config: SimulationConfig) -> Workload:
    wl = config.workload
    return generate_workload(
        seed=wl.seed,
        total_instructions=wl.total_instructions,
        parallel_fraction=wl.parallel_fraction,
        mean_block_size=wl.mean_block_size,
        cost=config.instruction_cost,
        parallel_by=wl.parallel_by,
    )


@dataclass(frozen=True)
class _Snapshot:
    """What a checkpoint preserves: execution progress and the block's mode."""

    cursor: ExecutionCursor
    elapsed: float
    entered: int
    mode: Mode


class Simulator:
    def __init__(
        self,
        config: SimulationConfig,
        *,
        trace: Optional[PowerTrace] = None,
        workload: Optional[Workload] = None,
        record_events: Optional[bool] = None,
        events_log: Optional[pathlib.Path] = None,
    ) -> None:
        self.config = config
        self.trace = trace if trace is not None else build_trace(config.trace)
        self.workload = workload if workload is not None else build_workload(config)
        self.policy = build_policy(config)
        self.costs = config.costs
        self.record = config.record_events if record_events is None else record_events
        self.events_log = events_log

        self.t = 0.0
        self.energy = config.initial_energy
        self.phase = P.OFF_CHARGING
        self.mode = Mode.SINGLE
        self.thresholds = self.policy.initial_thresholds()
        self.cursor = ExecutionCursor()
        self.elapsed = 0.0
        self.entered = -1
        self.predictor = PredictorState.initial(self.costs)
        self.timers: dict[EventKind, float] = {}
        self.samples: deque[float] = deque(maxlen=config.adamica.history_len)
        self.jit_collapsed = False
        self.has_checkpoint = False
        self.snapshot = self._snapshot()
        self.cold = True
        self.off_since = 0.0
        self.off_energy = self.energy

        self.energy_by = {c: 0.0 for c in CATEGORIES}
        self.time_by = {c: 0.0 for c in CATEGORIES}
        self.counts: Counter[str] = Counter()
        self.harvested = 0.0
        self.overflow = 0.0
        self.off_charging_time = 0.0
        self.cold_start_time = 0.0
        self.sleep_time = 0.0
        self.completed_by_mode = {m.value: 0 for m in Mode}
        self.latency: Optional[float] = None
        self.truncated = False
        self.events: list[EventRecord] = []
        self.p_hat_trajectory: list[tuple[float, float]] = [(0.0, self.predictor.p_hat)]

    # -- bookkeeping -------------------------------------------------------

    def _snapshot(self) -> _Snapshot:
        return _Snapshot(self.cursor, self.elapsed, self.entered, self.mode)

    def _trace_time(self) -> float:
        return self.t + self.config.trace.offset

    def _ambient(self) -> float:
        return self.trace.power_at(self._trace_time())

    def _draw(self) -> float:
        if self.phase is P.ACTIVE:
            return self.costs.p_active(self.mode) + self.config.monitor_power
        if self.phase is P.LPMRM:
            return self.costs.p_lpm + self.config.monitor_power
        return 0.0

    def _integrate(self, draw: float, dt: float) -> None:
        """Constant draw against the current segment's ambient power for ``dt``."""
        p_amb = self._ambient()
        target = self.energy + (p_amb - draw) * dt
        if target < -ENERGY_TOL:
            raise SimulatorBug(
                f"energy would drop to {target:.3e} J at t={self.t + dt:.9f} in {self.phase.value}"
            )
        state, overflow = advance_capacitor(
            CapacitorState(self.energy), p_amb - draw, dt, self.config.capacitor
        )
        self.energy = state.energy
        self.overflow += overflow
        self.harvested += p_amb * dt
        self.t += dt

    def _wait(self, dt: float) -> None:
        if dt <= 0:
            return
        draw = self._draw()
        phase = self.phase
        self._integrate(draw, dt)
        if phase is P.ACTIVE:
            self.energy_by["compute"] += draw * dt
            self.time_by["compute"] += dt
            self.elapsed += dt
            self.predictor = self.predictor.add_active_time(self.mode, dt)
        elif phase is P.LPMRM:
            self.energy_by["sleep"] += draw * dt
            self.time_by["sleep"] += dt
            self.sleep_time += dt
        elif phase is P.OFF_CHARGING:
            if self.cold:
                self.cold_start_time += dt
            else:
                self.off_charging_time += dt

    def _spend(self, category: str, duration: float, energy: float) -> None:
        """Atomic action; harvesting continues across trace segments while it runs."""
        if duration <= 0:
            if self.energy - energy < -ENERGY_TOL:
                raise SimulatorBug(
                    f"{category} needs {energy:.3e} J, only {self.energy:.3e} J stored"
                )
            self.energy = max(self.energy - energy, 0.0)
        else:
            draw = energy / duration
            remaining = duration
            while remaining > 0:
                now = self._trace_time()
                step = min(remaining, self.trace.segment_end(now) - now)
                self._integrate(draw, step)
                remaining -= step
        self.energy_by[category] += energy
        self.time_by[category] += duration
        if category == "msg":
            self.predictor = self.predictor.add_active_time(self.mode, duration)

    # -- next event --------------------------------------------------------

    def _crossing(self, level: float, rising: bool, net: float) -> float:
        if (rising and self.energy >= level) or (not rising and self.energy <= level):
            return 0.0
        return time_to_cross(CapacitorState(self.energy), net, level)

    def _unit(self) -> tuple[int, float]:
        """Instructions and seconds of the work unit at the cursor."""
        block = self.workload.blocks[self.cursor.block_index]
        left = block.instruction_count - self.cursor.instructions_done_in_block
        region = self.policy.region_instructions
        n = left if region is None else min(region, left)
        return n, block_cost(n, self.mode, block.cost, self.costs)[0]

    def _next_event(self) -> tuple[float, Tag, Optional[float]]:
        """(delay, tag, threshold level) of the earliest pending event."""
        cands: list[tuple[float, int, str, Tag, Optional[float]]] = []
        now = self._trace_time()
        seg_end = self.trace.segment_end(now)
        if math.isfinite(seg_end):
            kind = K.TRACE_CHANGE
            cands.append((seg_end - now, TIE_ORDER[kind], kind.value, kind, None))
        net = self._ambient() - self._draw()
        for watch in self.policy.watches(self.phase, self.thresholds):
            dt = self._crossing(watch.level, watch.rising, net)
            if dt != NEVER:
                cands.append((dt, TIE_ORDER[watch.kind], watch.kind.value, watch.kind, watch.level))
        if self.phase is P.ACTIVE:
            if self.cursor.finished(self.workload):
                kind = K.WORKLOAD_COMPLETE
                cands.append((0.0, TIE_ORDER[kind], kind.value, kind, None))
            elif self.cursor.block_index > self.entered:
                kind = K.BLOCK_BOUNDARY
                cands.append((0.0, TIE_ORDER[kind], kind.value, kind, None))
            else:
                _, unit_time = self._unit()
                cands.append((max(unit_time - self.elapsed, 0.0), 2, UNIT_END, UNIT_END, None))
            for kind, deadline in self.timers.items():
                cands.append((max(deadline - self.t, 0.0), TIE_ORDER[kind], kind.value, kind, None))
        watchdog = max(self.config.max_sim_time - self.t, 0.0)
        cands.append((watchdog, TIE_ORDER[K.WATCHDOG], K.WATCHDOG.value, K.WATCHDOG, None))
        dt, _, _, tag, level = min(cands, key=lambda c: (c[0], c[1], c[2]))
        return dt, tag, level

    # -- dispatch ----------------------------------------------------------

    def _context(self, kind: EventKind) -> PolicyContext:
        finished = self.cursor.finished(self.workload)
        block = None if finished else self.workload.blocks[self.cursor.block_index]
        remaining = 0
        if block is not None:
            remaining = block.instruction_count - self.cursor.instructions_done_in_block
        off_charge = None
        if self.phase is P.OFF_CHARGING and kind is K.HIT_HIGH:
            off_charge = (self.energy - self.off_energy, self.t - self.off_since)
        return PolicyContext(
            now=self.t,
            energy=self.energy,
            mode=self.mode,
            thresholds=self.thresholds,
            ambient_power=self._ambient(),
            costs=self.costs,
            checkpoint=self.config.checkpoint,
            predictor=self.predictor,
            predictor_cfg=self.config.predictor,
            block=block,
            remaining_in_block=remaining,
            at_block_start=finished or self.cursor.block_index > self.entered,
            has_checkpoint=self.has_checkpoint,
            jit_collapsed=self.jit_collapsed,
            off_charge=off_charge,
            cold_start=self.cold,
            samples=tuple(self.samples),
        )

    def _apply(self, action: Action, at: float) -> None:
        if isinstance(action, Spend):
            if action.category == "checkpoint":
                self.snapshot = self._snapshot()
                self.has_checkpoint = True
            self._spend(action.category, action.time, action.energy)
            if action.category in ("checkpoint", "restore", "boot"):
                self.counts[action.category] += 1
            if action.category == "boot":
                self.cold = False
        elif isinstance(action, SetMode):
            if action.mode is not self.mode:
                self.mode = action.mode
                self.counts["mode_switch"] += 1
        elif isinstance(action, SetThresholds):
            self.thresholds = action.thresholds
        elif isinstance(action, SetPredictor):
            if action.state.p_hat != self.predictor.p_hat:
                # stamped with the event time
                self.p_hat_trajectory.append((at, action.state.p_hat))
            self.predictor = action.state
        elif isinstance(action, SetJitCollapse):
            self.jit_collapsed = action.collapsed
        elif isinstance(action, ArmTimer):
            if action.deadline is None:
                self.timers.pop(action.kind, None)
            else:
                self.timers[action.kind] = action.deadline
        elif isinstance(action, RecordSample):
            self.samples.append(action.power)
        elif isinstance(action, EnterBlock):
            self.entered = self.cursor.block_index
        elif isinstance(action, PowerOff):
            self._power_off()
        else:  # pragma: no cover
            raise SimulatorBug(f"unknown action {action!r}")

    def _power_off(self) -> None:
        floor = self.config.off_floor
        if self.energy > floor:
            self.energy_by["off_drain"] += self.energy - floor
            self.energy = floor
        # volatile state is gone; what survives is the last checkpoint
        snap = self.snapshot
        self.cursor, self.elapsed, self.entered, self.mode = (
            snap.cursor,
            snap.elapsed,
            snap.entered,
            snap.mode,
        )
        self.timers.clear()
        self.off_since = self.t
        self.off_energy = self.energy

    def _dispatch(self, kind: EventKind) -> None:
        before, mode_before = self.phase, self.mode
        ctx = self._context(kind)
        transition = self.policy.transition(before, Event(kind, self.t), ctx)
        check_edge(self.policy.edges, (before, kind, transition.phase))
        if kind in (K.HIT_HIGH, K.HIT_MEDIUM, K.HIT_LOW):
            self.counts[kind.value] += 1
        energy_at = self.energy
        self.phase = transition.phase
        for action in transition.actions:
            self._apply(action, ctx.now)
        self._record(
            kind,
            before.label(mode_before),
            self.phase.label(self.mode),
            energy_at,
            transition.actions,
            ctx.now,
        )

    def _record(
        self,
        kind: EventKind,
        phase_from: str,
        phase_to: str,
        energy: float,
        actions: tuple[Action, ...],
        t: float,
    ) -> None:
        names = tuple(_action_name(a) for a in actions)
        if self.record:
            self.events.append(EventRecord(t, phase_from, kind.value, phase_to, energy, names))
        if self.events_log is not None:
            append_event(
                self.events_log,
                f"event={kind.value} from={phase_from} to={phase_to} "
                f"energy_mJ={energy * 1e3:.9f} actions={','.join(names) or '-'}",
                t,
            )
        log.debug("t=%.6f %s %s -> %s", t, kind.value, phase_from, phase_to)

    def _finish_unit(self) -> None:
        n, _ = self._unit()
        block_before = self.cursor.block_index
        self.cursor = self.cursor.advance(n, self.workload)
        self.elapsed = 0.0
        self.completed_by_mode[self.mode.value] += n
        if self.cursor.block_index != block_before and self.mode is Mode.DUAL:
            # join: the second core reports completion
            self._spend("msg", self.costs.core_msg_time, self.costs.core_msg_energy)
        if self.policy.region_instructions is not None:
            self._dispatch(K.REGION_BOUNDARY)

    # -- main loop ---------------------------------------------------------

    def run(self) -> SimulationReport:
        zero_steps = 0
        while self.phase is not P.DONE:
            dt, tag, level = self._next_event()
            zero_steps = zero_steps + 1 if dt == 0 else 0
            if zero_steps > ZERO_STEP_LIMIT:
                raise SimulatorBug(f"no progress at t={self.t} in {self.phase.value}")
            self._wait(dt)
            if tag is K.WATCHDOG:
                self.truncated = True
                label = self.phase.label(self.mode)
                self._record(K.WATCHDOG, label, label, self.energy, (), self.t)
                break
            if tag is K.TRACE_CHANGE:
                continue
            if level is not None and dt > 0:
                # land exactly on the threshold
                self.energy = level
            if tag == UNIT_END:
                self._finish_unit()
            else:
                assert isinstance(tag, EventKind)
                self._dispatch(tag)
            while self.phase in COMPLETIONS:
                self._dispatch(COMPLETIONS[self.phase])
        if self.phase is P.DONE:
            self.latency = self.t
        return self._report()

    def _instructions_completed(self) -> int:
        done = self.cursor.instructions_before(self.workload)
        if self.cursor.finished(self.workload) or self.elapsed <= 0:
            return done
        n, _ = self._unit()
        per_step = self.workload.blocks[self.cursor.block_index].cost.time
        partial = int(self.elapsed / per_step) * self.mode.cores
        return done + min(partial, n - 1)

    def _report(self) -> SimulationReport:
        power = self.trace.segments[0][1] if len(self.trace.segments) == 1 else None
        return SimulationReport(
            policy=self.config.policy.name,
            mode=self.config.policy.setting,
            trace=self.trace.name,
            power=power,
            seed=self.config.workload.seed,
            wall_clock=self.t,
            latency=self.latency,
            truncated=self.truncated,
            instructions_completed=self._instructions_completed(),
            total_instructions=self.workload.total_instructions,
            instructions_by_mode=dict(self.completed_by_mode),
            energy=dict(self.energy_by),
            time=dict(self.time_by),
            checkpoint_count=self.counts["checkpoint"],
            restore_count=self.counts["restore"],
            boot_count=self.counts["boot"],
            mode_switch_count=self.counts["mode_switch"],
            hit_high=self.counts[K.HIT_HIGH.value],
            hit_medium=self.counts[K.HIT_MEDIUM.value],
            hit_low=self.counts[K.HIT_LOW.value],
            off_charging_time=self.off_charging_time,
            sleep_time=self.sleep_time,
            cold_start_time=self.cold_start_time,
            initial_energy=self.config.initial_energy,
            final_energy=self.energy,
            harvested=self.harvested,
            overflow=self.overflow,
            config_digest=self.config.digest,
            p_hat_trajectory=list(self.p_hat_trajectory),
            events=list(self.events),
        )


def _action_name(action: Action) -> str:
    if isinstance(action, Spend):
        return action.category
    if isinstance(action, SetMode):
        return f"mode={action.mode.value}"
    if isinstance(action, ArmTimer):
        verb = "disarm" if action.deadline is None else "arm"
        return f"{verb}:{action.kind.value}"
    return type(action).__name__


def run_simulation(
    config: SimulationConfig,
    *,
    trace: Optional[PowerTrace] = None,
    workload: Optional[Workload] = None,
    record_events: Optional[bool] = None,
    events_log: Optional[pathlib.Path] = None,
) -> SimulationReport:
    sim = Simulator(
        config, trace=trace, workload=workload, record_events=record_events, events_log=events_log
    )
    return sim.run()


def next_event(sim: Simulator) -> tuple[float, Event]:
    """Earliest pending event of a live simulator, as an absolute timestamp."""
    if sim.phase is P.DONE:
        raise SimulatorBug("no pending event once the run is done")
    dt, tag, _ = sim._next_event()
    kind = tag
    if tag == UNIT_END:
        n, _ = sim._unit()
        block = sim.workload.blocks[sim.cursor.block_index]
        last = sim.cursor.block_index == len(sim.workload.blocks) - 1
        ends_block = n == block.instruction_count - sim.cursor.instructions_done_in_block
        if sim.policy.region_instructions is not None:
            kind = K.REGION_BOUNDARY
        elif last and ends_block:
            kind = K.WORKLOAD_COMPLETE
        else:
            kind = K.BLOCK_BOUNDARY
    assert isinstance(kind, EventKind)
    return sim.t + dt, Event(kind, sim.t + dt)
