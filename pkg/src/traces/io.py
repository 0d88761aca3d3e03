from __future__ import annotations

import math
import pathlib
from decimal import Decimal, InvalidOperation, localcontext

from src.core.errors import TraceParseError
from src.core.storage import write_text
from src.traces.model import PowerTrace

HEADER = "time_s,power_mW"

# wide enough for the exact decimal expansion of any double
_PREC = 1000


def _watts(mw_text: str) -> float:
    """mW literal to watts, scaled in decimal so the only rounding is the final one."""
    with localcontext() as ctx:
        ctx.prec = _PREC
        return float(Decimal(mw_text).scaleb(-3))


def _mw_text(power: float) -> str:
    """Shortest mW literal that reads back as exactly ``power`` watts."""
    candidate = power * 1e3
    for _ in range(4):
        text = repr(candidate)
        back = _watts(text)
        if back == power:
            return text
        candidate = math.nextafter(candidate, math.inf if back < power else -math.inf)
    with localcontext() as ctx:
        ctx.prec = _PREC
        return format(Decimal(power).scaleb(3), "f")


def save_trace(trace: PowerTrace, path: pathlib.Path) -> None:
    lines = [HEADER]
    lines += [f"{start!r},{_mw_text(power)}" for start, power in trace.segments]
    write_text(path, "\n".join(lines) + "\n")


def parse_trace(text: str, name: str = "trace") -> PowerTrace:
    segments: list[tuple[float, float]] = []
    header_allowed = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise TraceParseError(f"expected 'time_s,power_mW', got {line!r}", lineno)
        try:
            start, power = float(parts[0]), _watts(parts[1])
        except (ValueError, InvalidOperation):
            if header_allowed:
                header_allowed = False
                continue
            raise TraceParseError(f"non-numeric field in {line!r}", lineno) from None
        header_allowed = False
        if not math.isfinite(start) or not math.isfinite(power):
            raise TraceParseError(f"non-finite value in {line!r}", lineno)
        if power < 0:
            raise TraceParseError(f"negative power {parts[1]} mW", lineno)
        if not segments and start != 0.0:
            raise TraceParseError(f"first segment must start at 0, got {start}", lineno)
        if segments and start <= segments[-1][0]:
            raise TraceParseError(
                f"time {start} does not increase past {segments[-1][0]}", lineno
            )
        segments.append((start, power))
    if not segments:
        raise TraceParseError("trace file holds no segments", max(1, len(text.splitlines())))
    return PowerTrace(tuple(segments), name=name)


def load_trace(path: pathlib.Path) -> PowerTrace:
    if not path.exists():
        raise FileNotFoundError(f"Trace file not found: {path}")
    return parse_trace(path.read_text(encoding="utf-8"), name=path.stem)
