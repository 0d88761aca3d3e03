from __future__ import annotations

import pathlib
from typing import Iterable, Protocol

from src.core.types import EventRow


class _Rowable(Protocol):
    def to_row(self) -> EventRow: ...


def append_event(path: pathlib.Path, msg: str, t: float) -> None:
    """One ``t=<sim seconds> key=value ...`` line; simulation time, never the wall clock."""
    line = f"t={t:.9f} {msg}\n"
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a", encoding="utf-8") as f:
        f.write(line)


def event_rows(records: Iterable[_Rowable]) -> list[EventRow]:
    return [r.to_row() for r in records]
