from __future__ import annotations

from .events import append_event, event_rows

__all__ = ["append_event", "event_rows"]
